export interface ManifestNode {
    id: string;
    x: number;
    y: number;
    rank: number;
    level: number;
}

export interface RouteRec {
    edge: [string, string];
    polyline: number[][];
}

export interface TileRec {
    tile: number;
    rect: [number, number, number, number];
    visible: number;
    rail_crossings: number;
}

export interface LevelRec {
    level: number;
    rails: number[][];
    routes: RouteRec[];
    tiles: TileRec[];
    ink: number;
    viewport_max: number;
}

export interface TransitionPair {
    edge: [string, string];
    a: number[][];
    b: number[][];
}

export interface TransitionRec {
    from: number;
    to: number;
    pairs: TransitionPair[];
}

export interface ManifestConfig {
    levels: number;
    quota: number;
    seed: number;
    mode: string;
    alpha: number;
    beta: number;
    thin_face: number;
    port_radius: number;
}

export interface Manifest {
    format_version: number;
    config: ManifestConfig;
    nodes: ManifestNode[];
    edges: [string, string][];
    levels: LevelRec[];
    transitions: TransitionRec[];
    metrics: Record<string, unknown>;
}

export function checkManifest(m: Manifest): Manifest {
    if (m.format_version !== 1) {
        throw new Error(`unsupported manifest format ${m.format_version}`);
    }
    return m;
}
