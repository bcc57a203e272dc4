// Pure viewer logic: level switching, selection highlighting, transition
// interpolation and hit-testing. No DOM access so everything here runs in
// headless tests. All layout authority rests in the manifest; this module
// never recomputes geometry beyond linear interpolation.

import { Manifest, ManifestNode, TransitionPair } from "./types.js";

// The rendering switches from level i-1 to i when the zoom factor reaches
// 2^(i-1), clamped to the deepest level k.
export function levelForZoom(z: number, k: number): number {
    if (z < 1) {
        throw new Error(`zoom factor must be >= 1, got ${z}`);
    }
    return Math.min(k, Math.floor(Math.log2(z)) + 1);
}

export interface SelectionHighlight {
    node: string;
    // full-graph adjacency, independent of the active level
    neighbors: string[];
    // neighbors invisible at the active level, drawn as labeled dots
    hiddenNeighbors: string[];
    // bottom-level route polylines of the incident edges, to thicken
    rails: number[][][];
}

export function neighborsOf(m: Manifest, id: string): string[] {
    const out: string[] = [];
    for (const [u, v] of m.edges) {
        if (u === id) out.push(v);
        if (v === id) out.push(u);
    }
    out.sort();
    return out;
}

export function highlight(m: Manifest, id: string,
                          activeLevel: number): SelectionHighlight {
    const node = m.nodes.find((n) => n.id === id);
    if (!node) {
        throw new Error(`unknown node id: ${id}`);
    }
    const neighbors = neighborsOf(m, id);
    const levelOf = new Map(m.nodes.map((n) => [n.id, n.level]));
    const hiddenNeighbors = neighbors.filter(
        (nb) => (levelOf.get(nb) ?? 1) > activeLevel);
    // bottom-level routes carry the full detail for every edge
    const bottom = m.levels[m.levels.length - 1];
    const rails: number[][][] = [];
    for (const r of bottom.routes) {
        if (r.edge[0] === id || r.edge[1] === id) {
            rails.push(r.polyline);
        }
    }
    return { node: id, neighbors, hiddenNeighbors, rails };
}

// Linear interpolation of one transition pair. The ends return the stored
// polylines themselves so the first and last frames match the manifest
// geometry exactly.
export function transitionFrame(pair: TransitionPair, t: number): number[][] {
    if (t <= 0) return pair.a.map((p) => [...p]);
    if (t >= 1) return pair.b.map((p) => [...p]);
    return pair.a.map((p, i) => {
        const q = pair.b[i];
        return [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
    });
}

export function nodeRadius(rank: number, maxRank: number): number {
    if (maxRank <= 0) return 3;
    return 3 + 5 * Math.sqrt(rank / maxRank);
}

// Pick the node under a pointer, in screen pixels. Radius is the rendered
// disk radius but never below 4 px.
export function hitTest(nodes: ManifestNode[], px: number, py: number,
                        toScreen: (x: number, y: number) => [number, number],
                        maxRank: number): ManifestNode | null {
    let best: ManifestNode | null = null;
    let bestDist = Infinity;
    for (const n of nodes) {
        const [sx, sy] = toScreen(n.x, n.y);
        const r = Math.max(4, nodeRadius(n.rank, maxRank));
        const d = Math.hypot(sx - px, sy - py);
        if (d <= r && d < bestDist) {
            best = n;
            bestDist = d;
        }
    }
    return best;
}

// Distinct selection colors; overlapping highlights are drawn with
// transparency by the renderer.
const PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
                 "#17becf"];

export function selectionColor(index: number): string {
    return PALETTE[index % PALETTE.length];
}

export interface ViewState {
    // viewport center in layout units plus zoom factor z >= 1
    cx: number;
    cy: number;
    zoom: number;
    level: number;
    selections: Map<string, string>; // node id -> color
    t: number; // transition parameter, 0 outside transitions
}

export function initialView(m: Manifest): ViewState {
    const xs = m.nodes.map((n) => n.x);
    const ys = m.nodes.map((n) => n.y);
    return {
        cx: (Math.min(...xs) + Math.max(...xs)) / 2,
        cy: (Math.min(...ys) + Math.max(...ys)) / 2,
        zoom: 1,
        level: 1,
        selections: new Map(),
        t: 0,
    };
}

export function encodeHash(v: ViewState): string {
    const sel = [...v.selections.keys()].join(",");
    return `#x=${v.cx.toFixed(3)}&y=${v.cy.toFixed(3)}` +
        `&z=${v.zoom.toFixed(3)}${sel ? `&sel=${sel}` : ""}`;
}

export function decodeHash(hash: string, base: ViewState): ViewState {
    const out = { ...base, selections: new Map(base.selections) };
    const body = hash.startsWith("#") ? hash.slice(1) : hash;
    for (const part of body.split("&")) {
        const [key, val] = part.split("=");
        if (key === "x") out.cx = parseFloat(val);
        if (key === "y") out.cy = parseFloat(val);
        if (key === "z") out.zoom = Math.max(1, parseFloat(val));
        if (key === "sel" && val) {
            val.split(",").forEach((id, i) => {
                out.selections.set(id, selectionColor(i));
            });
        }
    }
    return out;
}
