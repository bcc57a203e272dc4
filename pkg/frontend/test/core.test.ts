import { describe, expect, it } from "vitest";

import {
    decodeHash, encodeHash, highlight, hitTest, initialView, levelForZoom,
    nodeRadius, selectionColor, transitionFrame,
} from "../src/core.js";
import { Manifest } from "../src/types.js";

describe("levelForZoom", () => {
    it("matches the power-of-two switching table for k <= 6", () => {
        for (let k = 1; k <= 6; k++) {
            for (let level = 1; level <= k; level++) {
                const lo = Math.pow(2, level - 1);
                expect(levelForZoom(lo, k)).toBe(level);
                expect(levelForZoom(lo * 1.999, k)).toBe(level);
            }
            // clamp far beyond the deepest switch point
            expect(levelForZoom(Math.pow(2, k + 3), k)).toBe(k);
        }
    });

    it("starts at the top view", () => {
        expect(levelForZoom(1, 3)).toBe(1);
        expect(levelForZoom(2, 3)).toBe(2);
        expect(levelForZoom(5, 3)).toBe(3);
    });

    it("is monotone and surjective on [1, 2^(k-1)]", () => {
        const k = 6;
        let prev = 1;
        const seen = new Set<number>();
        for (let z = 1; z <= Math.pow(2, k - 1); z += 0.25) {
            const lv = levelForZoom(z, k);
            expect(lv).toBeGreaterThanOrEqual(prev);
            prev = lv;
            seen.add(lv);
        }
        expect([...seen].sort()).toEqual([1, 2, 3, 4, 5, 6]);
    });

    it("rejects zoom below 1", () => {
        expect(() => levelForZoom(0.5, 3)).toThrow();
    });
});

function tinyManifest(): Manifest {
    // a 4-node path a-b-c-d plus chord a-c; c and d appear only at level 2
    return {
        format_version: 1,
        config: { levels: 2, quota: 2, seed: 0, mode: "2d", alpha: 45,
                  beta: 0.1, thin_face: 0.1, port_radius: 0.1 },
        nodes: [
            { id: "a", x: 0, y: 0, rank: 2, level: 1 },
            { id: "b", x: 10, y: 0, rank: 2, level: 1 },
            { id: "c", x: 10, y: 10, rank: 1, level: 2 },
            { id: "d", x: 0, y: 10, rank: 1, level: 2 },
        ],
        edges: [["a", "b"], ["b", "c"], ["c", "d"], ["a", "c"]],
        levels: [
            {
                level: 1, rails: [], tiles: [], ink: 10, viewport_max: 2,
                routes: [
                    { edge: ["a", "b"], polyline: [[0, 0], [10, 0]] },
                ],
            },
            {
                level: 2, rails: [], tiles: [], ink: 40, viewport_max: 4,
                routes: [
                    { edge: ["a", "b"], polyline: [[0, 0], [10, 0]] },
                    { edge: ["b", "c"], polyline: [[10, 0], [10, 10]] },
                    { edge: ["c", "d"], polyline: [[10, 10], [0, 10]] },
                    { edge: ["a", "c"],
                      polyline: [[0, 0], [5, 5], [10, 10]] },
                ],
            },
        ],
        transitions: [{
            from: 1, to: 2,
            pairs: [{ edge: ["a", "b"],
                      a: [[0, 0], [10, 0]], b: [[0, 0], [10, 0]] }],
        }],
        metrics: {},
    };
}

describe("highlight", () => {
    it("uses the full edge list, not the visible subgraph", () => {
        const h = highlight(tinyManifest(), "a", 1);
        expect(h.neighbors).toEqual(["b", "c"]);
    });

    it("flags neighbors hidden at the active level", () => {
        const h = highlight(tinyManifest(), "a", 1);
        expect(h.hiddenNeighbors).toEqual(["c"]);
        const deep = highlight(tinyManifest(), "a", 2);
        expect(deep.hiddenNeighbors).toEqual([]);
    });

    it("thickens the bottom-level routes of incident edges", () => {
        const h = highlight(tinyManifest(), "a", 1);
        expect(h.rails).toEqual([
            [[0, 0], [10, 0]],
            [[0, 0], [5, 5], [10, 10]],
        ]);
    });

    it("isolated node has no neighbors and no rails", () => {
        const m = tinyManifest();
        m.nodes.push({ id: "z", x: 5, y: 5, rank: 1, level: 2 });
        const h = highlight(m, "z", 2);
        expect(h.neighbors).toEqual([]);
        expect(h.rails).toEqual([]);
    });

    it("rejects unknown node ids", () => {
        expect(() => highlight(tinyManifest(), "nope", 1)).toThrow();
    });
});

describe("transitionFrame", () => {
    const pair = { edge: ["a", "b"] as [string, string],
                   a: [[0, 0], [4, 0], [8, 0]],
                   b: [[0, 0], [4, 4], [8, 0]] };

    it("reproduces the stored polylines exactly at the ends", () => {
        expect(transitionFrame(pair, 0)).toEqual(pair.a);
        expect(transitionFrame(pair, 1)).toEqual(pair.b);
    });

    it("moves each control point linearly", () => {
        const half = transitionFrame(pair, 0.5);
        expect(half).toEqual([[0, 0], [4, 2], [8, 0]]);
        const quarter = transitionFrame(pair, 0.25);
        expect(quarter[1]).toEqual([4, 1]);
    });

    it("identical pairs give static frames", () => {
        const still = { edge: ["a", "b"] as [string, string],
                        a: [[0, 0], [1, 1]], b: [[0, 0], [1, 1]] };
        for (const t of [0, 0.3, 0.7, 1]) {
            expect(transitionFrame(still, t)).toEqual(still.a);
        }
    });
});

describe("hit testing", () => {
    const nodes = tinyManifest().nodes;
    const ident = (x: number, y: number): [number, number] => [x, y];

    it("uses at least a 4 px radius", () => {
        const small = [{ id: "s", x: 0, y: 0, rank: 0, level: 1 }];
        expect(hitTest(small, 3.5, 0, ident, 100)).not.toBeNull();
        expect(hitTest(small, 9, 0, ident, 100)).toBeNull();
    });

    it("picks the nearest disk under the pointer", () => {
        const hit = hitTest(nodes, 9, 1, ident, 2);
        expect(hit?.id).toBe("b");
    });

    it("radius grows with rank", () => {
        expect(nodeRadius(2, 2)).toBeGreaterThan(nodeRadius(1, 2));
        expect(nodeRadius(0, 0)).toBe(3);
    });
});

describe("view state hash", () => {
    it("round-trips viewport and selections", () => {
        const base = initialView(tinyManifest());
        base.cx = 3.25;
        base.cy = -1.5;
        base.zoom = 2.5;
        base.selections.set("a", selectionColor(0));
        base.selections.set("c", selectionColor(1));
        const out = decodeHash(encodeHash(base), initialView(tinyManifest()));
        expect(out.cx).toBeCloseTo(3.25);
        expect(out.cy).toBeCloseTo(-1.5);
        expect(out.zoom).toBeCloseTo(2.5);
        expect([...out.selections.keys()]).toEqual(["a", "c"]);
    });

    it("clamps decoded zoom to >= 1", () => {
        const out = decodeHash("#z=0.2", initialView(tinyManifest()));
        expect(out.zoom).toBe(1);
    });
});
