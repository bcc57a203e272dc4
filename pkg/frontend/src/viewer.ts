// Canvas viewer: fetches the manifest once, then renders pan/zoom views
// with level switching, animated level transitions with node fade-in, and
// click-to-highlight selections.

import {
    ViewState, decodeHash, encodeHash, highlight, hitTest, initialView,
    levelForZoom, nodeRadius, selectionColor, transitionFrame,
} from "./core.js";
import { LevelRec, Manifest, checkManifest } from "./types.js";

const TRANSITION_MS = 450;

class Viewer {
    private view: ViewState;
    private ctx: CanvasRenderingContext2D;
    private maxRank: number;
    private dragging = false;
    private lastX = 0;
    private lastY = 0;
    private animFrom = 0;
    private animStart = 0;

    constructor(private canvas: HTMLCanvasElement,
                private manifest: Manifest) {
        this.ctx = canvas.getContext("2d")!;
        this.maxRank = Math.max(...manifest.nodes.map((n) => n.rank), 0);
        this.view = decodeHash(location.hash, initialView(manifest));
        this.view.level = levelForZoom(this.view.zoom,
                                       manifest.config.levels);
        canvas.addEventListener("wheel", (e) => this.onWheel(e));
        canvas.addEventListener("mousedown", (e) => this.onDown(e));
        canvas.addEventListener("mousemove", (e) => this.onMove(e));
        canvas.addEventListener("mouseup", (e) => this.onUp(e));
        canvas.addEventListener("mouseleave", () => { this.dragging = false; });
        this.draw();
    }

    private scale(): number {
        const xs = this.manifest.nodes.map((n) => n.x);
        const span = Math.max(...xs) - Math.min(...xs) || 1;
        return (this.canvas.width * 0.85 / span) * this.view.zoom;
    }

    private toScreen(x: number, y: number): [number, number] {
        const s = this.scale();
        return [this.canvas.width / 2 + (x - this.view.cx) * s,
                this.canvas.height / 2 - (y - this.view.cy) * s];
    }

    private onWheel(e: WheelEvent): void {
        e.preventDefault();
        const factor = Math.exp(-e.deltaY / 400);
        const oldLevel = this.view.level;
        this.view.zoom = Math.max(1, this.view.zoom * factor);
        const level = levelForZoom(this.view.zoom,
                                   this.manifest.config.levels);
        if (level !== oldLevel) {
            this.animFrom = oldLevel;
            this.animStart = performance.now();
        }
        this.view.level = level;
        this.syncHash();
        this.draw();
    }

    private onDown(e: MouseEvent): void {
        this.dragging = true;
        this.lastX = e.offsetX;
        this.lastY = e.offsetY;
    }

    private onMove(e: MouseEvent): void {
        if (!this.dragging) return;
        const s = this.scale();
        this.view.cx -= (e.offsetX - this.lastX) / s;
        this.view.cy += (e.offsetY - this.lastY) / s;
        this.lastX = e.offsetX;
        this.lastY = e.offsetY;
        this.syncHash();
        this.draw();
    }

    private onUp(e: MouseEvent): void {
        const moved = Math.hypot(e.offsetX - this.lastX,
                                 e.offsetY - this.lastY);
        this.dragging = false;
        if (moved > 3) return;
        const hit = hitTest(this.manifest.nodes, e.offsetX, e.offsetY,
                            (x, y) => this.toScreen(x, y), this.maxRank);
        if (!hit) return;
        if (this.view.selections.has(hit.id)) {
            this.view.selections.delete(hit.id);
        } else {
            const color = selectionColor(this.view.selections.size);
            this.view.selections.set(hit.id, color);
        }
        this.syncHash();
        this.draw();
    }

    private syncHash(): void {
        history.replaceState(null, "", encodeHash(this.view));
    }

    private levelRec(level: number): LevelRec {
        return this.manifest.levels.find((lv) => lv.level === level)!;
    }

    private draw(): void {
        const now = performance.now();
        const since = now - this.animStart;
        const animating = this.animFrom > 0 && since < TRANSITION_MS;
        this.view.t = animating ? since / TRANSITION_MS : 0;
        const ctx = this.ctx;
        ctx.fillStyle = "#fff";
        ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);

        if (animating && this.animFrom < this.view.level) {
            this.drawTransition(this.animFrom, this.view.level, this.view.t);
            requestAnimationFrame(() => this.draw());
        } else {
            this.animFrom = 0;
            this.drawLevel(this.levelRec(this.view.level), 1);
        }
        this.drawSelections();
        this.drawNodes(this.view.level, animating ? this.view.t : 1);
    }

    private drawLevel(lv: LevelRec, alpha: number): void {
        const ctx = this.ctx;
        ctx.strokeStyle = `rgba(72, 120, 168, ${alpha})`;
        ctx.lineWidth = 1.2;
        for (const rail of lv.rails) {
            const [x1, y1] = this.toScreen(rail[0], rail[1]);
            const [x2, y2] = this.toScreen(rail[2], rail[3]);
            ctx.beginPath();
            ctx.moveTo(x1, y1);
            ctx.lineTo(x2, y2);
            ctx.stroke();
        }
    }

    private drawTransition(from: number, to: number, t: number): void {
        // shared edges morph; rails only present at the finer level fade in
        const ts = this.manifest.transitions.find(
            (x) => x.from === from && x.to === to);
        if (!ts) {
            this.drawLevel(this.levelRec(to), 1); // hard switch fallback
            return;
        }
        const ctx = this.ctx;
        ctx.strokeStyle = "#4878a8";
        ctx.lineWidth = 1.2;
        for (const pair of ts.pairs) {
            const frame = transitionFrame(pair, t);
            ctx.beginPath();
            frame.forEach(([x, y], i) => {
                const [sx, sy] = this.toScreen(x, y);
                if (i === 0) ctx.moveTo(sx, sy);
                else ctx.lineTo(sx, sy);
            });
            ctx.stroke();
        }
        const shown = new Set(ts.pairs.map((p) => p.edge.join("|")));
        ctx.strokeStyle = `rgba(72, 120, 168, ${t})`;
        for (const r of this.levelRec(to).routes) {
            if (shown.has(r.edge.join("|"))) continue;
            ctx.beginPath();
            r.polyline.forEach(([x, y], i) => {
                const [sx, sy] = this.toScreen(x, y);
                if (i === 0) ctx.moveTo(sx, sy);
                else ctx.lineTo(sx, sy);
            });
            ctx.stroke();
        }
    }

    private drawSelections(): void {
        const ctx = this.ctx;
        ctx.globalAlpha = 0.55; // overlapping highlights stay readable
        let i = 0;
        for (const [id, color] of this.view.selections) {
            const h = highlight(this.manifest, id, this.view.level);
            ctx.strokeStyle = color;
            ctx.lineWidth = 4;
            for (const pl of h.rails) {
                ctx.beginPath();
                pl.forEach(([x, y], j) => {
                    const [sx, sy] = this.toScreen(x, y);
                    if (j === 0) ctx.moveTo(sx, sy);
                    else ctx.lineTo(sx, sy);
                });
                ctx.stroke();
            }
            for (const nb of h.hiddenNeighbors) {
                const n = this.manifest.nodes.find((x) => x.id === nb)!;
                const [sx, sy] = this.toScreen(n.x, n.y);
                ctx.fillStyle = color;
                ctx.beginPath();
                ctx.arc(sx, sy, 3, 0, 2 * Math.PI);
                ctx.fill();
                ctx.fillStyle = "#333";
                ctx.fillText(n.id, sx + 5, sy - 5);
            }
            i += 1;
        }
        ctx.globalAlpha = 1;
    }

    private drawNodes(level: number, fade: number): void {
        const ctx = this.ctx;
        for (const n of this.manifest.nodes) {
            const [sx, sy] = this.toScreen(n.x, n.y);
            if (n.level > level) {
                ctx.fillStyle = "#999";
                ctx.beginPath();
                ctx.arc(sx, sy, 1.5, 0, 2 * Math.PI);
                ctx.fill();
                continue;
            }
            // nodes new at this level fade in with the transition
            const alpha = n.level === level ? fade : 1;
            ctx.globalAlpha = alpha;
            ctx.fillStyle = "#c44";
            ctx.strokeStyle = "#611";
            ctx.beginPath();
            ctx.arc(sx, sy, nodeRadius(n.rank, this.maxRank), 0, 2 * Math.PI);
            ctx.fill();
            ctx.stroke();
            ctx.globalAlpha = 1;
        }
    }
}

export async function start(canvasId: string): Promise<Viewer> {
    const resp = await fetch("/manifest.json");
    if (!resp.ok) {
        throw new Error(`manifest fetch failed: ${resp.status}`);
    }
    const manifest = checkManifest(await resp.json() as Manifest);
    const canvas = document.getElementById(canvasId) as HTMLCanvasElement;
    return new Viewer(canvas, manifest);
}
