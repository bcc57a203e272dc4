"""Static rendering: per-level SVG documents and metric figures."""

from __future__ import annotations

import math
from typing import Any

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def level_svg(manifest: dict[str, Any], level: int, width: int = 800) -> str:
    """One zoom level as SVG: rails, rank-scaled visible nodes, gray dots
    for the nodes hidden at this level."""
    levels = {lv["level"]: lv for lv in manifest["levels"]}
    if level not in levels:
        raise ValueError(f"no such level: {level}")
    lv = levels[level]
    xs = [n["x"] for n in manifest["nodes"]]
    ys = [n["y"] for n in manifest["nodes"]]
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)
    span = max(maxx - minx, maxy - miny, 1e-9)
    pad = 0.06 * span
    scale = width / (maxx - minx + 2 * pad)
    height = int((maxy - miny + 2 * pad) * scale)

    def tr(x: float, y: float) -> tuple[float, float]:
        return ((x - minx + pad) * scale, (maxy - y + pad) * scale)

    ranks = [n["rank"] for n in manifest["nodes"]]
    rmax = max(ranks) if ranks else 1.0
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             '<rect width="100%" height="100%" fill="white"/>']
    for rail in lv["rails"]:
        (x1, y1), (x2, y2) = tr(rail[0], rail[1]), tr(rail[2], rail[3])
        parts.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" '
                     f'y2="{y2:.2f}" stroke="#4878a8" stroke-width="1.2"/>')
    for n in manifest["nodes"]:
        x, y = tr(n["x"], n["y"])
        if n["level"] <= level:
            r = 3.0 + 5.0 * math.sqrt(n["rank"] / rmax) if rmax > 0 else 3.0
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" '
                         f'fill="#c44" stroke="#611"/>'
                         f'<title>{n["id"]}</title>')
        else:
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.5" '
                         f'fill="#999"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def metric_figures(manifest: dict[str, Any], out_prefix: str) -> list[str]:
    """Render metric charts next to the textual report; returns file paths."""
    met = manifest["metrics"]
    paths = []

    fig, ax = plt.subplots(figsize=(5, 3))
    lv = [x["level"] for x in manifest["levels"]]
    ax.bar(lv, met["ink_per_level"], color="#4878a8")
    ax.set_xlabel("level")
    ax.set_ylabel("ink")
    ax.set_title("ink per level")
    fig.tight_layout()
    p = f"{out_prefix}_ink.png"
    fig.savefig(p, dpi=110)
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(5, 3))
    hist = met["junction_degree_histogram"]
    degrees = sorted(int(d) for d in hist)
    ax.bar(degrees, [hist[str(d)] for d in degrees], color="#a85848")
    ax.set_xlabel("junction degree (bottom level)")
    ax.set_ylabel("count")
    ax.set_title("junction degrees")
    fig.tight_layout()
    p = f"{out_prefix}_degrees.png"
    fig.savefig(p, dpi=110)
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(5, 3))
    counts = [len([n for n in manifest["nodes"] if n["level"] <= i])
              for i in lv]
    ax.plot(lv, counts, marker="o", color="#488858")
    ax.set_xlabel("level")
    ax.set_ylabel("visible nodes")
    ax.set_title("visible nodes per level")
    fig.tight_layout()
    p = f"{out_prefix}_nodes.png"
    fig.savefig(p, dpi=110)
    plt.close(fig)
    paths.append(p)
    return paths
