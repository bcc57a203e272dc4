"""Command-line driver: build, metrics, svg, serve."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Any, Optional

from . import levels as L
from . import manifest as MF
from . import mesh as M
from . import render
from . import routing as R
from . import server
from . import zoom as Z
from .geometry import dist_e
from .graph import GraphError, InputGraph, Ranking, ranking_for, validate
from .mesh import VertexKind


class CliError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input parsing


def load_input(path: str, positions: Optional[str] = None) -> InputGraph:
    """JSON {nodes, edges} or TSV edge list plus a TSV positions file."""
    if path.endswith(".json"):
        with open(path) as fh:
            data = json.load(fh)
        raw_nodes = []
        for n in data.get("nodes", []):
            if "rank" in n and n["rank"] is not None:
                raw_nodes.append((n["id"], n["x"], n["y"], n["rank"]))
            else:
                raw_nodes.append((n["id"], n["x"], n["y"]))
        raw_edges = [tuple(e) for e in data.get("edges", [])]
        return validate(raw_nodes, raw_edges)
    if positions is None:
        raise CliError("TSV edge list input needs --positions FILE")
    pos: dict[str, tuple] = {}
    with open(positions) as fh:
        for row in csv.reader(fh, delimiter="\t"):
            if not row or row[0].startswith("#"):
                continue
            if len(row) == 3:
                pos[row[0]] = (float(row[1]), float(row[2]))
            else:
                pos[row[0]] = (float(row[1]), float(row[2]), float(row[3]))
    raw_edges = []
    with open(path) as fh:
        for row in csv.reader(fh, delimiter="\t"):
            if not row or row[0].startswith("#"):
                continue
            raw_edges.append((row[0], row[1]))
    raw_nodes = [(nid, *vals) for nid, vals in sorted(pos.items())]
    return validate(raw_nodes, raw_edges)


# ---------------------------------------------------------------------------
# build pipeline


def run_build(g: InputGraph, levels_k: int, quota: Any, seed: int,
              mode: str, alpha: Optional[float] = None,
              beta: Optional[float] = None,
              thin_face: Optional[float] = None) -> dict[str, Any]:
    """Full deterministic pipeline from a validated graph to a manifest."""
    if levels_k < 1:
        raise CliError("levels must be at least 1")
    if quota != "auto" and int(quota) < 1:
        raise CliError("infeasible: quota must be at least 1")
    ids = [n.id for n in g.nodes]
    pts = M.sanitize_points([n.pos for n in g.nodes], seed)
    g = validate(
        [(n.id, p.x, p.y) if n.rank is None else (n.id, p.x, p.y, n.rank)
         for n, p in zip(g.nodes, pts)], g.edges)
    ranks = ranking_for(g)

    mesh0 = M.build_mesh_sim(pts, node_ids=ids)
    mesh_stretch = M.stretch_factor(mesh0)
    cfg = R.default_config(mesh0, g)
    detoured = R.add_detours(mesh0, g, cfg.port_radius)
    cfg = R.default_config(detoured, g)
    if alpha is not None:
        cfg.alpha = alpha
    if beta is not None:
        cfg.beta = beta
    if thin_face is not None:
        cfg.thin_width = thin_face
    rm = R.prune(R.route_edges(detoured, g))
    rm = R.refine_faces(rm, cfg)
    rm = R.median_pass(rm, cfg)
    rm = R.shortcut_pass(rm, cfg)
    R.check_routes(rm, g)

    tree = Z.build_tile_tree(g.positions, levels_k, mode)
    if quota == "auto":
        q = Z.min_quota(tree, ranks)
        if q is None:
            raise CliError("infeasible: no quota admits a valid assignment")
    else:
        q = int(quota)
    assign, objective = Z.solve_assignment(tree, q, ranks)
    violations = Z.check_rank_condition(assign, ranks)
    if violations:
        pairs = ", ".join(f"({a},{b})" for a, b in violations[:5])
        raise CliError(
            f"infeasible: rank condition violated at quota {q}: {pairs}")

    bundles, transitions = L.build_level_bundles(g, assign, levels_k, rm, cfg)
    return _serialize(g, ranks, assign, q, seed, mode, cfg, levels_k,
                      tree, bundles, transitions, mesh_stretch, objective)


def _serialize(g, ranks: Ranking, assign, quota: int, seed: int, mode: str,
               cfg: R.ModConfig, levels_k: int, tree, bundles, transitions,
               mesh_stretch: float, objective: int) -> dict[str, Any]:
    nodes = [{"id": n.id, "x": n.pos.x, "y": n.pos.y,
              "rank": ranks[n.id], "level": assign.g[n.id]}
             for n in g.nodes]
    edges = [[u, v] for u, v in g.edges]
    lvls = []
    ink_per_level = []
    for b in bundles:
        rails = []
        for u, v in b.rm.mesh.edges():
            p = b.rm.mesh.vertices[u].pos
            q = b.rm.mesh.vertices[v].pos
            lo, hi = sorted([(p.x, p.y), (q.x, q.y)])
            rails.append([lo[0], lo[1], hi[0], hi[1]])
        rails.sort()
        routes = sorted(
            ({"edge": list(r.edge),
              "polyline": [[p.x, p.y] for p in
                           (b.rm.mesh.vertices[x].pos for x in r.chain)]}
             for r in b.rm.routes), key=lambda r: r["edge"])
        tiles = L.tile_metrics(b, tree)
        ink = R.total_ink(b.rm)
        ink_per_level.append(ink)
        lvls.append({"level": b.level, "rails": rails, "routes": routes,
                     "tiles": tiles, "ink": ink,
                     "viewport_max": L.viewport_maxima(b, tree)})
    trans = []
    for ts in transitions:
        pairs = sorted(
            ({"edge": list(e), "a": [[p.x, p.y] for p in pa],
              "b": [[p.x, p.y] for p in pb]}
             for e, (pa, pb) in ts.pairs.items()),
            key=lambda p: p["edge"])
        trans.append({"from": ts.src_level, "to": ts.dst_level,
                      "pairs": pairs})
    bottom = bundles[-1]
    degree_hist: dict[str, int] = {}
    for vid, vert in bottom.rm.mesh.vertices.items():
        if vert.kind is VertexKind.JUNCTION:
            d = str(bottom.rm.mesh.degree(vid))
            degree_hist[d] = degree_hist.get(d, 0) + 1
    dilation = 0.0
    for r in bottom.rm.routes:
        u, v = r.edge
        d = dist_e(g.node(u).pos, g.node(v).pos)
        if d > 0:
            dilation = max(dilation, r.length / d)
    metrics = {
        "stretch": mesh_stretch,
        "route_dilation": dilation,
        "objective_f": objective,
        "ink_per_level": ink_per_level,
        "max_tile_visible": max(
            (t["visible"] for lv in lvls for t in lv["tiles"]), default=0),
        "max_viewport_visible": max(
            (lv["viewport_max"] for lv in lvls), default=0),
        "junction_degree_histogram": degree_hist,
    }
    config = {"levels": levels_k, "quota": quota, "seed": seed, "mode": mode,
              "alpha": cfg.alpha, "beta": cfg.beta,
              "thin_face": cfg.thin_width, "port_radius": cfg.port_radius}
    return MF.build_manifest(config, nodes, edges, lvls, trans, metrics)


# ---------------------------------------------------------------------------
# commands


def cmd_build(args: argparse.Namespace) -> int:
    g = load_input(args.input, args.positions)
    man = run_build(g, args.levels, args.quota, args.seed, args.mode,
                    args.alpha, args.beta, args.thin_face)
    os.makedirs(args.out, exist_ok=True)
    MF.write(man, os.path.join(args.out, "manifest.json"))
    for lv in man["levels"]:
        svg = render.level_svg(man, lv["level"])
        with open(os.path.join(args.out, f"level_{lv['level']}.svg"),
                  "w") as fh:
            fh.write(svg)
    print(f"wrote {args.out}/manifest.json "
          f"({len(man['nodes'])} nodes, {len(man['levels'])} levels, "
          f"quota {man['config']['quota']})")
    return 0


def compute_metrics_report(man: dict[str, Any]) -> list[tuple[str, Any]]:
    """Re-derive the headline numbers from manifest geometry."""
    rows: list[tuple[str, Any]] = []
    for lv in man["levels"]:
        ink = sum(
            ((r[2] - r[0]) ** 2 + (r[3] - r[1]) ** 2) ** 0.5
            for r in lv["rails"])
        rows.append((f"ink_level_{lv['level']}", ink))
    rows.append(("stretch", man["metrics"]["stretch"]))
    rows.append(("route_dilation", man["metrics"]["route_dilation"]))
    rows.append(("objective_f", man["metrics"]["objective_f"]))
    rows.append(("max_tile_visible", man["metrics"]["max_tile_visible"]))
    rows.append(("max_viewport_visible",
                 man["metrics"]["max_viewport_visible"]))
    for lv in man["levels"]:
        rows.append((f"tile_rail_crossings_level_{lv['level']}",
                     max((t["rail_crossings"] for t in lv["tiles"]),
                         default=0)))
    for d, c in sorted(man["metrics"]["junction_degree_histogram"].items(),
                       key=lambda x: int(x[0])):
        rows.append((f"junction_degree_{d}", c))
    return rows


def cmd_metrics(args: argparse.Namespace) -> int:
    man = MF.read(args.manifest)
    rows = compute_metrics_report(man)
    out_dir = os.path.dirname(os.path.abspath(args.manifest))
    tsv_path = os.path.join(out_dir, "metrics.tsv")
    with open(tsv_path, "w") as fh:
        for key, val in rows:
            fh.write(f"{key}\t{val}\n")
    figures = render.metric_figures(man, os.path.join(out_dir, "metrics"))
    for key, val in rows:
        print(f"{key}\t{val}")
    print(f"wrote {tsv_path} and {len(figures)} figures", file=sys.stderr)
    return 0


def cmd_svg(args: argparse.Namespace) -> int:
    man = MF.read(args.manifest)
    if args.level not in {lv["level"] for lv in man["levels"]}:
        raise CliError(f"no such level: {args.level}")
    sys.stdout.write(render.level_svg(man, args.level))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    server.serve(args.dir, args.port)
    return 0


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphatlas")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="run the full pipeline")
    b.add_argument("--input", required=True)
    b.add_argument("--positions", default=None,
                   help="TSV positions file for TSV edge-list input")
    b.add_argument("--levels", type=int, default=3)
    b.add_argument("--quota", default="auto",
                   type=lambda s: s if s == "auto" else int(s))
    b.add_argument("--alpha", type=float, default=None)
    b.add_argument("--beta", type=float, default=None)
    b.add_argument("--thin-face", dest="thin_face", type=float, default=None)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--mode", choices=("1d", "2d"), default="2d")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    mt = sub.add_parser("metrics", help="report metrics of a manifest")
    mt.add_argument("manifest")
    mt.set_defaults(func=cmd_metrics)

    sv = sub.add_parser("svg", help="print one level as SVG")
    sv.add_argument("manifest")
    sv.add_argument("--level", type=int, required=True)
    sv.set_defaults(func=cmd_svg)

    se = sub.add_parser("serve", help="serve a built output directory")
    se.add_argument("dir")
    se.add_argument("--port", type=int, default=8000)
    se.set_defaults(func=cmd_serve)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, GraphError, MF.ManifestError, M.MeshError,
            R.RoutingError, L.LevelError, Z.ZoomError,
            FileNotFoundError, NotADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
