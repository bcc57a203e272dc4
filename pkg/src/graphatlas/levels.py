"""Per-zoom-level graphs, meshes and routes, plus transition interpolation.

Level k carries the full routed drawing.  Each coarser level hides the
deeper nodes, drops their edges' routes, prunes the mesh, and straightens
the surviving routes; consecutive levels get equal-length control polylines
for smooth interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .geometry import (Point, Rect, Segment, SegmentOverlapError, dist_e,
                       point_seg_dist, resample, seg_intersect)
from .graph import InputGraph
from .mesh import Mesh, VertexKind
from .routing import ModConfig, Route, RoutedMesh, _simplify_chain
from .zoom import LevelAssignment, Tile, TileTree

_EPS = 1e-9


class LevelError(ValueError):
    pass


@dataclass
class LevelBundle:
    level: int
    node_ids: list[str]  # visible nodes, sorted
    edges: list[tuple[str, str]]  # induced edges
    rm: RoutedMesh
    hidden: set[str] = field(default_factory=set)  # demoted node vertex ids


@dataclass
class TransitionSet:
    src_level: int
    dst_level: int
    # edge -> (coarse control polyline, fine control polyline), equal lengths
    pairs: dict[tuple[str, str], tuple[list[Point], list[Point]]]


def level_graphs(g: InputGraph, a: LevelAssignment,
                 k: int) -> list[tuple[list[str], list[tuple[str, str]]]]:
    """Visible node set and induced edge set per level 1..k."""
    out = []
    for i in range(1, k + 1):
        vis = sorted(v for v, lvl in a.g.items() if lvl <= i)
        vset = set(vis)
        edges = [(u, v) for u, v in g.edges if u in vset and v in vset]
        out.append((vis, edges))
    return out


def bottom_bundle(g: InputGraph, a: LevelAssignment, k: int,
                  rm: RoutedMesh) -> LevelBundle:
    vis, edges = level_graphs(g, a, k)[-1]
    return LevelBundle(k, vis, edges, rm)


def derive_level_mesh(bundle: LevelBundle,
                      gprev: tuple[list[str], list[tuple[str, str]]]
                      ) -> LevelBundle:
    """Bundle for the next-coarser level.

    Hidden node vertices become plain junctions, routes of absent edges are
    dropped, and unused rails are pruned.  Surviving route geometry is
    untouched; straightening happens in simplify_routes.
    """
    vis, edges = gprev
    vset = set(vis)
    eset = set(edges)
    rm = bundle.rm.copy()
    rm.routes = [r for r in rm.routes if r.edge in eset]
    rm.recount_usage()
    for u, v in list(rm.mesh.edges()):
        key = (u, v) if u < v else (v, u)
        if rm.usage.get(key, 0) == 0:
            rm.mesh.remove_edge(u, v)
    hidden = set(bundle.hidden)
    for vid in list(rm.mesh.vertices):
        vert = rm.mesh.vertices[vid]
        if vert.kind is VertexKind.NODE and vert.node_id not in vset:
            vert.kind = VertexKind.JUNCTION
            vert.node_id = None
            hidden.add(vid)
        if rm.mesh.degree(vid) == 0 and vert.kind is not VertexKind.NODE:
            rm.mesh.remove_vertex(vid)
            hidden.discard(vid)
    return LevelBundle(bundle.level - 1, list(vis), list(edges), rm, hidden)


def simplify_routes(bundle: LevelBundle, cfg: ModConfig,
                    avoid_hidden: bool = False) -> LevelBundle:
    """Straighten routes by chord-replacing interior bends to a fixpoint.

    A bend (a, b, c) becomes the chord (a, c) only when the chord crosses no
    rail, stays beta clear of every other vertex, keeps angular resolution
    alpha at both ends, and does not grow the total ink.  The replacement is
    applied to every route traversing the bend at once.  By default the
    clearance check ignores junctions left behind by hidden nodes, so a
    straightened route may cross a hidden node's former position;
    avoid_hidden=True keeps those positions clear too.
    """
    out = LevelBundle(bundle.level, list(bundle.node_ids),
                      list(bundle.edges), bundle.rm.copy(),
                      set(bundle.hidden))
    skip_clear = set() if avoid_hidden else set(bundle.hidden)
    rm = out.rm
    changed = True
    while changed:
        changed = False
        for route in sorted(rm.routes, key=lambda r: r.edge):
            i = 0
            while i + 2 < len(route.chain):
                a, b, c = route.chain[i:i + 3]
                if a != c and _bend_replaceable(rm, a, b, c, cfg,
                                               skip_clear):
                    _apply_chord(rm, a, b, c)
                    changed = True
                else:
                    i += 1
    return out


def _bend_replaceable(rm: RoutedMesh, a: str, b: str, c: str,
                      cfg: ModConfig, skip_clear: set[str]) -> bool:
    mesh = rm.mesh
    pa, pc = mesh.vertices[a].pos, mesh.vertices[c].pos
    new_rail = not mesh.has_edge(a, c)
    chord = Segment(pa, pc)
    diag = max(mesh.boundary.diagonal, 1.0)
    if dist_e(pa, pc) <= _EPS * diag:
        return False
    drop_ab = _usage_after(rm, a, b, c, a, b) == 0
    drop_bc = _usage_after(rm, a, b, c, b, c) == 0
    if new_rail:
        for u, v in mesh.edges():
            if {u, v} & {a, b, c}:
                continue
            s = Segment(mesh.vertices[u].pos, mesh.vertices[v].pos)
            try:
                if seg_intersect(chord, s) is not None:
                    return False
            except SegmentOverlapError:
                return False
        for w, vert in mesh.vertices.items():
            if w in (a, b, c) or w in skip_clear:
                continue
            if point_seg_dist(vert.pos, chord) < cfg.beta - _EPS * diag:
                return False
        # Rails toward b that disappear with the bend are excluded from the
        # endpoint angle checks.
        if not _angles_ok(mesh, a, pc, b if drop_ab else None, cfg):
            return False
        if not _angles_ok(mesh, c, pa, b if drop_bc else None, cfg):
            return False
    # Ink may not grow: account for the chord added and rails freed.
    delta = dist_e(pa, pc) if new_rail else 0.0
    if drop_ab:
        delta -= mesh._adj[a][b]
    if drop_bc:
        delta -= mesh._adj[b][c]
    return delta <= _EPS * diag


def _angles_ok(mesh: Mesh, end: str, chord_to: Point, skip: Optional[str],
               cfg: ModConfig) -> bool:
    p = mesh.vertices[end].pos
    dirs = []
    for nb in mesh.neighbors(end):
        if nb == skip:
            continue
        q = mesh.vertices[nb].pos
        dirs.append(math.atan2(q.y - p.y, q.x - p.x))
    dirs.append(math.atan2(chord_to.y - p.y, chord_to.x - p.x))
    dirs = sorted(set(dirs))
    if len(dirs) < 2:
        return True
    gap = 2.0 * math.pi - (dirs[-1] - dirs[0])
    for x, y in zip(dirs, dirs[1:]):
        gap = min(gap, y - x)
    return math.degrees(gap) >= cfg.alpha - 1e-9


def _usage_after(rm: RoutedMesh, a: str, b: str, c: str, u: str,
                 v: str) -> int:
    """Usage count of rail (u, v) once every (a, b, c) bend is replaced."""
    key = (u, v) if u < v else (v, u)
    count = 0
    for r in rm.routes:
        ch = list(r.chain)
        j = 0
        while j + 2 < len(ch):
            if (ch[j], ch[j + 1], ch[j + 2]) in ((a, b, c), (c, b, a)):
                ch[j:j + 3] = [ch[j], ch[j + 2]]
            else:
                j += 1
        for x, y in zip(ch, ch[1:]):
            if ((x, y) if x < y else (y, x)) == key:
                count += 1
    return count


def _apply_chord(rm: RoutedMesh, a: str, b: str, c: str) -> None:
    mesh = rm.mesh
    if not mesh.has_edge(a, c):
        mesh.add_edge(a, c)
    for r in rm.routes:
        ch = r.chain
        j = 0
        while j + 2 < len(ch):
            if (ch[j], ch[j + 1], ch[j + 2]) in ((a, b, c), (c, b, a)):
                ch[j:j + 3] = [ch[j], ch[j + 2]]
            else:
                j += 1
        r.chain = _simplify_chain(ch)
        r.recompute_length(mesh)
    rm.recount_usage()
    for u, v in list(mesh.edges()):
        key = (u, v) if u < v else (v, u)
        if rm.usage.get(key, 0) == 0:
            mesh.remove_edge(u, v)
    for vid in list(mesh.vertices):
        if mesh.degree(vid) == 0 and \
                mesh.vertices[vid].kind is not VertexKind.NODE:
            mesh.remove_vertex(vid)


def route_polyline(rm: RoutedMesh, edge: tuple[str, str]) -> list[Point]:
    for r in rm.routes:
        if r.edge == edge:
            return [rm.mesh.vertices[x].pos for x in r.chain]
    raise LevelError(f"no route for edge {edge}")


def build_transitions(coarse: LevelBundle, fine: LevelBundle) -> TransitionSet:
    """Equal-length control polylines per edge of the coarser level.

    Both routes are resampled to the larger control count by uniform arc
    length; the shared node endpoints are preserved exactly, so interpolation
    frames at t=0 and t=1 reproduce the stored controls bit for bit.
    """
    pairs = {}
    for edge in coarse.edges:
        pa = route_polyline(coarse.rm, edge)
        pb = route_polyline(fine.rm, edge)
        m = max(len(pa), len(pb), 2)
        ra = resample(pa, m) if len(pa) != m else list(pa)
        rb = resample(pb, m) if len(pb) != m else list(pb)
        pairs[edge] = (ra, rb)
    return TransitionSet(coarse.level, fine.level, pairs)


def interpolate_frame(pair: tuple[list[Point], list[Point]],
                      t: float) -> list[Point]:
    a, b = pair
    # the ends return the stored controls themselves so frames there are
    # reproduced bit for bit, immune to lerp rounding
    if t == 0.0:
        return list(a)
    if t == 1.0:
        return list(b)
    return [Point(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
            for p, q in zip(a, b)]


# ---------------------------------------------------------------------------
# tile metrics


def _seg_in_rect(s: Segment, r: Rect) -> bool:
    if r.contains(s.a) or r.contains(s.b):
        return True
    corners = [Point(r.min.x, r.min.y), Point(r.max.x, r.min.y),
               Point(r.max.x, r.max.y), Point(r.min.x, r.max.y)]
    for ea, eb in zip(corners, corners[1:] + corners[:1]):
        try:
            if seg_intersect(s, Segment(ea, eb)) is not None:
                return True
        except SegmentOverlapError:
            return True
    return False


def tile_metrics(bundle: LevelBundle, tree: TileTree) -> list[dict]:
    """Visible nodes and rail crossings per tile of the bundle's level."""
    vset = set(bundle.node_ids)
    mesh = bundle.rm.mesh
    rails = [Segment(mesh.vertices[u].pos, mesh.vertices[v].pos)
             for u, v in mesh.edges()]
    out = []
    for tile in sorted(tree.by_level(min(bundle.level, tree.height)),
                       key=lambda t: t.id):
        visible = sum(1 for p in tile.point_ids if p in vset)
        crossings = sum(1 for s in rails if _seg_in_rect(s, tile.rect))
        out.append({"tile": tile.id, "rect": [tile.rect.min.x,
                                              tile.rect.min.y,
                                              tile.rect.max.x,
                                              tile.rect.max.y],
                    "visible": visible, "rail_crossings": crossings})
    return out


def viewport_maxima(bundle: LevelBundle, tree: TileTree) -> int:
    """Largest visible-node total over any 2x2 (or 1x2 in 1D) tile window."""
    z = min(bundle.level, tree.height)
    tiles = tree.by_level(z)
    cells = 2 ** (z - 1)
    vset = set(bundle.node_ids)
    grid: dict[tuple[int, int], int] = {}
    for idx, tile in enumerate(sorted(tiles, key=lambda t: t.id)):
        if tree.mode == "2d":
            ix, iy = idx % cells, idx // cells
        else:
            ix, iy = idx, 0
        grid[(ix, iy)] = sum(1 for p in tile.point_ids if p in vset)
    best = 0
    cols = cells
    rows = cells if tree.mode == "2d" else 1
    for ix in range(max(cols - 1, 1)):
        for iy in range(max(rows - 1, 1)):
            cells_in_window = {(min(ix + dx, cols - 1),
                                min(iy + dy, rows - 1))
                               for dx in (0, 1)
                               for dy in ((0,) if tree.mode == "1d"
                                          else (0, 1))}
            best = max(best, sum(grid.get(c, 0) for c in cells_in_window))
    return best


def build_level_bundles(g: InputGraph, a: LevelAssignment, k: int,
                        rm: RoutedMesh, cfg: ModConfig,
                        avoid_hidden: bool = False
                        ) -> tuple[list[LevelBundle], list[TransitionSet]]:
    """Bottom-up bundle chain k..1 and the k-1 transition sets."""
    graphs = level_graphs(g, a, k)
    bundles: list[Optional[LevelBundle]] = [None] * k
    bundles[k - 1] = bottom_bundle(g, a, k, rm)
    for i in range(k - 1, 0, -1):
        derived = derive_level_mesh(bundles[i], graphs[i - 1])
        bundles[i - 1] = simplify_routes(derived, cfg, avoid_hidden)
    transitions = []
    for i in range(k - 1):
        transitions.append(build_transitions(bundles[i], bundles[i + 1]))
    return bundles, transitions
