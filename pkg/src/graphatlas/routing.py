"""Edge routing on a competition mesh plus ink-reducing local modifications.

Pipeline order: add_detours -> route_edges -> prune -> refine_faces ->
median_pass -> shortcut_pass.  Every pass keeps routes valid, keeps the mesh
planar, and respects the angular-resolution (alpha) and clearance (beta)
constraints.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

from .geometry import (Point, Segment, SegmentOverlapError, angle_at, dist_e,
                       geometric_median, point_seg_dist, seg_intersect)
from .graph import InputGraph
from .mesh import Mesh, MeshError, VertexKind

_EPS = 1e-9


class RoutingError(ValueError):
    pass


class PortRadiusError(RoutingError):
    """Requested detour octagon radius does not fit the instance."""


@dataclass
class Route:
    edge: tuple[str, str]
    chain: list[str]
    length: float = 0.0

    def recompute_length(self, mesh: Mesh) -> None:
        self.length = sum(
            dist_e(mesh.vertices[a].pos, mesh.vertices[b].pos)
            for a, b in zip(self.chain, self.chain[1:]))


@dataclass
class RoutedMesh:
    mesh: Mesh
    routes: list[Route]
    usage: dict[tuple[str, str], int] = field(default_factory=dict)

    def recount_usage(self) -> None:
        self.usage = {}
        for r in self.routes:
            for a, b in zip(r.chain, r.chain[1:]):
                key = (a, b) if a < b else (b, a)
                self.usage[key] = self.usage.get(key, 0) + 1

    def copy(self) -> "RoutedMesh":
        rm = RoutedMesh(self.mesh.copy(),
                        [Route(r.edge, list(r.chain), r.length)
                         for r in self.routes])
        rm.usage = dict(self.usage)
        return rm


@dataclass
class ModConfig:
    alpha: float = 45.0
    beta: float = 1.0
    thin_width: float = 0.0
    median_iters: int = 20
    port_radius: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 90.0):
            raise RoutingError("alpha must be in (0, 90] degrees")
        if self.beta <= 0.0:
            raise RoutingError("beta must be positive")
        if self.thin_width < 0.0:
            raise RoutingError("thin_width must be nonnegative")


def default_config(m: Mesh, g: InputGraph) -> ModConfig:
    """Instance-scaled defaults for the modification constraints.

    beta additionally clamps to 95% of the initial vertex-rail clearance so
    that the clearance invariant holds before any pass runs.
    """
    dmin = _min_node_distance(g)
    nn = _mean_nearest_neighbor(g)
    clear = initial_clearance(m)
    beta = 0.25 * dmin
    if clear < beta / 0.95:
        beta = max(0.95 * clear, 1e-12)
    return ModConfig(alpha=45.0, beta=beta, thin_width=0.1 * nn,
                     median_iters=20, port_radius=fit_port_radius(m, g))


def fit_port_radius(m: Mesh, g: InputGraph) -> float:
    """Largest safe detour radius at or below 0.2x the minimum node distance.

    Clamped below half the shortest rail incident to a node and below the
    clearance from each node to its non-incident rails, so the octagons fit
    without crossing anything.
    """
    r = 0.2 * _min_node_distance(g)
    node_vids = [v.id for v in m.vertices.values()
                 if v.kind is VertexKind.NODE]
    for vid in node_vids:
        for nb in m.neighbors(vid):
            r = min(r, 0.45 * m._adj[vid][nb])
    edges = [(u, v, Segment(m.vertices[u].pos, m.vertices[v].pos))
             for u, v in m.edges()]
    for vid in node_vids:
        p = m.vertices[vid].pos
        for u, v, seg in edges:
            if vid in (u, v):
                continue
            r = min(r, 0.9 * point_seg_dist(p, seg))
    if r <= 0:
        raise PortRadiusError("no positive detour radius fits this mesh")
    return r


def _min_node_distance(g: InputGraph) -> float:
    pts = [n.pos for n in g.nodes]
    if len(pts) < 2:
        raise RoutingError("need at least 2 nodes")
    return min(dist_e(p, q) for i, p in enumerate(pts) for q in pts[i + 1:])


def _mean_nearest_neighbor(g: InputGraph) -> float:
    pts = [n.pos for n in g.nodes]
    acc = 0.0
    for i, p in enumerate(pts):
        acc += min(dist_e(p, q) for j, q in enumerate(pts) if j != i)
    return acc / len(pts)


def initial_clearance(m: Mesh) -> float:
    """Minimum distance between a vertex and a non-incident rail."""
    best = math.inf
    edges = [(u, v, Segment(m.vertices[u].pos, m.vertices[v].pos))
             for u, v in m.edges()]
    for vid, v in m.vertices.items():
        for u, w, seg in edges:
            if vid == u or vid == w:
                continue
            best = min(best, point_seg_dist(v.pos, seg))
    return best


# ---------------------------------------------------------------------------
# detours


_OCT_DIRS = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1),
             (1, -1)]


def add_detours(m: Mesh, g: InputGraph, port_radius: float) -> Mesh:
    """Surround every node vertex with a regular octagon of detour rails.

    Rails incident to the node are split at the octagon crossing ("port").
    The octagon must fit: its radius has to stay below half the minimum
    node distance and half the shortest incident rail.
    """
    if port_radius <= 0:
        raise PortRadiusError("port_radius must be positive")
    dmin = _min_node_distance(g)
    if port_radius >= dmin / 2.0:
        raise PortRadiusError(
            f"port_radius {port_radius} >= half the minimum node distance")
    out = m.copy()
    node_ids = sorted(v.id for v in m.vertices.values()
                      if v.kind is VertexKind.NODE)
    for vid in node_ids:
        for nb in out.neighbors(vid):
            if out._adj[vid][nb] <= 2.0 * port_radius:
                raise PortRadiusError(
                    f"port_radius {port_radius} >= half the shortest rail "
                    f"at node {vid!r}")
    diag = max(out.boundary.diagonal, 1.0)
    for vid in node_ids:
        c = out.vertices[vid].pos
        neighbors = sorted(out.neighbors(vid))
        # Octagon corners at the eight compass points; incident rails are
        # axis-aligned here, so each crosses the octagon exactly at a corner.
        corner_ids: list[str] = []
        for dx, dy in _OCT_DIRS:
            norm = math.hypot(dx, dy)
            p = Point(c.x + port_radius * dx / norm,
                      c.y + port_radius * dy / norm)
            port_nb = None
            for nb in neighbors:
                q = out.vertices[nb].pos
                ux, uy = q.x - c.x, q.y - c.y
                if abs(ux * dy - uy * dx) <= _EPS * diag and \
                        ux * dx + uy * dy > 0:
                    port_nb = nb
                    break
            jid = out.new_junction(p)
            corner_ids.append(jid)
            if port_nb is not None:
                # Split the incident rail at the port.
                out.remove_edge(vid, port_nb)
                out.add_edge(vid, jid)
                out.add_edge(jid, port_nb)
            else:
                out.add_edge(vid, jid)
        for a, b in zip(corner_ids, corner_ids[1:] + corner_ids[:1]):
            out.add_edge(a, b)
    return out


# ---------------------------------------------------------------------------
# routing


def _dijkstra_to(mesh: Mesh, target: str, banned: set[str]) -> dict[str, float]:
    dist = {target: 0.0}
    heap = [(0.0, target)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, math.inf):
            continue
        for v, w in mesh._adj[u].items():
            if v in banned:
                continue
            nd = d + w
            if nd < dist.get(v, math.inf) - _EPS * max(1.0, nd):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def route_edges(m: Mesh, g: InputGraph) -> RoutedMesh:
    """Shortest node-avoiding route per graph edge.

    Interior chain vertices may never be a node vertex other than the two
    endpoints.  Length ties are broken toward the lexicographically smallest
    vertex-id chain, which makes routing deterministic.
    """
    node_vid = {v.node_id: v.id for v in m.vertices.values()
                if v.kind is VertexKind.NODE}
    all_nodes = set(node_vid.values())
    diag = max(m.boundary.diagonal, 1.0)
    routes: list[Route] = []
    for u, v in g.edges:
        su, sv = node_vid[u], node_vid[v]
        banned = all_nodes - {su, sv}
        dist = _dijkstra_to(m, sv, banned)
        if su not in dist:
            raise RoutingError(f"no route between {u!r} and {v!r}")
        # Greedy walk along tight arcs, smallest successor id first.
        chain = [su]
        cur = su
        while cur != sv:
            best = None
            for nb, w in sorted(m._adj[cur].items()):
                if nb in banned or nb in chain:
                    continue
                if nb in dist and \
                        abs(dist[cur] - (w + dist[nb])) <= 1e-7 * diag:
                    best = nb
                    break
            if best is None:
                raise MeshError("tight-arc walk failed (inconsistent mesh)")
            chain.append(best)
            cur = best
        r = Route((u, v), chain)
        r.recompute_length(m)
        routes.append(r)
    rm = RoutedMesh(m, routes)
    rm.recount_usage()
    return rm


def prune(rm: RoutedMesh) -> RoutedMesh:
    """Drop rails unused by any route, then drop isolated non-node vertices."""
    out = rm.copy()
    out.recount_usage()
    for u, v in list(out.mesh.edges()):
        key = (u, v) if u < v else (v, u)
        if out.usage.get(key, 0) == 0:
            out.mesh.remove_edge(u, v)
    for vid in list(out.mesh.vertices):
        if out.mesh.degree(vid) == 0 and \
                out.mesh.vertices[vid].kind is not VertexKind.NODE:
            out.mesh.remove_vertex(vid)
    return out


def total_ink(rm: RoutedMesh) -> float:
    """Sum of the lengths of distinct rails carrying at least one route."""
    acc = 0.0
    for u, v in rm.mesh.edges():
        key = (u, v) if u < v else (v, u)
        if rm.usage.get(key, 0) > 0:
            acc += rm.mesh._adj[u][v]
    return acc


# ---------------------------------------------------------------------------
# face enumeration


def enumerate_faces(mesh: Mesh) -> list[list[str]]:
    """Bounded faces of the planar mesh as vertex cycles (interior left).

    Standard half-edge traversal: from (u, v) continue with the neighbor of v
    that precedes u in counter-clockwise order.  The unbounded face comes out
    with non-positive signed area and is dropped.
    """
    order: dict[str, list[str]] = {}
    ang: dict[tuple[str, str], float] = {}
    for vid in mesh.vertices:
        p = mesh.vertices[vid].pos
        nbs = mesh.neighbors(vid)
        for nb in nbs:
            q = mesh.vertices[nb].pos
            ang[(vid, nb)] = math.atan2(q.y - p.y, q.x - p.x)
        order[vid] = sorted(nbs, key=lambda nb: ang[(vid, nb)])
    seen: set[tuple[str, str]] = set()
    faces: list[list[str]] = []
    for start_u in sorted(mesh.vertices):
        for start_v in order[start_u]:
            if (start_u, start_v) in seen:
                continue
            cycle: list[str] = []
            u, v = start_u, start_v
            while (u, v) not in seen:
                seen.add((u, v))
                cycle.append(u)
                nbs = order[v]
                i = nbs.index(u)
                w = nbs[i - 1]  # previous in CCW order
                u, v = v, w
            area = 0.0
            pts = [mesh.vertices[c].pos for c in cycle]
            for a, b in zip(pts, pts[1:] + pts[:1]):
                area += a.x * b.y - b.x * a.y
            if area > 0:
                faces.append(cycle)
    return faces


def face_width(mesh: Mesh, cycle: list[str]) -> float:
    """Smallest distance between two non-adjacent rails of the face."""
    rails = list(zip(cycle, cycle[1:] + cycle[:1]))
    best = math.inf
    for i, (a, b) in enumerate(rails):
        sa = Segment(mesh.vertices[a].pos, mesh.vertices[b].pos)
        for c, d in rails[i + 1:]:
            if len({a, b, c, d}) < 4:
                continue
            sb = Segment(mesh.vertices[c].pos, mesh.vertices[d].pos)
            best = min(best, _seg_gap(sa, sb))
    return best


def _seg_gap(s1: Segment, s2: Segment) -> float:
    return min(point_seg_dist(s1.a, s2), point_seg_dist(s1.b, s2),
               point_seg_dist(s2.a, s1), point_seg_dist(s2.b, s1))


def refine_faces(rm: RoutedMesh, cfg: ModConfig) -> RoutedMesh:
    """Collapse thin node-free faces by deleting their longest rail.

    Routes across the deleted rail follow the shorter remaining side of the
    merged face (ties toward the lexicographically smaller chain).  Repeats
    until no thin node-free face remains.
    """
    out = rm.copy()
    while True:
        faces = enumerate_faces(out.mesh)
        target = None
        for cycle in sorted(faces, key=lambda c: min(c)):
            if any(out.mesh.vertices[x].kind is VertexKind.NODE
                   for x in cycle):
                continue
            w = face_width(out.mesh, cycle)
            if w < cfg.thin_width:
                target = cycle
                break
        if target is None:
            return out
        rails = list(zip(target, target[1:] + target[:1]))
        longest = max(rails,
                      key=lambda e: (out.mesh._adj[e[0]][e[1]],
                                     min(e), max(e)))
        u, v = longest
        # Both sides of the merged face boundary can carry the reroute; pick
        # the shorter replacement path for each affected route.
        sides = _detour_paths(out.mesh, faces, u, v)
        node_of_vid = {w.id: w.node_id for w in out.mesh.vertices.values()
                       if w.kind is VertexKind.NODE}
        out.mesh.remove_edge(u, v)
        for r in out.routes:
            # A replacement side may not pass through a node foreign to this
            # route; the thin face's own side is node-free, so one candidate
            # always survives.
            ok_sides = [s for s in sides
                        if all(node_of_vid.get(x) in (None, *r.edge)
                               for x in s[1:-1])]
            _replace_rail(r, u, v, ok_sides, out.mesh)
            r.chain = _simplify_chain(r.chain)
            r.recompute_length(out.mesh)
        out.recount_usage()
        _drop_unused(out)


def _detour_paths(mesh: Mesh, faces: list[list[str]], u: str,
                  v: str) -> list[list[str]]:
    """Paths u..v along the boundaries of the faces adjacent to rail (u, v)."""
    paths = []
    for cycle in faces:
        rails = list(zip(cycle, cycle[1:] + cycle[:1]))
        for i, (a, b) in enumerate(rails):
            if {a, b} == {u, v}:
                rest = cycle[i + 1:] + cycle[:i + 1]  # b .. a
                path = rest if rest[0] == u else list(reversed(rest))
                paths.append(path)
                break
    return paths


def _replace_rail(route: Route, u: str, v: str, sides: list[list[str]],
                  mesh: Mesh) -> None:
    chain = route.chain
    i = 0
    while i < len(chain) - 1:
        a, b = chain[i], chain[i + 1]
        if {a, b} == {u, v}:
            cands = []
            for side in sides:
                path = side if side[0] == a else list(reversed(side))
                length = sum(
                    dist_e(mesh.vertices[x].pos, mesh.vertices[y].pos)
                    for x, y in zip(path, path[1:]))
                cands.append((length, path))
            best = min(cands, key=lambda c: (c[0], c[1]))[1]
            chain[i:i + 2] = best
            i += len(best) - 1
        else:
            i += 1


def _simplify_chain(chain: list[str]) -> list[str]:
    """Drop consecutive duplicates and immediate backtracks (x, y, x)."""
    changed = True
    while changed:
        changed = False
        out: list[str] = []
        for x in chain:
            if out and out[-1] == x:
                changed = True
                continue
            if len(out) >= 2 and out[-2] == x:
                out.pop()
                changed = True
                continue
            out.append(x)
        chain = out
    return chain


def _drop_unused(rm: RoutedMesh) -> None:
    for u, v in list(rm.mesh.edges()):
        key = (u, v) if u < v else (v, u)
        if rm.usage.get(key, 0) == 0:
            rm.mesh.remove_edge(u, v)
    for vid in list(rm.mesh.vertices):
        if rm.mesh.degree(vid) == 0 and \
                rm.mesh.vertices[vid].kind is not VertexKind.NODE:
            rm.mesh.remove_vertex(vid)


# ---------------------------------------------------------------------------
# constraint checks shared by the median and shortcut passes


def min_incident_angle(mesh: Mesh, vid: str) -> float:
    p = mesh.vertices[vid].pos
    nbs = mesh.neighbors(vid)
    if len(nbs) < 2:
        return 180.0
    angs = sorted(math.atan2(mesh.vertices[nb].pos.y - p.y,
                             mesh.vertices[nb].pos.x - p.x) for nb in nbs)
    best = 2.0 * math.pi - (angs[-1] - angs[0])
    for a, b in zip(angs, angs[1:]):
        best = min(best, b - a)
    return math.degrees(best)


def _local_feasible(mesh: Mesh, vid: str, cfg: ModConfig,
                    slack: float) -> bool:
    """Angle, clearance and planarity checks around a moved junction."""
    moved = {vid} | set(mesh.neighbors(vid))
    for w in moved:
        if min_incident_angle(mesh, w) < cfg.alpha - slack:
            return False
    segs = {}
    for u, v in mesh.edges():
        key = (u, v) if u < v else (v, u)
        segs[key] = Segment(mesh.vertices[u].pos, mesh.vertices[v].pos)
    moved_edges = [((vid, nb) if vid < nb else (nb, vid))
                   for nb in mesh.neighbors(vid)]
    # Clearance: moved rails against all vertices, moved vertex against all
    # rails.
    for key in moved_edges:
        s = segs[key]
        for w, vert in mesh.vertices.items():
            if w in key:
                continue
            if point_seg_dist(vert.pos, s) < cfg.beta - slack:
                return False
    p = mesh.vertices[vid].pos
    for key, s in segs.items():
        if vid in key:
            continue
        if point_seg_dist(p, s) < cfg.beta - slack:
            return False
    # Planarity: moved rails may not cross any non-adjacent rail.
    for key in moved_edges:
        s = segs[key]
        for other, t in segs.items():
            if set(key) & set(other):
                continue
            try:
                if seg_intersect(s, t) is not None:
                    return False
            except SegmentOverlapError:
                return False
    return True


def median_pass(rm: RoutedMesh, cfg: ModConfig) -> RoutedMesh:
    """Pull each junction toward the geometric median of its neighbors.

    The move along the straight segment is maximized by binary search under
    the angle, clearance and planarity constraints.  Total ink can only
    shrink because the objective at each junction is exactly the sum of its
    incident rail lengths.
    """
    out = rm.copy()
    diag = max(out.mesh.boundary.diagonal, 1.0)
    for _ in range(cfg.median_iters):
        max_disp = 0.0
        for vid in sorted(out.mesh.vertices):
            vert = out.mesh.vertices[vid]
            if vert.kind is not VertexKind.JUNCTION:
                continue
            nbs = out.mesh.neighbors(vid)
            if len(nbs) < 2:
                continue
            pts = [out.mesh.vertices[nb].pos for nb in nbs]
            tgt = geometric_median(pts)
            src = vert.pos
            if dist_e(src, tgt) <= 1e-12 * diag:
                continue
            base = sum(dist_e(src, q) for q in pts)

            def at(t: float) -> Point:
                return Point(src.x + t * (tgt.x - src.x),
                             src.y + t * (tgt.y - src.y))

            def ok(t: float) -> bool:
                out.mesh.move_vertex(vid, at(t))
                good = _local_feasible(out.mesh, vid, cfg, _EPS * diag)
                return good

            lo, hi = 0.0, 1.0
            if ok(1.0):
                lo = 1.0
            else:
                for _ in range(32):
                    mid = (lo + hi) / 2.0
                    if ok(mid):
                        lo = mid
                    else:
                        hi = mid
            final = at(lo)
            out.mesh.move_vertex(vid, final)
            new = sum(dist_e(final, q) for q in pts)
            if new > base:  # numeric guard: never increase ink
                out.mesh.move_vertex(vid, src)
                continue
            max_disp = max(max_disp, dist_e(src, final))
        for r in out.routes:
            r.recompute_length(out.mesh)
        if max_disp < 1e-6 * diag:
            break
    return out


def shortcut_pass(rm: RoutedMesh, cfg: ModConfig) -> RoutedMesh:
    """Replace each degree-2 junction by a direct chord where legal.

    The chord must not cross other rails, must keep clearance beta to all
    other vertices, and must keep incident angles at its endpoints at or
    above alpha.  Runs to fixpoint.
    """
    out = rm.copy()
    diag = max(out.mesh.boundary.diagonal, 1.0)
    changed = True
    while changed:
        changed = False
        for vid in sorted(out.mesh.vertices):
            vert = out.mesh.vertices.get(vid)
            if vert is None or vert.kind is not VertexKind.JUNCTION:
                continue
            nbs = out.mesh.neighbors(vid)
            if len(nbs) != 2:
                continue
            a, b = nbs
            if out.mesh.has_edge(a, b):
                continue
            if not _chord_legal(out.mesh, vid, a, b, cfg, _EPS * diag):
                continue
            out.mesh.remove_edge(vid, a)
            out.mesh.remove_edge(vid, b)
            out.mesh.add_edge(a, b)
            out.mesh.remove_vertex(vid)
            for r in out.routes:
                r.chain = _simplify_chain([x for x in r.chain if x != vid])
                r.recompute_length(out.mesh)
            out.recount_usage()
            changed = True
    return out


def _chord_legal(mesh: Mesh, vid: str, a: str, b: str, cfg: ModConfig,
                 slack: float) -> bool:
    pa, pb = mesh.vertices[a].pos, mesh.vertices[b].pos
    if dist_e(pa, pb) <= slack:
        return False
    chord = Segment(pa, pb)
    for w, vert in mesh.vertices.items():
        if w in (a, b, vid):
            continue
        if point_seg_dist(vert.pos, chord) < cfg.beta - slack:
            return False
    for u, v in mesh.edges():
        if vid in (u, v):
            continue
        if {u, v} & {a, b}:
            continue
        s = Segment(mesh.vertices[u].pos, mesh.vertices[v].pos)
        try:
            if seg_intersect(chord, s) is not None:
                return False
        except SegmentOverlapError:
            return False
    # Endpoint angular resolution with the chord in place of the old rails.
    for end, other in ((a, b), (b, a)):
        p = mesh.vertices[end].pos
        dirs = []
        for nb in mesh.neighbors(end):
            if nb == vid:
                continue
            q = mesh.vertices[nb].pos
            dirs.append(math.atan2(q.y - p.y, q.x - p.x))
        q = mesh.vertices[other].pos
        dirs.append(math.atan2(q.y - p.y, q.x - p.x))
        if len(dirs) >= 2:
            dirs.sort()
            gap = 2.0 * math.pi - (dirs[-1] - dirs[0])
            for x, y in zip(dirs, dirs[1:]):
                gap = min(gap, y - x)
            if math.degrees(gap) < cfg.alpha - slack:
                return False
    return True


# ---------------------------------------------------------------------------
# validity checks and debug output


def check_routes(rm: RoutedMesh, g: InputGraph) -> None:
    """Raise RoutingError if any route is invalid against the current mesh."""
    node_of_vid = {v.id: v.node_id for v in rm.mesh.vertices.values()
                   if v.kind is VertexKind.NODE}
    for r in rm.routes:
        u, v = r.edge
        for a, b in zip(r.chain, r.chain[1:]):
            if not rm.mesh.has_edge(a, b):
                raise RoutingError(
                    f"route {r.edge} uses missing rail ({a!r}, {b!r})")
        for x in r.chain[1:-1]:
            owner = node_of_vid.get(x)
            if owner is not None and owner not in (u, v):
                raise RoutingError(
                    f"route {r.edge} passes through foreign node {owner!r}")


def routed_svg(rm: RoutedMesh, width: int = 800) -> str:
    """Mesh SVG with the routes overlaid, for visual debugging."""
    base = rm.mesh.to_svg(width)
    body = []
    b = rm.mesh.boundary
    pad = 0.05 * max(b.diagonal, 1.0)
    scale = width / (b.width + 2 * pad)

    def tr(p: Point) -> tuple[float, float]:
        return ((p.x - b.min.x + pad) * scale,
                (b.max.y - p.y + pad) * scale)

    for r in rm.routes:
        pts = " ".join("%.2f,%.2f" % tr(rm.mesh.vertices[x].pos)
                       for x in r.chain)
        body.append(f'<polyline points="{pts}" fill="none" '
                    f'stroke="#d62728" stroke-width="1.5" opacity="0.6"/>')
    return base.replace("</svg>", "\n".join(body) + "</svg>")
