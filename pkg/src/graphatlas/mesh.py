"""Competition mesh construction.

Four axis-aligned rays grow from every input point at equal speed; each ray
stops on first contact with another ray or the bounding rectangle.  Two
constructions are provided:

* ``build_mesh_sim`` -- event-driven ground-truth simulation with an explicit
  tie rule for simultaneous hits.
* ``build_mesh_fast`` -- the four-phase construction (top rays, bottom rays,
  left rays, right rays) driven by per-cone Manhattan nearest neighbors and a
  vertical-segment ray-shooting scan; requires general-position input.

The module also provides monotone path witnesses, the stretch factor
measurement, size/planarity checks and debug dumps.
"""

from __future__ import annotations

import heapq
import json
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .geometry import Point, Rect, Segment, dist_e, dist_m

STRETCH_BOUND = 2.0 + math.sqrt(2.0)


class MeshError(ValueError):
    pass


class GeneralPositionError(MeshError):
    """Input violates the distinct-x / distinct-y requirement."""


class VertexKind(Enum):
    NODE = "node"
    JUNCTION = "junction"
    BOUNDARY = "boundary"


@dataclass
class MeshVertex:
    id: str
    pos: Point
    kind: VertexKind
    node_id: Optional[str] = None  # graph node id for NODE vertices


class Mesh:
    """Planar geometric graph of node vertices, junctions and rails."""

    def __init__(self, boundary: Rect):
        self.boundary = boundary
        self.vertices: dict[str, MeshVertex] = {}
        self._adj: dict[str, dict[str, float]] = {}
        self._junction_seq = 0

    # -- construction ------------------------------------------------------

    def add_vertex(self, vid: str, pos: Point, kind: VertexKind,
                   node_id: Optional[str] = None) -> str:
        if vid in self.vertices:
            raise MeshError(f"duplicate vertex id {vid!r}")
        self.vertices[vid] = MeshVertex(vid, pos, kind, node_id)
        self._adj[vid] = {}
        return vid

    def new_junction(self, pos: Point, kind: VertexKind = VertexKind.JUNCTION,
                     prefix: str = "j") -> str:
        while True:
            vid = f"{prefix}{self._junction_seq:06d}"
            self._junction_seq += 1
            if vid not in self.vertices:
                break
        return self.add_vertex(vid, pos, kind)

    def add_edge(self, u: str, v: str) -> None:
        if u == v:
            raise MeshError("degenerate rail")
        d = dist_e(self.vertices[u].pos, self.vertices[v].pos)
        self._adj[u][v] = d
        self._adj[v][u] = d

    def remove_edge(self, u: str, v: str) -> None:
        del self._adj[u][v]
        del self._adj[v][u]

    def remove_vertex(self, vid: str) -> None:
        for nb in list(self._adj[vid]):
            self.remove_edge(vid, nb)
        del self._adj[vid]
        del self.vertices[vid]

    def move_vertex(self, vid: str, pos: Point) -> None:
        self.vertices[vid].pos = pos
        for nb in self._adj[vid]:
            d = dist_e(pos, self.vertices[nb].pos)
            self._adj[vid][nb] = d
            self._adj[nb][vid] = d

    def copy(self) -> "Mesh":
        m = Mesh(self.boundary)
        m.vertices = {k: MeshVertex(v.id, v.pos, v.kind, v.node_id)
                      for k, v in self.vertices.items()}
        m._adj = {k: dict(v) for k, v in self._adj.items()}
        m._junction_seq = self._junction_seq
        return m

    # -- queries -----------------------------------------------------------

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._adj.get(u, {})

    def neighbors(self, vid: str) -> list[str]:
        return sorted(self._adj[vid])

    def degree(self, vid: str) -> int:
        return len(self._adj[vid])

    def edge_length(self, u: str, v: str) -> float:
        return self._adj[u][v]

    def edges(self) -> list[tuple[str, str]]:
        out = []
        for u in self._adj:
            for v in self._adj[u]:
                if u < v:
                    out.append((u, v))
        return sorted(out)

    def node_vertices(self) -> list[str]:
        return sorted(v.id for v in self.vertices.values()
                      if v.kind is VertexKind.NODE)

    def junction_count(self) -> int:
        return sum(1 for v in self.vertices.values()
                   if v.kind is VertexKind.JUNCTION)

    def total_edge_length(self) -> float:
        return sum(self.edge_length(u, v) for u, v in self.edges())

    def rail_count(self) -> int:
        """Number of maximal straight segments (rails) in the drawing.

        Collinear edges that touch are merged regardless of the degree of the
        vertices they pass through.
        """
        groups: dict[tuple, list[tuple[float, float]]] = {}
        for u, v in self.edges():
            a, b = self.vertices[u].pos, self.vertices[v].pos
            dx, dy = b.x - a.x, b.y - a.y
            n = math.hypot(dx, dy)
            ux, uy = dx / n, dy / n
            if (ux, uy) < (-ux, -uy):
                ux, uy = -ux, -uy
            # Offset: signed distance of the line from origin.
            off = ux * a.y - uy * a.x
            key = (round(ux, 12), round(uy, 12), round(off, 9))
            t0 = ux * a.x + uy * a.y
            t1 = ux * b.x + uy * b.y
            groups.setdefault(key, []).append((min(t0, t1), max(t0, t1)))
        scale = max(self.boundary.diagonal, 1.0)
        count = 0
        for ivals in groups.values():
            ivals.sort()
            prev_end = None
            for lo, hi in ivals:
                if prev_end is None or lo > prev_end + 1e-9 * scale:
                    count += 1
                prev_end = hi if prev_end is None else max(prev_end, hi)
        return count

    # -- checks ------------------------------------------------------------

    def planarity_violations(self, eps: float = 1e-9) -> list[tuple]:
        """Pairs of rails that properly cross or overlap.

        Rails may only meet at shared vertices.  Axis-aligned meshes use a
        vectorized check; meshes with oblique rails fall back to a pairwise
        scan with a bounding-box prefilter.
        """
        tol = eps * max(self.boundary.diagonal, 1.0)
        horiz, vert, obliq = [], [], []
        for u, v in self.edges():
            a, b = self.vertices[u].pos, self.vertices[v].pos
            if abs(a.y - b.y) <= tol:
                horiz.append((a.y, min(a.x, b.x), max(a.x, b.x), u, v))
            elif abs(a.x - b.x) <= tol:
                vert.append((a.x, min(a.y, b.y), max(a.y, b.y), u, v))
            else:
                obliq.append((u, v))
        bad: list[tuple] = []
        if horiz and vert:
            hy = np.array([h[0] for h in horiz])
            hx0 = np.array([h[1] for h in horiz])
            hx1 = np.array([h[2] for h in horiz])
            vx = np.array([w[0] for w in vert])
            vy0 = np.array([w[1] for w in vert])
            vy1 = np.array([w[2] for w in vert])
            cross = ((hx0[:, None] < vx[None, :] - tol)
                     & (vx[None, :] < hx1[:, None] - tol)
                     & (vy0[None, :] < hy[:, None] - tol)
                     & (hy[:, None] < vy1[None, :] - tol))
            for i, j in zip(*np.nonzero(cross)):
                bad.append((horiz[i][3:], vert[j][3:]))
        # Collinear overlaps within each axis group.
        for group, keyed in (
            (horiz, lambda e: round(e[0], 9)),
            (vert, lambda e: round(e[0], 9)),
        ):
            lines: dict[float, list] = {}
            for e in group:
                lines.setdefault(keyed(e), []).append(e)
            for items in lines.values():
                items.sort(key=lambda e: e[1])
                for k in range(len(items) - 1):
                    if items[k + 1][1] < items[k][2] - tol:
                        bad.append((items[k][3:], items[k + 1][3:]))
        if obliq:
            bad.extend(self._generic_crossings(tol))
        return bad

    def _generic_crossings(self, tol: float) -> list[tuple]:
        from .geometry import SegmentOverlapError, seg_intersect
        es = self.edges()
        segs = [(u, v, Segment(self.vertices[u].pos, self.vertices[v].pos))
                for u, v in es]
        bad = []
        for i in range(len(segs)):
            u1, v1, s1 = segs[i]
            for j in range(i + 1, len(segs)):
                u2, v2, s2 = segs[j]
                if {u1, v1} & {u2, v2}:
                    continue
                try:
                    p = seg_intersect(s1, s2)
                except SegmentOverlapError:
                    bad.append(((u1, v1), (u2, v2)))
                    continue
                if p is None:
                    continue
                shared = False
                for vid in (u1, v1, u2, v2):
                    q = self.vertices[vid].pos
                    if dist_e(p, q) <= tol:
                        shared = True
                if not shared:
                    bad.append(((u1, v1), (u2, v2)))
        return bad

    # -- debug dumps -------------------------------------------------------

    def to_json(self) -> str:
        data = {
            "boundary": [self.boundary.min.x, self.boundary.min.y,
                         self.boundary.max.x, self.boundary.max.y],
            "vertices": [
                {"id": v.id, "x": v.pos.x, "y": v.pos.y,
                 "kind": v.kind.value,
                 **({"node": v.node_id} if v.node_id else {})}
                for _, v in sorted(self.vertices.items())
            ],
            "rails": [[u, v] for u, v in self.edges()],
        }
        return json.dumps(data, sort_keys=True)

    def to_svg(self, width: int = 800) -> str:
        b = self.boundary
        pad = 0.05 * max(b.diagonal, 1.0)
        w = b.width + 2 * pad
        h = b.height + 2 * pad
        scale = width / w
        height = max(1, int(h * scale))

        def tx(p: Point) -> tuple[float, float]:
            return ((p.x - b.min.x + pad) * scale,
                    (b.max.y - p.y + pad) * scale)

        parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
                 f'width="{width}" height="{height}">']
        for u, v in self.edges():
            (x1, y1), (x2, y2) = tx(self.vertices[u].pos), tx(self.vertices[v].pos)
            parts.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" '
                         f'y2="{y2:.2f}" stroke="#555" stroke-width="1"/>')
        for _, vx in sorted(self.vertices.items()):
            x, y = tx(vx.pos)
            if vx.kind is VertexKind.NODE:
                parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" '
                             f'fill="#c33"/>')
            else:
                parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.5" '
                             f'fill="#333"/>')
        parts.append("</svg>")
        return "\n".join(parts)


@dataclass(frozen=True)
class TieRule:
    """Resolution of simultaneous ray hits.

    With ``horizontal_wins`` the horizontal ray survives a simultaneous
    perpendicular hit (matching the phased construction, whose top/bottom
    phases stop the vertical ray when arrival times are equal).  Collinear
    head-on hits always stop both rays.  Remaining same-time conflicts are
    ordered by source index: the lower index survives.
    """

    horizontal_wins: bool = True


# ---------------------------------------------------------------------------
# input sanitizer


def sanitize_points(points: Sequence[Point], seed: int = 0,
                    max_rounds: int = 64) -> list[Point]:
    """Perturb points into general position.

    Guarantees pairwise distinct x, distinct y, and per-point distinct
    Manhattan distances to all other points.  Each coordinate moves by at
    most 1e-7 of the bounding-box diagonal per round.
    """
    pts = [(p.x, p.y) for p in points]
    n = len(pts)
    if n == 0:
        return []
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    diag = math.hypot(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    amp = 1e-7 * diag
    sep = amp / 100.0  # minimum coordinate / distance-key separation
    rng = random.Random(seed)
    for _ in range(max_rounds):
        offenders: set[int] = set()
        for coord in (0, 1):
            order = sorted(range(n), key=lambda i: pts[i][coord])
            for a, b in zip(order, order[1:]):
                if pts[b][coord] - pts[a][coord] < sep:
                    offenders.add(b)
        for i in range(n):
            dists = sorted(
                (abs(pts[i][0] - pts[j][0]) + abs(pts[i][1] - pts[j][1]), j)
                for j in range(n) if j != i)
            for (da, ja), (db, jb) in zip(dists, dists[1:]):
                if db - da < sep:
                    offenders.add(jb)
        if not offenders:
            return [Point(x, y) for x, y in pts]
        for i in sorted(offenders):
            x, y = pts[i]
            pts[i] = (x + rng.uniform(-amp, amp), y + rng.uniform(-amp, amp))
    raise MeshError("sanitizer failed to reach general position")


def delta_y(points: Sequence[Point]) -> float:
    """Minimum nonzero gap between y-coordinates."""
    ys = sorted({p.y for p in points})
    if len(ys) < 2:
        raise MeshError("all y-coordinates equal")
    return min(b - a for a, b in zip(ys, ys[1:]) if b > a)


# ---------------------------------------------------------------------------
# cone neighbors (Manhattan metric, eight 45-degree cones)


def cone_index(w: Point, p: Point) -> int:
    """1-based cone index of p around w.

    Cones are numbered counter-clockwise; cone 1 spans angles [0, 45) from
    the positive x axis, each cone is half-open at its upper boundary.
    """
    dx, dy = p.x - w.x, p.y - w.y
    if dx == 0 and dy == 0:
        raise MeshError("cone of coincident point")
    if dy > 0:
        if dx > 0 and dy < dx:
            return 1
        if dx > 0:
            return 2
        if dy > -dx:
            return 3
        return 4
    if dy == 0:
        return 1 if dx > 0 else 5
    # dy < 0
    if dx < 0 and -dy < -dx:
        return 5
    if dx < 0:
        return 6
    if -dy > dx:
        return 7
    return 8


def cone_neighbors(points: Sequence[Point]) -> list[dict[int, int]]:
    """Per point, the Manhattan-nearest other point in each of the 8 cones.

    Returns a list of mappings cone-index -> point index; ties break toward
    the lower point index.  O(n^2) by design: exactness over optimality.
    """
    out: list[dict[int, int]] = []
    for i, w in enumerate(points):
        best: dict[int, tuple[float, int]] = {}
        for j, p in enumerate(points):
            if i == j:
                continue
            c = cone_index(w, p)
            d = dist_m(w, p)
            cur = best.get(c)
            if cur is None or (d, j) < cur:
                best[c] = (d, j)
        out.append({c: j for c, (_, j) in best.items()})
    return out


# ---------------------------------------------------------------------------
# ground-truth simulation

_DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass
class _Ray:
    idx: int
    src_i: int
    sx: float
    sy: float
    dx: int
    dy: int
    tb: float  # boundary arrival time
    stop_t: Optional[float] = None
    stop_pt: Optional[tuple[float, float]] = None
    blocker: Optional[int] = None  # ray index; None = boundary or node

    @property
    def horizontal(self) -> bool:
        return self.dy == 0

    def point_at(self, t: float) -> tuple[float, float]:
        return (self.sx + self.dx * t, self.sy + self.dy * t)


def _make_rays(points: Sequence[Point], rect: Rect) -> list[_Ray]:
    rays: list[_Ray] = []
    for i, p in enumerate(points):
        for dx, dy in _DIRS:
            if dx > 0:
                tb = rect.max.x - p.x
            elif dx < 0:
                tb = p.x - rect.min.x
            elif dy > 0:
                tb = rect.max.y - p.y
            else:
                tb = p.y - rect.min.y
            rays.append(_Ray(len(rays), i, p.x, p.y, dx, dy, tb))
    return rays


def build_mesh_sim(points: Sequence[Point], tie: TieRule = TieRule(),
                   node_ids: Optional[Sequence[str]] = None,
                   check_dominance: bool = True) -> Mesh:
    """Event-driven simulation of the competition."""
    n = len(points)
    if n < 2:
        raise MeshError("need at least 2 points")
    if len({(p.x, p.y) for p in points}) != n:
        raise MeshError("coincident points")
    rect = _points_rect(points)
    rays = _make_rays(points, rect)

    heap: list[tuple] = []
    seq = 0

    def push(t, prio, victim, kind, payload):
        nonlocal seq
        heapq.heappush(heap, (t, prio, victim, seq, kind, payload))
        seq += 1

    alive_rays = [r for r in rays if r.tb > 0]
    horizontals = [r for r in alive_rays if r.horizontal]
    verticals = [r for r in alive_rays if not r.horizontal]

    for r in alive_rays:
        # Use the rect coordinate directly: sx + dx*tb can be off by an ulp,
        # which would split one boundary hit into two near-duplicate vertices.
        if r.horizontal:
            bpt = (rect.max.x if r.dx > 0 else rect.min.x, r.sy)
        else:
            bpt = (r.sx, rect.max.y if r.dy > 0 else rect.min.y)
        push(r.tb, 5, r.idx, "boundary", bpt)

    # Ray vs node-point hits (a ray reaching another source point stops).
    for r in alive_rays:
        for j, p in enumerate(points):
            if j == r.src_i:
                continue
            if r.horizontal:
                if p.y != r.sy:
                    continue
                s = (p.x - r.sx) * r.dx
            else:
                if p.x != r.sx:
                    continue
                s = (p.y - r.sy) * r.dy
            if s > 0:
                push(s, 0, r.idx, "perp", (None, (p.x, p.y), 0.0))

    # Perpendicular candidates.
    for h in horizontals:
        for v in verticals:
            if h.src_i == v.src_i:
                continue
            qx, qy = v.sx, h.sy
            sh = (qx - h.sx) * h.dx
            sv = (qy - v.sy) * v.dy
            if sh <= 0 or sv <= 0:
                continue
            if sv < sh:
                push(sh, 1, h.idx, "perp", (v.idx, (qx, qy), sv))
            elif sh < sv:
                push(sv, 1, v.idx, "perp", (h.idx, (qx, qy), sh))
            else:
                victim = v.idx if tie.horizontal_wins else h.idx
                other = h.idx if victim == v.idx else v.idx
                push(sh, 2, victim, "tie", (other, (qx, qy)))

    # Collinear head-on pairs.
    for group, axis in ((horizontals, 0), (verticals, 1)):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                a, b = group[i], group[j]
                if axis == 0:
                    if a.sy != b.sy:
                        continue
                    da, db, pa, pb = a.dx, b.dx, a.sx, b.sx
                else:
                    if a.sx != b.sx:
                        continue
                    da, db, pa, pb = a.dy, b.dy, a.sy, b.sy
                if da == db:
                    continue  # same direction: handled by node hits
                # Opposite directions: approaching iff each moves toward the
                # other's source.
                if (pb - pa) * da <= 0:
                    continue
                gap = abs(pb - pa)
                push(gap / 2.0, 3, min(a.idx, b.idx), "headon",
                     (a.idx, b.idx, gap))

    def stop(r: _Ray, t: float, pt, blocker) -> None:
        r.stop_t = t
        r.stop_pt = pt
        r.blocker = blocker

    while heap:
        t, prio, victim, _, kind, payload = heapq.heappop(heap)
        if kind == "boundary":
            r = rays[victim]
            if r.stop_t is None:
                stop(r, t, payload, None)
        elif kind == "perp":
            b_idx, q, u = payload
            r = rays[victim]
            if r.stop_t is not None:
                continue
            if b_idx is not None:
                b = rays[b_idx]
                if b.stop_t is not None and b.stop_t < u:
                    continue  # blocker never reaches q
            stop(r, t, q, b_idx)
        elif kind == "tie":
            other, q = payload
            r = rays[victim]
            o = rays[other]
            if r.stop_t is not None:
                continue
            if o.stop_t is not None and o.stop_t < t:
                continue  # survivor died early; victim passes freely
            stop(r, t, q, other)
        elif kind == "headon":
            ia, ib, gap = payload
            a, b = rays[ia], rays[ib]
            a_ok = a.stop_t is None or a.stop_t >= t
            b_ok = b.stop_t is None or b.stop_t >= t
            if a_ok and b_ok:
                mid = ((a.sx + b.sx) / 2.0, (a.sy + b.sy) / 2.0)
                if a.stop_t is None:
                    stop(a, t, mid, ib)
                if b.stop_t is None:
                    stop(b, t, mid, ia)
            elif not a_ok and b.stop_t is None:
                push(gap - a.stop_t, 4, ib, "tip", (ia, a.stop_pt))
            elif not b_ok and a.stop_t is None:
                push(gap - b.stop_t, 4, ia, "tip", (ib, b.stop_pt))
        elif kind == "tip":
            b_idx, q = payload
            r = rays[victim]
            if r.stop_t is None:
                stop(r, t, q, b_idx)

    if check_dominance:
        for r in rays:
            if r.blocker is None or r.tb == 0:
                continue
            b = rays[r.blocker]
            reach = abs(r.stop_pt[0] - b.sx) + abs(r.stop_pt[1] - b.sy)
            assert reach <= r.stop_t + 1e-9 * max(rect.diagonal, 1.0), (
                "ray dominance violated: blocker reaches the junction later "
                "than the ray it stops")

    segs = [(Point(r.sx, r.sy), Point(*r.stop_pt))
            for r in rays if r.tb > 0 and r.stop_t > 0]
    return _assemble(points, node_ids, rect, segs)


# ---------------------------------------------------------------------------
# four-phase construction


def build_mesh_fast(points: Sequence[Point],
                    node_ids: Optional[Sequence[str]] = None) -> Mesh:
    """Phased construction; requires distinct x and distinct y coordinates."""
    n = len(points)
    if n < 2:
        raise MeshError("need at least 2 points")
    if len({p.x for p in points}) != n or len({p.y for p in points}) != n:
        raise GeneralPositionError("points must have distinct x and y")
    rect = _points_rect(points)
    dy = delta_y(points)

    # Phases 1-2: stop each vertical ray at the Manhattan-nearest competitor
    # in the facing 90-degree wedge (|dx| <= |dy|), else at the boundary.
    verticals: list[tuple[float, float, float]] = []  # (x, ylo, yhi)
    stubs: list[tuple[float, float, float]] = []  # (x, y, formation time)
    for p in points:
        stubs.append((p.x, p.y, 0.0))
    for i, w in enumerate(points):
        for up in (True, False):
            best: Optional[tuple[float, int]] = None
            for j, p in enumerate(points):
                if j == i:
                    continue
                ddy = p.y - w.y if up else w.y - p.y
                if ddy <= 0 or abs(p.x - w.x) > ddy:
                    continue
                cand = (dist_m(w, p), j)
                if best is None or cand < best:
                    best = cand
            stop_y = points[best[1]].y if best is not None else (
                rect.max.y if up else rect.min.y)
            if stop_y == w.y:
                continue  # zero-length ray on the boundary
            ylo, yhi = (w.y, stop_y) if up else (stop_y, w.y)
            verticals.append((w.x, ylo, yhi))
            stubs.append((w.x, stop_y, abs(stop_y - w.y)))

    def shoot_horizontal(q: Point, leftward: bool) -> Optional[float]:
        """x-coordinate of the nearest blocking structure, or None."""
        best_x: Optional[float] = None
        for (x, ylo, yhi) in verticals:
            if (x < q.x) != leftward or x == q.x:
                continue
            if ylo + dy / 3.0 <= q.y <= yhi - dy / 3.0:
                if best_x is None or (abs(x - q.x) < abs(best_x - q.x)):
                    best_x = x
        for (sx, sy, t_form) in stubs:
            if (sx < q.x) != leftward or sx == q.x:
                continue
            if abs(q.y - sy) > dy / 4.0:
                continue
            # A tip exactly on this ray's line blocks only when the vertical
            # ray reached it strictly before this ray arrives; otherwise the
            # horizontal ray is the one that justified the tip and passes
            # through (ties go to the horizontal ray, matching the default
            # simulation tie rule).
            if sy == q.y and t_form >= abs(sx - q.x):
                continue
            if best_x is None or (abs(sx - q.x) < abs(best_x - q.x)):
                best_x = sx
        return best_x

    # Phases 3-4: grow left then right rays in increasing x order against the
    # shrunken vertical segments plus vertex stubs.
    segs: list[tuple[Point, Point]] = []
    for (x, ylo, yhi) in verticals:
        segs.append((Point(x, ylo), Point(x, yhi)))
    order = sorted(range(n), key=lambda i: points[i].x)
    for leftward in (True, False):
        for i in order:
            q = points[i]
            bx = shoot_horizontal(q, leftward)
            if bx is None:
                bx = rect.min.x if leftward else rect.max.x
            if bx == q.x:
                continue  # zero-length ray on the boundary
            segs.append((q, Point(bx, q.y)))

    return _assemble(points, node_ids, rect, segs)


# ---------------------------------------------------------------------------
# mesh assembly shared by both constructions


def _points_rect(points: Sequence[Point]) -> Rect:
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return Rect(Point(min(xs), min(ys)), Point(max(xs), max(ys)))


def _assemble(points: Sequence[Point], node_ids: Optional[Sequence[str]],
              rect: Rect, segs: list[tuple[Point, Point]]) -> Mesh:
    """Split ray segments at every vertex lying on them and build the graph.

    Relies on stop points sharing exact float coordinates with their
    generating sources, so vertices can be bucketed by coordinate.
    """
    if node_ids is None:
        node_ids = [f"n{i}" for i in range(len(points))]
    mesh = Mesh(rect)
    coord_to_id: dict[tuple[float, float], str] = {}
    for nid, p in zip(node_ids, points):
        mesh.add_vertex(nid, p, VertexKind.NODE, node_id=nid)
        coord_to_id[(p.x, p.y)] = nid
    for a, b in segs:
        for p in (a, b):
            key = (p.x, p.y)
            if key not in coord_to_id:
                coord_to_id[key] = mesh.new_junction(p)

    by_y: dict[float, list[tuple[float, str]]] = {}
    by_x: dict[float, list[tuple[float, str]]] = {}
    for (x, y), vid in coord_to_id.items():
        by_y.setdefault(y, []).append((x, vid))
        by_x.setdefault(x, []).append((y, vid))
    for bucket in by_y.values():
        bucket.sort()
    for bucket in by_x.values():
        bucket.sort()

    for a, b in segs:
        if a.y == b.y:
            lo, hi = sorted((a.x, b.x))
            chain = [vid for (x, vid) in by_y[a.y] if lo <= x <= hi]
        else:
            lo, hi = sorted((a.y, b.y))
            chain = [vid for (y, vid) in by_x[a.x] if lo <= y <= hi]
        for u, v in zip(chain, chain[1:]):
            if not mesh.has_edge(u, v):
                mesh.add_edge(u, v)

    # Classify non-node vertices: dangling boundary hits vs junctions.
    for v in mesh.vertices.values():
        if v.kind is VertexKind.NODE:
            continue
        if mesh.degree(v.id) <= 1 and rect.on_boundary(v.pos):
            v.kind = VertexKind.BOUNDARY
        else:
            v.kind = VertexKind.JUNCTION
    return mesh


# ---------------------------------------------------------------------------
# witnesses and measurements


def monotone_path_witness(mesh: Mesh, node: str, quadrant: int,
                          eps: float = 1e-9) -> list[Point]:
    """An xy-monotone path from a node to the bounding rectangle.

    quadrant 1..4 maps to sign pairs (+,+), (-,+), (-,-), (+,-).  Failure
    indicates a construction bug, so it raises.
    """
    signs = {1: (1, 1), 2: (-1, 1), 3: (-1, -1), 4: (1, -1)}[quadrant]
    sx, sy = signs
    tol = eps * max(mesh.boundary.diagonal, 1.0)
    start = mesh.vertices[node]
    if start.kind is not VertexKind.NODE:
        raise MeshError(f"{node!r} is not a node vertex")

    stack = [(node, [node])]
    seen = {node}
    while stack:
        vid, path = stack.pop()
        pos = mesh.vertices[vid].pos
        if mesh.boundary.on_boundary(pos, tol):
            return [mesh.vertices[p].pos for p in path]
        for nb in reversed(mesh.neighbors(vid)):
            if nb in seen:
                continue
            npos = mesh.vertices[nb].pos
            ddx, ddy = npos.x - pos.x, npos.y - pos.y
            if ddx * sx < -tol or ddy * sy < -tol:
                continue
            seen.add(nb)
            stack.append((nb, path + [nb]))
    raise MeshError(
        f"no monotone witness from {node!r} in quadrant {quadrant}")


def verify_monotone(path: Sequence[Point], quadrant: int, rect: Rect,
                    eps: float = 1e-9) -> bool:
    signs = {1: (1, 1), 2: (-1, 1), 3: (-1, -1), 4: (1, -1)}[quadrant]
    tol = eps * max(rect.diagonal, 1.0)
    for a, b in zip(path, path[1:]):
        if (b.x - a.x) * signs[0] < -tol or (b.y - a.y) * signs[1] < -tol:
            return False
    return rect.on_boundary(path[-1], tol)


def stretch_factor(mesh: Mesh) -> float:
    """Max over node pairs of mesh distance over Euclidean distance."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra

    nodes = mesh.node_vertices()
    if len(nodes) < 2:
        return 0.0
    ids = sorted(mesh.vertices)
    idx = {vid: i for i, vid in enumerate(ids)}
    rows, cols, vals = [], [], []
    for u, v in mesh.edges():
        d = mesh.edge_length(u, v)
        rows += [idx[u], idx[v]]
        cols += [idx[v], idx[u]]
        vals += [d, d]
    m = csr_matrix((vals, (rows, cols)), shape=(len(ids), len(ids)))
    srcs = [idx[nid] for nid in nodes]
    dmat = dijkstra(m, directed=False, indices=srcs)
    worst = 0.0
    for a, nid_a in enumerate(nodes):
        pa = mesh.vertices[nid_a].pos
        for b in range(a + 1, len(nodes)):
            nid_b = nodes[b]
            pb = mesh.vertices[nid_b].pos
            graph_d = dmat[a, idx[nid_b]]
            if not math.isfinite(graph_d):
                raise MeshError("mesh is disconnected")
            worst = max(worst, graph_d / dist_e(pa, pb))
    return worst


def rail_set_signature(mesh: Mesh, ndigits: int = 7) -> frozenset:
    """Canonical geometric rail set for cross-construction comparison."""
    sig = set()
    for u, v in mesh.edges():
        a, b = mesh.vertices[u].pos, mesh.vertices[v].pos
        pa = (round(a.x, ndigits), round(a.y, ndigits))
        pb = (round(b.x, ndigits), round(b.y, ndigits))
        sig.add((min(pa, pb), max(pa, pb)))
    return frozenset(sig)
