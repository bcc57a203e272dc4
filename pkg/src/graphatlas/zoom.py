"""Balanced zoom-level assignment via convex-cost min-cost max-flow.

A tile tree over the node positions induces a flow network whose min-cost
maximum flow yields per-level appearance counts minimizing the balance
objective F = sum of squared per-tile new appearances.  The assignment is
extracted greedily by rank and validated against the rank condition.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .geometry import Point, Rect
from .graph import Ranking


class ZoomError(ValueError):
    pass


# ---------------------------------------------------------------------------
# tile tree


@dataclass
class Tile:
    id: int
    level: int  # 1-based, root is 1
    rect: Rect
    point_ids: list[str]
    parent: Optional[int] = None
    children: list[int] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class TileTree:
    height: int
    mode: str  # "1d" or "2d"
    tiles: list[Tile]
    root: int
    point_pos: dict[str, Point]

    def by_level(self, z: int) -> list[Tile]:
        return [t for t in self.tiles if t.level == z]

    @property
    def n_points(self) -> int:
        return len(self.tiles[self.root].point_ids)


def _cell_index(lo: float, hi: float, cells: int, x: float) -> int:
    """Half-open cell membership; the global max edge is closed."""
    if hi <= lo:
        return 0
    i = int((x - lo) / (hi - lo) * cells)
    return min(max(i, 0), cells - 1)


def build_tile_tree(points: dict[str, Point], rho: int,
                    mode: str = "2d") -> TileTree:
    """Full tile tree of height rho over the bounding box of the points.

    Level z divides the root box into a 2^(z-1) x 2^(z-1) grid (2D) or
    2^(z-1) x-intervals (1D).  Cells are computed from the root box directly
    so every point lands in exactly one tile per level.
    """
    if rho < 1:
        raise ZoomError("tree height must be at least 1")
    if mode not in ("1d", "2d"):
        raise ZoomError(f"unknown mode {mode!r}")
    if not points:
        raise ZoomError("no points")
    xs = [p.x for p in points.values()]
    ys = [p.y for p in points.values()]
    box = Rect(Point(min(xs), min(ys)), Point(max(xs), max(ys)))

    tiles: list[Tile] = []

    def cell_rect(z: int, ix: int, iy: int) -> Rect:
        cx = 2 ** (z - 1)
        cy = cx if mode == "2d" else 1
        w = box.width / cx
        h = box.height / cy
        return Rect(Point(box.min.x + ix * w, box.min.y + iy * h),
                    Point(box.min.x + (ix + 1) * w, box.min.y + (iy + 1) * h))

    def cell_of(z: int, p: Point) -> tuple[int, int]:
        cx = 2 ** (z - 1)
        ix = _cell_index(box.min.x, box.max.x, cx, p.x)
        iy = _cell_index(box.min.y, box.max.y, cx, p.y) if mode == "2d" else 0
        return ix, iy

    index: dict[tuple[int, int, int], int] = {}
    for z in range(1, rho + 1):
        cx = 2 ** (z - 1)
        cy = cx if mode == "2d" else 1
        for iy in range(cy):
            for ix in range(cx):
                t = Tile(len(tiles), z, cell_rect(z, ix, iy), [])
                tiles.append(t)
                index[(z, ix, iy)] = t.id
                if z > 1:
                    pix, piy = ix // 2, (iy // 2 if mode == "2d" else 0)
                    pid = index[(z - 1, pix, piy)]
                    t.parent = pid
                    tiles[pid].children.append(t.id)
    for nid in sorted(points):
        p = points[nid]
        for z in range(1, rho + 1):
            ix, iy = cell_of(z, p)
            tiles[index[(z, ix, iy)]].point_ids.append(nid)
    return TileTree(rho, mode, tiles, index[(1, 0, 0)], dict(points))


# ---------------------------------------------------------------------------
# flow network


INF = 10 ** 9


@dataclass
class Arc:
    to: int
    cap: int
    cost: int
    flow: int = 0
    rev: int = 0  # index of the reverse arc in adj[to]


@dataclass
class FlowNetwork:
    n_nodes: int
    adj: list[list[Arc]]
    source: int
    sink: int
    demand: int
    # bookkeeping for extraction
    tile_in: dict[int, int] = field(default_factory=dict)
    tile_out: dict[int, int] = field(default_factory=dict)
    dashed: dict[int, list[tuple[int, int]]] = field(default_factory=dict)
    dotted: Optional[tuple[int, int]] = None

    def add_arc(self, u: int, v: int, cap: int, cost: int) -> tuple[int, int]:
        a = Arc(v, cap, cost)
        b = Arc(u, 0, -cost)
        a.rev = len(self.adj[v])
        b.rev = len(self.adj[u])
        self.adj[u].append(a)
        self.adj[v].append(b)
        return u, len(self.adj[u]) - 1

    def arc(self, ref: tuple[int, int]) -> Arc:
        return self.adj[ref[0]][ref[1]]


def build_flow_network(t: TileTree, quota: int) -> FlowNetwork:
    """Flow network whose min-cost max flow balances per-level appearances.

    Squared appearance costs are realized exactly by parallel unit arcs with
    odd marginal costs 1, 3, 5, ...  Non-leaf tiles carry an internal
    capacity-quota arc; leaves drain into the super-sink at their point
    count.
    """
    if quota < 1:
        raise ZoomError("quota must be at least 1")
    n_ids = 2 + 2 * len(t.tiles)
    net = FlowNetwork(n_ids, [[] for _ in range(n_ids)], 0, 1,
                      t.n_points)
    for tile in t.tiles:
        net.tile_in[tile.id] = 2 + 2 * tile.id
        net.tile_out[tile.id] = 3 + 2 * tile.id
    for tile in t.tiles:
        tin, tout = net.tile_in[tile.id], net.tile_out[tile.id]
        if tile.is_leaf:
            net.add_arc(tin, tout, INF, 0)
            net.add_arc(tout, net.sink, len(tile.point_ids), 0)
        else:
            net.add_arc(tin, tout, quota, 0)
            for ch in tile.children:
                net.add_arc(tout, net.tile_in[ch], INF, 0)
        if tile.parent is None:
            net.dotted = net.add_arc(net.source, tin, INF, 0)
        else:
            refs = []
            for k in range(1, len(tile.point_ids) + 1):
                refs.append(net.add_arc(net.source, tin, 1, 2 * k - 1))
            net.dashed[tile.id] = refs
    return net


def solve_mcmf(net: FlowNetwork) -> tuple[int, int]:
    """Successive shortest augmenting paths with node potentials.

    Returns (max flow, its minimum cost).  All arc costs are nonnegative, so
    plain Dijkstra suffices for the first iteration as well.
    """
    n = net.n_nodes
    pot = [0] * n
    total_flow = 0
    total_cost = 0
    while True:
        dist = [math.inf] * n
        prev: list[Optional[tuple[int, int]]] = [None] * n
        dist[net.source] = 0.0
        heap = [(0.0, net.source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for i, a in enumerate(net.adj[u]):
                if a.cap - a.flow <= 0:
                    continue
                nd = d + a.cost + pot[u] - pot[a.to]
                if nd < dist[a.to]:
                    dist[a.to] = nd
                    prev[a.to] = (u, i)
                    heapq.heappush(heap, (nd, a.to))
        if prev[net.sink] is None:
            return total_flow, total_cost
        for u in range(n):
            if dist[u] < math.inf:
                pot[u] += int(dist[u])
        # bottleneck
        push = INF
        v = net.sink
        while v != net.source:
            u, i = prev[v]
            a = net.adj[u][i]
            push = min(push, a.cap - a.flow)
            v = u
        v = net.sink
        while v != net.source:
            u, i = prev[v]
            a = net.adj[u][i]
            a.flow += push
            net.adj[a.to][a.rev].flow -= push
            total_cost += push * a.cost
            v = u
        total_flow += push


def network_dump(net: FlowNetwork) -> str:
    """DIMACS-like text form of the network and its current flow."""
    lines = [f"p min {net.n_nodes} "
             f"{sum(len(a) for a in net.adj) // 2}",
             f"n {net.source} {net.demand}",
             f"n {net.sink} {-net.demand}"]
    for u in range(net.n_nodes):
        for a in net.adj[u]:
            if a.cost >= 0 and a.cap > 0:
                lines.append(f"a {u} {a.to} 0 {a.cap} {a.cost} f {a.flow}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# assignment


@dataclass
class LevelAssignment:
    g: dict[str, int]
    tree: TileTree

    def visible_count(self, tile: Tile) -> int:
        return sum(1 for p in tile.point_ids if self.g[p] <= tile.level)

    def deltas(self) -> dict[tuple[int, int], int]:
        out = {}
        for tile in self.tree.tiles:
            if tile.parent is not None:
                out[(tile.parent, tile.id)] = (
                    self.visible_count(tile)
                    - self._parent_share(tile))
        return out

    def _parent_share(self, tile: Tile) -> int:
        parent = self.tree.tiles[tile.parent]
        return sum(1 for p in tile.point_ids if self.g[p] <= parent.level)


def assignment_from_flow(t: TileTree, net: FlowNetwork,
                         ranks: Ranking) -> LevelAssignment:
    """Extract the node -> level map from a solved max flow.

    Walk levels deepest first; each tile's dashed inflow x claims the x
    lowest-rank still-unassigned points inside the tile (rank ties broken by
    node id).  The root's dotted flow claims the final, highest-rank batch.
    """
    flow_total = sum(a.flow for a in net.adj[net.source])
    if flow_total < t.n_points:
        raise ZoomError("no feasible visualization at this quota")
    g: dict[str, int] = {}
    for z in range(t.height, 0, -1):
        for tile in sorted(t.by_level(z), key=lambda x: x.id):
            if tile.parent is None:
                x = net.arc(net.dotted).flow
            else:
                x = sum(net.arc(r).flow for r in net.dashed.get(tile.id, []))
            if x == 0:
                continue
            free = [p for p in tile.point_ids if p not in g]
            free.sort(key=lambda p: (ranks[p], p))
            if x > len(free):
                raise ZoomError("flow exceeds unassigned points in tile")
            for p in free[:x]:
                g[p] = z
    if len(g) != t.n_points:
        raise ZoomError("extraction left points unassigned")
    return LevelAssignment(g, t)


def check_rank_condition(a: LevelAssignment,
                         ranks: Ranking) -> list[tuple[str, str]]:
    """Pairs (q, q') with strictly higher rank yet strictly deeper level.

    An empty list means the assignment respects importance order.  Equal
    ranks never violate (any order among peers is acceptable).
    """
    items = sorted(a.g, key=lambda p: (-ranks[p], p))
    out = []
    for i, q in enumerate(items):
        for qp in items[i + 1:]:
            if ranks[q] > ranks[qp] and a.g[q] > a.g[qp]:
                out.append((q, qp))
    return out


def objective_f(t: TileTree, a: LevelAssignment) -> int:
    return sum(d * d for d in a.deltas().values())


def assignment_valid(t: TileTree, a: LevelAssignment, quota: int) -> bool:
    """Nesting and quota invariants of a complete assignment."""
    for d in a.deltas().values():
        if d < 0:
            return False
    for tile in t.tiles:
        if not tile.is_leaf and a.visible_count(tile) > quota:
            return False
    return True


def brute_force_optimum(t: TileTree, quota: int) -> Optional[int]:
    """Exhaustive minimum of F over all quota-respecting assignments.

    Test oracle only; refuses instances beyond 12 points or height 3.
    """
    ids = sorted(t.tiles[t.root].point_ids)
    if len(ids) > 12 or t.height > 3:
        raise ZoomError("instance too large for brute force")
    best: Optional[int] = None
    for combo in itertools.product(range(1, t.height + 1), repeat=len(ids)):
        a = LevelAssignment(dict(zip(ids, combo)), t)
        ok = True
        for tile in t.tiles:
            if not tile.is_leaf and a.visible_count(tile) > quota:
                ok = False
                break
        if not ok:
            continue
        f = objective_f(t, a)
        if best is None or f < best:
            best = f
    return best


def solve_assignment(t: TileTree, quota: int,
                     ranks: Ranking) -> tuple[LevelAssignment, int]:
    """Convenience: build network, solve, extract.  Returns (assignment, F)."""
    net = build_flow_network(t, quota)
    _, cost = solve_mcmf(net)
    a = assignment_from_flow(t, net, ranks)
    return a, cost


def min_quota(t: TileTree, ranks: Ranking) -> Optional[int]:
    """Smallest quota with a full flow and a rank-respecting extraction.

    Feasibility is monotone in the quota, so binary search applies.
    """
    n = t.n_points

    def feasible(q: int) -> bool:
        try:
            a, _ = solve_assignment(t, q, ranks)
        except ZoomError:
            return False
        return not check_rank_condition(a, ranks)

    lo, hi = 1, n
    if not feasible(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo
