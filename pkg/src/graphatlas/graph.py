"""Input graph container, validation and importance ranking."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import Point, Rect


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    id: str
    pos: Point
    rank: float | None = None


@dataclass
class InputGraph:
    """Validated immutable problem instance: positioned nodes plus edges."""

    nodes: list[Node]
    edges: list[tuple[str, str]]
    _index: dict[str, Node] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._index = {n.id: n for n in self.nodes}

    def node(self, node_id: str) -> Node:
        return self._index[node_id]

    def has_node(self, node_id: str) -> bool:
        return node_id in self._index

    def neighbors(self, node_id: str) -> list[str]:
        out = []
        for u, v in self.edges:
            if u == node_id:
                out.append(v)
            elif v == node_id:
                out.append(u)
        return sorted(out)

    @property
    def positions(self) -> dict[str, Point]:
        return {n.id: n.pos for n in self.nodes}

    def has_explicit_ranks(self) -> bool:
        return all(n.rank is not None for n in self.nodes)


Ranking = dict[str, float]


def validate(raw_nodes, raw_edges) -> InputGraph:
    """Build an InputGraph, or raise GraphError naming the first violation.

    raw_nodes: iterable of (id, x, y) or (id, x, y, rank)
    raw_edges: iterable of (id, id)
    """
    nodes: list[Node] = []
    seen_ids: set[str] = set()
    seen_pos: dict[tuple[float, float], str] = {}
    for item in raw_nodes:
        if len(item) == 3:
            nid, x, y = item
            rank = None
        else:
            nid, x, y, rank = item
        nid = str(nid)
        if nid in seen_ids:
            raise GraphError(f"duplicate id: {nid!r}")
        seen_ids.add(nid)
        pos = Point(float(x), float(y))
        key = (pos.x, pos.y)
        if key in seen_pos:
            raise GraphError(
                f"coincident positions: {nid!r} and {seen_pos[key]!r}")
        seen_pos[key] = nid
        if rank is not None:
            rank = float(rank)
            if not math.isfinite(rank) or rank < 0:
                raise GraphError(f"invalid rank for {nid!r}: {rank}")
        nodes.append(Node(nid, pos, rank))

    edges: list[tuple[str, str]] = []
    seen_edges: set[tuple[str, str]] = set()
    for u, v in raw_edges:
        u, v = str(u), str(v)
        if u == v:
            raise GraphError(f"self-loop: ({u!r}, {v!r})")
        if u not in seen_ids or v not in seen_ids:
            raise GraphError(f"edge references unknown node: ({u!r}, {v!r})")
        key = (u, v) if u < v else (v, u)
        if key in seen_edges:
            raise GraphError(f"duplicate edge: ({u!r}, {v!r})")
        seen_edges.add(key)
        edges.append(key)
    return InputGraph(nodes, edges)


def pagerank(g: InputGraph, damping: float = 0.85, eps: float = 1e-10,
             max_iter: int = 10000) -> Ranking:
    """Power iteration PageRank; undirected edges act as two directed arcs.

    Dangling (isolated) nodes redistribute uniformly.  Ranks sum to 1.
    """
    n = len(g.nodes)
    if n == 0:
        raise GraphError("pagerank of an empty graph")
    ids = [node.id for node in g.nodes]
    idx = {nid: i for i, nid in enumerate(ids)}
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in g.edges:
        adj[idx[u]].append(idx[v])
        adj[idx[v]].append(idx[u])
    deg = [len(a) for a in adj]
    rank = [1.0 / n] * n
    for _ in range(max_iter):
        dangling = sum(rank[i] for i in range(n) if deg[i] == 0)
        base = (1.0 - damping) / n + damping * dangling / n
        nxt = [base] * n
        for i in range(n):
            if deg[i]:
                share = damping * rank[i] / deg[i]
                for j in adj[i]:
                    nxt[j] += share
        delta = sum(abs(nxt[i] - rank[i]) for i in range(n))
        rank = nxt
        if delta < eps:
            break
    total = sum(rank)
    return {ids[i]: rank[i] / total for i in range(n)}


def ranking_for(g: InputGraph, damping: float = 0.85,
                eps: float = 1e-10) -> Ranking:
    """Explicit input ranks when present, PageRank otherwise."""
    if g.has_explicit_ranks():
        return {n.id: float(n.rank) for n in g.nodes}  # type: ignore[arg-type]
    return pagerank(g, damping=damping, eps=eps)


def bounding_rect(g: InputGraph) -> Rect:
    if not g.nodes:
        raise GraphError("bounding rect of an empty graph")
    xs = [n.pos.x for n in g.nodes]
    ys = [n.pos.y for n in g.nodes]
    return Rect(Point(min(xs), min(ys)), Point(max(xs), max(ys)))
