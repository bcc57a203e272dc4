"""Shared helpers for the test suite."""

from __future__ import annotations

import random

from graphatlas.geometry import Point
from graphatlas.graph import InputGraph, validate
from graphatlas.mesh import sanitize_points


def random_points(n: int, seed: int, span: float = 100.0) -> list[Point]:
    rng = random.Random(seed)
    return sanitize_points(
        [Point(rng.uniform(0, span), rng.uniform(0, span)) for _ in range(n)],
        seed)


def random_graph(n: int, m: int, seed: int,
                 rank_ties: bool = False) -> InputGraph:
    """Connected-ish random graph over sanitized general-position points."""
    pts = random_points(n, seed)
    rng = random.Random(seed + 1)
    ids = [f"n{i}" for i in range(n)]
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):
        edges.add((min(ids[a], ids[b]), max(ids[a], ids[b])))
    while len(edges) < min(m, n * (n - 1) // 2):
        a, b = rng.sample(ids, 2)
        edges.add((min(a, b), max(a, b)))
    raw = []
    for i, (vid, p) in enumerate(zip(ids, pts)):
        if rank_ties:
            raw.append((vid, p.x, p.y, float(1 + i % 3)))
        else:
            raw.append((vid, p.x, p.y))
    return validate(raw, sorted(edges))
