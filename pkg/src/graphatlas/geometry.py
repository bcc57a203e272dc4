"""2D primitives shared by the mesh, routing and level pipeline modules.

Everything here operates on plain 64-bit floats.  Exact predicates are not
needed because inputs are sanitized to general position before mesh
construction and all downstream tolerances are >= 1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class GeometryError(ValueError):
    pass


class SegmentOverlapError(GeometryError):
    """Two collinear segments overlap in more than one point."""


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Rect:
    min: Point
    max: Point

    def __post_init__(self) -> None:
        if self.min.x > self.max.x or self.min.y > self.max.y:
            raise GeometryError("rect min corner must not exceed max corner")

    @property
    def width(self) -> float:
        return self.max.x - self.min.x

    @property
    def height(self) -> float:
        return self.max.y - self.min.y

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def contains(self, p: Point, eps: float = 0.0) -> bool:
        return (self.min.x - eps <= p.x <= self.max.x + eps
                and self.min.y - eps <= p.y <= self.max.y + eps)

    def on_boundary(self, p: Point, eps: float = 1e-9) -> bool:
        if not self.contains(p, eps):
            return False
        return (abs(p.x - self.min.x) <= eps or abs(p.x - self.max.x) <= eps
                or abs(p.y - self.min.y) <= eps or abs(p.y - self.max.y) <= eps)


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def length(self) -> float:
        return dist_e(self.a, self.b)


Polyline = Sequence[Point]


def dist_e(p: Point, q: Point) -> float:
    """Euclidean distance."""
    return math.hypot(p.x - q.x, p.y - q.y)


def dist_m(p: Point, q: Point) -> float:
    """Manhattan distance."""
    return abs(p.x - q.x) + abs(p.y - q.y)


def _cross(ox: float, oy: float, ax: float, ay: float, bx: float, by: float) -> float:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def seg_intersect(s1: Segment, s2: Segment, eps: float = 1e-12) -> Optional[Point]:
    """Unique intersection point of two segments, or None if disjoint.

    Raises SegmentOverlapError when the segments are collinear and share more
    than a single point; such a configuration signals invalid mesh surgery.
    """
    p, q = s1.a, s1.b
    r, s = s2.a, s2.b
    d1x, d1y = q.x - p.x, q.y - p.y
    d2x, d2y = s.x - r.x, s.y - r.y
    denom = d1x * d2y - d1y * d2x
    scale = max(abs(d1x), abs(d1y), abs(d2x), abs(d2y), 1.0)
    if abs(denom) <= eps * scale * scale:
        # Parallel.  Check for collinear overlap / touch.
        if abs(_cross(p.x, p.y, q.x, q.y, r.x, r.y)) > eps * scale * scale:
            return None
        # Collinear: project on the dominant axis.
        if abs(d1x) >= abs(d1y):
            lo1, hi1 = sorted((p.x, q.x))
            lo2, hi2 = sorted((r.x, s.x))
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if lo > hi + eps * scale:
                return None
            if hi - lo > eps * scale:
                raise SegmentOverlapError("collinear segments overlap")
            t = lo
            # Recover the shared point.
            for cand in (p, q, r, s):
                if abs(cand.x - t) <= eps * scale:
                    return cand
            return None
        lo1, hi1 = sorted((p.y, q.y))
        lo2, hi2 = sorted((r.y, s.y))
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi + eps * scale:
            return None
        if hi - lo > eps * scale:
            raise SegmentOverlapError("collinear segments overlap")
        t = lo
        for cand in (p, q, r, s):
            if abs(cand.y - t) <= eps * scale:
                return cand
        return None
    t = ((r.x - p.x) * d2y - (r.y - p.y) * d2x) / denom
    u = ((r.x - p.x) * d1y - (r.y - p.y) * d1x) / denom
    tol = eps * scale
    if -tol <= t <= 1 + tol and -tol <= u <= 1 + tol:
        return Point(p.x + t * d1x, p.y + t * d1y)
    return None


def point_seg_dist(p: Point, s: Segment) -> float:
    """Euclidean distance from a point to the nearest point of a segment."""
    ax, ay, bx, by = s.a.x, s.a.y, s.b.x, s.b.y
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    if den == 0.0:
        return dist_e(p, s.a)
    t = ((p.x - ax) * dx + (p.y - ay) * dy) / den
    t = min(1.0, max(0.0, t))
    return math.hypot(p.x - (ax + t * dx), p.y - (ay + t * dy))


def seg_seg_dist(s1: Segment, s2: Segment) -> float:
    """Minimum distance between two segments (0 if they intersect)."""
    try:
        if seg_intersect(s1, s2) is not None:
            return 0.0
    except SegmentOverlapError:
        return 0.0
    return min(
        point_seg_dist(s1.a, s2),
        point_seg_dist(s1.b, s2),
        point_seg_dist(s2.a, s1),
        point_seg_dist(s2.b, s1),
    )


def angle_at(v: Point, a: Point, b: Point) -> float:
    """Interior angle in degrees between rays v->a and v->b, in [0, 180]."""
    ax, ay = a.x - v.x, a.y - v.y
    bx, by = b.x - v.x, b.y - v.y
    na = math.hypot(ax, ay)
    nb = math.hypot(bx, by)
    if na == 0.0 or nb == 0.0:
        raise GeometryError("angle arm coincides with the apex")
    dot = (ax * bx + ay * by) / (na * nb)
    dot = min(1.0, max(-1.0, dot))
    return math.degrees(math.acos(dot))


def geometric_median(pts: Sequence[Point], eps: float = 1e-9,
                     max_iter: int = 200) -> Point:
    """Weiszfeld iteration for the point minimizing the sum of distances.

    Starts at the centroid.  If an iterate lands within eps of an input point
    the iteration snaps to that point (the standard singularity handling).
    """
    if not pts:
        raise GeometryError("geometric median of an empty point set")
    if len(pts) == 1:
        return pts[0]
    cx = sum(p.x for p in pts) / len(pts)
    cy = sum(p.y for p in pts) / len(pts)
    x, y = cx, cy
    for _ in range(max_iter):
        wx = wy = wsum = 0.0
        snapped = None
        for p in pts:
            d = math.hypot(x - p.x, y - p.y)
            if d < eps:
                snapped = p
                break
            w = 1.0 / d
            wx += w * p.x
            wy += w * p.y
            wsum += w
        if snapped is not None:
            return snapped
        nx, ny = wx / wsum, wy / wsum
        if math.hypot(nx - x, ny - y) < eps:
            x, y = nx, ny
            break
        x, y = nx, ny
    return Point(x, y)


def sum_of_distances(p: Point, pts: Iterable[Point]) -> float:
    return sum(dist_e(p, q) for q in pts)


def polyline_length(pl: Polyline) -> float:
    return sum(dist_e(pl[i], pl[i + 1]) for i in range(len(pl) - 1))


def resample(pl: Polyline, m: int) -> list[Point]:
    """Resample a polyline to m points uniformly spaced in arc length.

    The first and last points are preserved exactly.
    """
    if m < 2:
        raise GeometryError("resample needs at least 2 output points")
    if len(pl) < 2:
        raise GeometryError("polyline needs at least 2 points")
    cum = [0.0]
    for i in range(len(pl) - 1):
        cum.append(cum[-1] + dist_e(pl[i], pl[i + 1]))
    total = cum[-1]
    out: list[Point] = [pl[0]]
    seg = 0
    for k in range(1, m - 1):
        target = total * k / (m - 1)
        while seg < len(pl) - 2 and cum[seg + 1] < target:
            seg += 1
        span = cum[seg + 1] - cum[seg]
        t = 0.0 if span == 0.0 else (target - cum[seg]) / span
        a, b = pl[seg], pl[seg + 1]
        out.append(Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
    out.append(pl[-1])
    return out
