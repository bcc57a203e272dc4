import math

import pytest
from hypothesis import given, strategies as st

from graphatlas.geometry import (
    Point, Rect, Segment, SegmentOverlapError, angle_at, dist_e, dist_m,
    geometric_median, point_seg_dist, polyline_length, resample,
    seg_intersect, seg_seg_dist, sum_of_distances,
)

coord = st.floats(-1000, 1000, allow_nan=False, allow_infinity=False)


def test_distances():
    a, b = Point(0, 0), Point(3, 4)
    assert dist_e(a, b) == 5.0
    assert dist_m(a, b) == 7.0


def test_seg_intersect_proper_crossing():
    p = seg_intersect(Segment(Point(0, 0), Point(2, 2)),
                      Segment(Point(0, 2), Point(2, 0)))
    assert p == Point(1, 1)


def test_seg_intersect_disjoint():
    assert seg_intersect(Segment(Point(0, 0), Point(1, 0)),
                         Segment(Point(0, 1), Point(1, 1))) is None


def test_seg_intersect_shared_endpoint():
    p = seg_intersect(Segment(Point(0, 0), Point(1, 1)),
                      Segment(Point(1, 1), Point(2, 0)))
    assert p == Point(1, 1)


def test_seg_intersect_collinear_overlap_raises():
    with pytest.raises(SegmentOverlapError):
        seg_intersect(Segment(Point(0, 0), Point(2, 0)),
                      Segment(Point(1, 0), Point(3, 0)))


def test_point_seg_dist():
    s = Segment(Point(0, 0), Point(10, 0))
    assert point_seg_dist(Point(5, 3), s) == 3.0
    assert point_seg_dist(Point(-4, 3), s) == 5.0


def test_seg_seg_dist_parallel():
    d = seg_seg_dist(Segment(Point(0, 0), Point(10, 0)),
                     Segment(Point(0, 2), Point(10, 2)))
    assert d == pytest.approx(2.0)


def test_angle_at_right_angle():
    a = angle_at(Point(0, 0), Point(1, 0), Point(0, 1))
    assert a == pytest.approx(90.0)


def test_angle_at_straight():
    a = angle_at(Point(0, 0), Point(-1, 0), Point(1, 0))
    assert a == pytest.approx(180.0)


def test_geometric_median_square_center():
    pts = [Point(0, 0), Point(2, 0), Point(2, 2), Point(0, 2)]
    m = geometric_median(pts)
    assert dist_e(m, Point(1, 1)) < 1e-6


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)),
                min_size=3, max_size=8, unique=True))
def test_geometric_median_minimizes(raw):
    # Weiszfeld converges slowly near input points, so allow a small
    # relative slack when probing the four axis directions
    pts = [Point(float(x), float(y)) for x, y in raw]
    m = geometric_median(pts)
    base = sum_of_distances(m, pts)
    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        probe = Point(m.x + 0.5 * dx, m.y + 0.5 * dy)
        assert sum_of_distances(probe, pts) >= base - 1e-3 * (1 + base)


def test_polyline_length():
    pl = [Point(0, 0), Point(3, 0), Point(3, 4)]
    assert polyline_length(pl) == 7.0


def test_resample_preserves_endpoints():
    # corner cutting may shorten the polyline but never below the chord
    pl = [Point(0, 0), Point(3, 0), Point(3, 4)]
    out = resample(pl, 9)
    assert len(out) == 9
    assert out[0] == pl[0] and out[-1] == pl[-1]
    assert 5.0 <= polyline_length(out) <= 7.0 + 1e-12


@given(st.lists(st.tuples(coord, coord), min_size=2, max_size=6),
       st.integers(2, 12))
def test_resample_count_and_endpoints(raw, m):
    pl = [Point(x, y) for x, y in raw]
    out = resample(pl, m)
    assert len(out) == m
    assert out[0] == pl[0] and out[-1] == pl[-1]


def test_rect_on_boundary():
    r = Rect(Point(0, 0), Point(10, 10))
    assert r.on_boundary(Point(0, 5), 1e-9)
    assert r.on_boundary(Point(10, 10), 1e-9)
    assert not r.on_boundary(Point(5, 5), 1e-9)
    assert math.isclose(r.diagonal, math.sqrt(200))
