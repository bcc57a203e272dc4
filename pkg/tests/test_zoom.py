import random

import pytest

from graphatlas import zoom as Z
from graphatlas.geometry import Point

from conftest import random_points


def leaf31_tree():
    # four points; the leaf split puts three in one child and one in the
    # other, the classic case where greedy disclosure is suboptimal
    pts = {"a": Point(1.0, 1.0), "b": Point(2.0, 2.0), "c": Point(3.0, 3.0),
           "d": Point(9.0, 9.0)}
    return Z.build_tile_tree(pts, 2, "2d")


def test_tile_tree_shape_2d():
    t = leaf31_tree()
    assert t.height == 2
    assert len(t.by_level(1)) == 1
    assert len(t.by_level(2)) == 4
    root = t.tiles[t.root]
    assert sorted(root.point_ids) == ["a", "b", "c", "d"]
    assert sum(len(x.point_ids) for x in t.by_level(2)) == 4


def test_tile_tree_shape_1d():
    pts = {f"p{i}": Point(float(i), 0.5) for i in range(6)}
    t = Z.build_tile_tree(pts, 3, "1d")
    assert len(t.by_level(2)) == 2
    assert len(t.by_level(3)) == 4


def test_tile_tree_cells_half_open():
    # a point on an interior cell edge belongs to the right/upper cell,
    # the global max edge stays closed
    pts = {"mid": Point(5.0, 5.0), "lo": Point(0.0, 0.0),
           "hi": Point(10.0, 10.0)}
    t = Z.build_tile_tree(pts, 2, "2d")
    owner = [x for x in t.by_level(2) if "mid" in x.point_ids]
    assert len(owner) == 1
    assert "hi" in owner[0].point_ids


def test_leaf31_quota2_flow_and_objective():
    t = leaf31_tree()
    net = Z.build_flow_network(t, 2)
    flow, cost = Z.solve_mcmf(net)
    assert flow == 4
    assert cost == 2
    assert Z.brute_force_optimum(t, 2) == 2


def test_leaf31_quota2_extraction():
    t = leaf31_tree()
    ranks = {"a": 4.0, "b": 3.0, "c": 2.0, "d": 1.0}
    a, f = Z.solve_assignment(t, 2, ranks)
    assert f == 2
    assert a.g == {"a": 1, "b": 1, "c": 2, "d": 2}
    assert Z.check_rank_condition(a, ranks) == []
    assert Z.objective_f(t, a) == 2


def test_height_one_everything_visible():
    t = Z.build_tile_tree({"a": Point(0, 0), "b": Point(1, 2),
                           "c": Point(3, 1)}, 1, "2d")
    a, f = Z.solve_assignment(t, 1, {"a": 1.0, "b": 1.0, "c": 1.0})
    assert all(v == 1 for v in a.g.values())
    assert f == 0


def test_rank_condition_violation_reported():
    t = leaf31_tree()
    # d has the top rank but sits alone in its leaf, so at quota 1 it is
    # pushed deeper than a lower-ranked point
    ranks = {"a": 1.0, "b": 2.0, "c": 3.0, "d": 9.0}
    a, _ = Z.solve_assignment(t, 1, ranks)
    pairs = Z.check_rank_condition(a, ranks)
    assert ("d", "c") in pairs


def test_equal_ranks_never_violate():
    t = leaf31_tree()
    ranks = dict.fromkeys("abcd", 1.0)
    a, _ = Z.solve_assignment(t, 1, ranks)
    assert Z.check_rank_condition(a, ranks) == []


def test_solver_matches_brute_force_random():
    rng = random.Random(0)
    for trial in range(25):
        n = rng.randint(2, 9)
        rho = rng.randint(1, 3)
        mode = rng.choice(["1d", "2d"])
        pts = {f"p{i}": p
               for i, p in enumerate(random_points(n, 1000 + trial))}
        t = Z.build_tile_tree(pts, rho, mode)
        q = rng.choice([1, 2, n])
        ranks = dict.fromkeys(pts, 1.0)
        bf = Z.brute_force_optimum(t, q)
        try:
            a, f = Z.solve_assignment(t, q, ranks)
        except Z.ZoomError:
            assert bf is None
            continue
        assert bf == f
        assert Z.assignment_valid(t, a, q)
        assert Z.objective_f(t, a) == f


def test_min_quota_uniform_ranks_is_one():
    pts = {f"p{i}": p for i, p in enumerate(random_points(8, 5))}
    t = Z.build_tile_tree(pts, 3, "2d")
    assert Z.min_quota(t, dict.fromkeys(pts, 1.0)) == 1


def test_min_quota_feasible_boundary():
    pts = {f"p{i}": p for i, p in enumerate(random_points(10, 9))}
    t = Z.build_tile_tree(pts, 3, "2d")
    ranks = {p: float(i % 2) for i, p in enumerate(sorted(pts))}
    q = Z.min_quota(t, ranks)
    assert q is not None

    def feasible(quota):
        try:
            a, _ = Z.solve_assignment(t, quota, ranks)
        except Z.ZoomError:
            return False
        return not Z.check_rank_condition(a, ranks)

    assert feasible(q)
    if q > 1:
        assert not feasible(q - 1)


def test_network_dump_lists_unit_arcs():
    t = leaf31_tree()
    net = Z.build_flow_network(t, 2)
    dump = Z.network_dump(net)
    # convex costs appear as unit arcs with odd costs 1, 3, 5, ...
    lines = dump.splitlines()
    assert lines[0].startswith("p min")
    costs = [int(x.split()[5]) for x in lines if x.startswith("a")]
    for odd in (1, 3, 5):
        assert costs.count(odd) >= 1


def test_quota_zero_rejected():
    t = leaf31_tree()
    with pytest.raises(Z.ZoomError):
        Z.build_flow_network(t, 0)
