import pytest

from graphatlas.graph import (
    GraphError, bounding_rect, pagerank, ranking_for, validate,
)


def small():
    return validate([("a", 0.0, 0.0), ("b", 4.0, 1.0), ("c", 2.0, 5.0)],
                    [("a", "b"), ("b", "c")])


def test_validate_basic():
    g = small()
    assert [n.id for n in g.nodes] == ["a", "b", "c"]
    assert g.edges == [("a", "b"), ("b", "c")]
    assert g.neighbors("b") == ["a", "c"]


def test_validate_duplicate_id():
    with pytest.raises(GraphError):
        validate([("a", 0, 0), ("a", 1, 1)], [])


def test_validate_unknown_endpoint():
    with pytest.raises(GraphError):
        validate([("a", 0, 0), ("b", 1, 1)], [("a", "z")])


def test_validate_self_loop():
    with pytest.raises(GraphError):
        validate([("a", 0, 0), ("b", 1, 1)], [("a", "a")])


def test_validate_duplicate_edge_collapses_or_raises():
    try:
        g = validate([("a", 0, 0), ("b", 1, 1)], [("a", "b"), ("b", "a")])
    except GraphError:
        return
    assert g.edges == [("a", "b")]


def test_pagerank_sums_to_one_and_favors_hub():
    g = validate([("h", 0, 0), ("x", 1, 0), ("y", 0, 1), ("z", 1, 1)],
                 [("h", "x"), ("h", "y"), ("h", "z")])
    pr = pagerank(g)
    assert sum(pr.values()) == pytest.approx(1.0)
    assert pr["h"] > pr["x"] == pytest.approx(pr["y"])


def test_ranking_uses_given_ranks():
    g = validate([("a", 0, 0, 5.0), ("b", 1, 1, 2.0)], [("a", "b")])
    ranks = ranking_for(g)
    assert ranks == {"a": 5.0, "b": 2.0}


def test_ranking_falls_back_to_pagerank():
    g = small()
    ranks = ranking_for(g)
    assert ranks == pagerank(g)


def test_bounding_rect():
    r = bounding_rect(small())
    assert (r.min.x, r.min.y, r.max.x, r.max.y) == (0.0, 0.0, 4.0, 5.0)
