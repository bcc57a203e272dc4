import pytest

from graphatlas import levels as L
from graphatlas import mesh as M
from graphatlas import routing as R
from graphatlas import zoom as Z
from graphatlas.geometry import Point, polyline_length
from graphatlas.graph import ranking_for

from conftest import random_graph


def pipeline(seed=0, n=10, k=3):
    g = random_graph(n, int(1.5 * n), seed, rank_ties=True)
    mesh = M.build_mesh_sim([nd.pos for nd in g.nodes],
                            node_ids=[nd.id for nd in g.nodes])
    cfg = R.default_config(mesh, g)
    detoured = R.add_detours(mesh, g, cfg.port_radius)
    cfg = R.default_config(detoured, g)
    rm = R.prune(R.route_edges(detoured, g))
    ranks = ranking_for(g)
    tree = Z.build_tile_tree(g.positions, k, "2d")
    q = Z.min_quota(tree, ranks)
    assign, _ = Z.solve_assignment(tree, q, ranks)
    bundles, transitions = L.build_level_bundles(g, assign, k, rm, cfg)
    return g, tree, assign, bundles, transitions, cfg


FIX = pipeline()


def test_bundle_chain_shape():
    g, tree, assign, bundles, transitions, cfg = FIX
    assert [b.level for b in bundles] == [1, 2, 3]
    assert len(transitions) == 2
    assert bundles[-1].node_ids == sorted(n.id for n in g.nodes)


def test_level_nesting_and_induced_edges():
    g, tree, assign, bundles, transitions, cfg = FIX
    for coarse, fine in zip(bundles, bundles[1:]):
        assert set(coarse.node_ids) <= set(fine.node_ids)
        vset = set(coarse.node_ids)
        want = [(u, v) for u, v in g.edges if u in vset and v in vset]
        assert coarse.edges == want


def test_levels_match_assignment():
    g, tree, assign, bundles, transitions, cfg = FIX
    for b in bundles:
        want = sorted(v for v, lvl in assign.g.items() if lvl <= b.level)
        assert b.node_ids == want


def test_every_edge_routed_per_level():
    g, tree, assign, bundles, transitions, cfg = FIX
    for b in bundles:
        routed = sorted(r.edge for r in b.rm.routes)
        assert routed == sorted(b.edges)


def test_routes_avoid_visible_foreign_nodes():
    g, tree, assign, bundles, transitions, cfg = FIX
    for b in bundles:
        vis = set(b.node_ids)
        for r in b.rm.routes:
            for vid in r.chain[1:-1]:
                nid = b.rm.mesh.vertices[vid].node_id
                assert nid is None or nid not in vis or nid in r.edge


def test_hidden_tracks_demoted_nodes():
    g, tree, assign, bundles, transitions, cfg = FIX
    for b in bundles[:-1]:
        for vid in b.hidden:
            vert = b.rm.mesh.vertices[vid]
            assert vert.kind is not M.VertexKind.NODE


def test_simplify_never_lengthens_routes():
    g, tree, assign, bundles, transitions, cfg = FIX
    bottom = {r.edge: r.length for r in bundles[-1].rm.routes}
    for b in bundles[:-1]:
        for r in b.rm.routes:
            assert r.length <= bottom[r.edge] + 1e-9


def test_bundle_meshes_stay_planar():
    g, tree, assign, bundles, transitions, cfg = FIX
    for b in bundles:
        assert b.rm.mesh.planarity_violations() == []


def test_transition_controls_equal_length():
    g, tree, assign, bundles, transitions, cfg = FIX
    for ts in transitions:
        assert set(ts.pairs) == set(
            bundles[ts.src_level - 1].edges)
        for pa, pb in ts.pairs.values():
            assert len(pa) == len(pb) >= 2


def test_transition_exact_at_ends():
    g, tree, assign, bundles, transitions, cfg = FIX
    for ts in transitions:
        for edge, pair in ts.pairs.items():
            assert L.interpolate_frame(pair, 0.0) == pair[0]
            assert L.interpolate_frame(pair, 1.0) == pair[1]


def test_transition_endpoints_fixed_for_all_t():
    g, tree, assign, bundles, transitions, cfg = FIX
    for ts in transitions:
        for edge, pair in ts.pairs.items():
            u, v = edge
            pu, pv = g.node(u).pos, g.node(v).pos
            for t in (0.0, 0.25, 0.5, 0.75, 1.0):
                frame = L.interpolate_frame(pair, t)
                assert frame[0] == pu
                assert frame[-1] == pv


def test_straighten_hidden_junction():
    # an explicit bend through a node that disappears at the coarse level
    # must flatten to the direct rail
    from graphatlas.graph import validate
    g = validate([("a", 0.0, 0.0), ("b", 5.0, 0.9), ("c", 10.0, 0.2)],
                 [("a", "b"), ("b", "c"), ("a", "c")])
    mesh = M.Mesh(M._points_rect([nd.pos for nd in g.nodes]))
    for nd in g.nodes:
        mesh.add_vertex(nd.id, nd.pos, M.VertexKind.NODE, nd.id)
    mesh.add_edge("a", "b")
    mesh.add_edge("b", "c")
    rm = R.RoutedMesh(mesh, [
        R.Route(("a", "b"), ["a", "b"], 0.0),
        R.Route(("b", "c"), ["b", "c"], 0.0),
        R.Route(("a", "c"), ["a", "b", "c"], 0.0),
    ], {})
    for r in rm.routes:
        r.recompute_length(mesh)
    rm.recount_usage()
    cfg = R.ModConfig(alpha=30.0, beta=0.05, thin_width=0.1,
                      median_iters=1, port_radius=0.05)
    bundle = L.LevelBundle(2, ["a", "b", "c"],
                           [("a", "b"), ("b", "c"), ("a", "c")], rm)
    derived = L.derive_level_mesh(bundle, (["a", "c"], [("a", "c")]))
    assert derived.hidden == {"b"}
    out = L.simplify_routes(derived, cfg)
    assert [r.chain for r in out.rm.routes] == [["a", "c"]]
    assert out.rm.routes[0].length == pytest.approx(
        polyline_length([Point(0.0, 0.0), Point(10.0, 0.2)]))


def test_tile_metrics_counts():
    g, tree, assign, bundles, transitions, cfg = FIX
    for b in bundles:
        tiles = L.tile_metrics(b, tree)
        z = min(b.level, tree.height)
        assert len(tiles) == len(tree.by_level(z))
        assert sum(t["visible"] for t in tiles) == len(b.node_ids)


def test_viewport_maxima_bounds():
    g, tree, assign, bundles, transitions, cfg = FIX
    for b in bundles:
        tiles = L.tile_metrics(b, tree)
        vm = L.viewport_maxima(b, tree)
        assert vm >= max(t["visible"] for t in tiles)
        assert vm <= len(b.node_ids)
