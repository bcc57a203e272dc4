import math

import pytest

from graphatlas import mesh as M
from graphatlas import routing as R
from graphatlas.geometry import Point, dist_e

from conftest import random_graph


def build_routed(seed=0, n=8, m=12):
    g = random_graph(n, m, seed)
    mesh = M.build_mesh_sim([nd.pos for nd in g.nodes],
                            node_ids=[nd.id for nd in g.nodes])
    cfg = R.default_config(mesh, g)
    detoured = R.add_detours(mesh, g, cfg.port_radius)
    cfg = R.default_config(detoured, g)
    rm = R.prune(R.route_edges(detoured, g))
    return g, rm, cfg


def test_add_detours_octagon_ports():
    g = random_graph(6, 8, 3)
    mesh = M.build_mesh_sim([nd.pos for nd in g.nodes],
                            node_ids=[nd.id for nd in g.nodes])
    r = R.fit_port_radius(mesh, g)
    out = R.add_detours(mesh, g, r)
    for nd in g.nodes:
        ring = [v for v in out.vertices.values()
                if v.kind is not R.VertexKind.NODE
                and abs(dist_e(v.pos, nd.pos) - r) <= 1e-9 * r]
        assert len(ring) == 8
        # ring closes: consecutive corners joined by rails
        ids = sorted(v.id for v in ring)
        ring_edges = sum(1 for a in ids for b in ids
                         if a < b and out.has_edge(a, b))
        assert ring_edges == 8
    assert out.planarity_violations() == []


def test_add_detours_rejects_oversized_radius():
    g = random_graph(5, 6, 4)
    mesh = M.build_mesh_sim([nd.pos for nd in g.nodes],
                            node_ids=[nd.id for nd in g.nodes])
    with pytest.raises(R.PortRadiusError):
        R.add_detours(mesh, g, 1e9)


def test_route_edges_covers_all_edges():
    g, rm, _ = build_routed()
    assert sorted(r.edge for r in rm.routes) == sorted(g.edges)
    R.check_routes(rm, g)


def test_route_chains_are_mesh_walks():
    g, rm, _ = build_routed(seed=1)
    for r in rm.routes:
        for u, v in zip(r.chain, r.chain[1:]):
            assert rm.mesh.has_edge(u, v)
        assert rm.mesh.vertices[r.chain[0]].node_id == r.edge[0]
        assert rm.mesh.vertices[r.chain[-1]].node_id == r.edge[1]


def test_prune_drops_unused_rails():
    g, rm, _ = build_routed(seed=2)
    used = set()
    for r in rm.routes:
        for u, v in zip(r.chain, r.chain[1:]):
            used.add((min(u, v), max(u, v)))
    assert set(rm.mesh.edges()) == used


def test_total_ink_counts_shared_rails_once():
    g, rm, _ = build_routed(seed=2)
    by_hand = sum(rm.mesh.edge_length(u, v) for u, v in rm.mesh.edges()
                  if rm.usage.get((min(u, v), max(u, v)), 0) > 0)
    assert R.total_ink(rm) == pytest.approx(by_hand)


def test_refine_faces_does_not_increase_ink():
    g, rm, cfg = build_routed(seed=5)
    before = R.total_ink(rm)
    out = R.refine_faces(rm, cfg)
    R.check_routes(out, g)
    assert R.total_ink(out) <= before + 1e-9


@pytest.mark.parametrize("passes", [
    (R.median_pass,), (R.shortcut_pass,), (R.median_pass, R.shortcut_pass)])
def test_modification_passes_keep_invariants(passes):
    g, rm, cfg = build_routed(seed=6)
    rm = R.refine_faces(rm, cfg)
    before = R.total_ink(rm)
    for p in passes:
        rm = p(rm, cfg)
        R.check_routes(rm, g)
        assert rm.mesh.planarity_violations() == []
        after = R.total_ink(rm)
        assert after <= before + 1e-9
        before = after


def test_angle_constraint_after_passes():
    g, rm, cfg = build_routed(seed=7)
    rm = R.shortcut_pass(R.median_pass(R.refine_faces(rm, cfg), cfg), cfg)
    for vid in rm.mesh.vertices:
        if rm.mesh.degree(vid) >= 2:
            assert R.min_incident_angle(rm.mesh, vid) >= cfg.alpha - 1e-6


def test_enumerate_faces_square():
    mesh = M.Mesh(M._points_rect([Point(0, 0), Point(1, 1)]))
    for vid, p in [("a", Point(0, 0)), ("b", Point(1, 0)),
                   ("c", Point(1, 1)), ("d", Point(0, 1))]:
        mesh.add_vertex(vid, p, M.VertexKind.JUNCTION)
    for u, v in [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]:
        mesh.add_edge(u, v)
    faces = R.enumerate_faces(mesh)
    assert len(faces) == 1
    assert sorted(faces[0]) == ["a", "b", "c", "d"]
    assert R.face_width(mesh, faces[0]) == pytest.approx(1.0)


def test_default_config_scales():
    g, rm, cfg = build_routed(seed=8)
    dmin = min(dist_e(a.pos, b.pos)
               for i, a in enumerate(g.nodes)
               for b in g.nodes[i + 1:])
    assert cfg.alpha == 45.0
    assert 0 < cfg.beta <= 0.25 * dmin + 1e-12
    assert 0 < cfg.port_radius <= 0.2 * dmin + 1e-12


def test_modconfig_validation():
    with pytest.raises(ValueError):
        R.ModConfig(alpha=-1, beta=0.1, thin_width=0.1, median_iters=1,
                    port_radius=0.1)
    with pytest.raises(ValueError):
        R.ModConfig(alpha=45, beta=-0.1, thin_width=0.1, median_iters=1,
                    port_radius=0.1)
