import math

import numpy as np
import pytest

from netpp.geometry import Configuration, Edge, GraphError, MetricGraph
from netpp.lab import (
    brute_force_distance, check_c1, check_c2, check_hereditary,
    compare_relations, count_simple_paths, grid_voronoi_oracle, random_graph,
    random_tree, reproduce_triangle_counterexample, sample_general_position)
from netpp.voronoi import delaunay_relation
from conftest import config_on


def test_brute_force_path_graph(path_graph):
    a = path_graph.vertex_point("a")
    b = path_graph.vertex_point("b")
    assert brute_force_distance(path_graph, a, b) == pytest.approx(1.1)
    assert brute_force_distance(path_graph, a, a) == 0.0


def test_brute_force_detour(detour_triangle):
    p = detour_triangle.point("long", 1.0)
    q = detour_triangle.point("long", 9.0)
    assert brute_force_distance(detour_triangle, p, q) == pytest.approx(4.0)
    # two simple routes: direct along the edge, and around the bypass
    assert count_simple_paths(detour_triangle, p, q) == 2


def test_brute_force_refuses_large_graph():
    rng = np.random.default_rng(0)
    g = random_tree(rng, 15)
    p, q = g.sample_uniform(rng), g.sample_uniform(rng)
    with pytest.raises(GraphError, match="oracle"):
        brute_force_distance(g, p, q)


def test_unique_path_on_trees():
    rng = np.random.default_rng(1)
    for _ in range(20):
        g = random_tree(rng, int(rng.integers(2, 8)))
        p, q = g.sample_uniform(rng), g.sample_uniform(rng)
        if p == q:
            continue
        assert count_simple_paths(g, p, q) == 1


def test_brute_force_matches_distance_on_cycles():
    rng = np.random.default_rng(2)
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(4, 7)), 2)
        p, q = g.sample_uniform(rng), g.sample_uniform(rng)
        assert brute_force_distance(g, p, q) == pytest.approx(
            g.distance(p, q), abs=1e-9)


def test_grid_oracle_examples(isolated_edge, star3):
    x = config_on(isolated_edge, ("e", 1.0), ("e", 2.0), ("e", 3.0))
    assert grid_voronoi_oracle(isolated_edge, x, 1e-3).pairs() == [(0, 1), (1, 2)]
    single = config_on(isolated_edge, ("e", 2.0))
    r = grid_voronoi_oracle(isolated_edge, single, 1e-3)
    assert r.related(0, 0) and r.pairs() == []
    xs = config_on(star3, ("s1", 0.2), ("s2", 0.5), ("s3", 0.9))
    assert grid_voronoi_oracle(star3, xs, 1e-3).pairs() == [(0, 1), (0, 2)]
    with pytest.raises(ValueError):
        grid_voronoi_oracle(star3, xs, 0.0)


def test_compare_relations_agrees():
    rng = np.random.default_rng(3)
    g = random_tree(rng, 6)
    x = sample_general_position(g, 1.0, rng, min_points=3)
    exact = delaunay_relation(g, x)
    oracle = grid_voronoi_oracle(g, x, 1e-3)
    res = compare_relations(g, x, exact, oracle, 1e-3)
    assert res["agree"]


def test_check_c1_empty_passes(star3):
    rep = check_c1(star3, "delaunay", Configuration(), star3.point("s1", 0.5))
    assert rep.verdict == "pass"


def test_check_c1_rejects_member(star3):
    x = config_on(star3, ("s1", 0.5))
    with pytest.raises(ValueError):
        check_c1(star3, "delaunay", x, star3.point("s1", 0.5))


def test_check_c2_discards_neighbours(isolated_edge):
    z = config_on(isolated_edge, ("e", 0.5))
    u = isolated_edge.point("e", 2.0)
    v = isolated_edge.point("e", 2.5)
    rep = check_c2(isolated_edge, "delaunay", z, u, v)
    assert rep.verdict == "discarded"


def test_check_hereditary_passes():
    rng = np.random.default_rng(4)
    g = random_tree(rng, 7)
    x = g.sample_poisson(1.5, rng)
    rep = check_hereditary(g, x, rng, chains=200)
    assert rep.verdict == "pass"


def test_random_tree_structure():
    rng = np.random.default_rng(5)
    g1 = random_tree(rng, 1)
    assert len(g1.vertex_ids) == 1 and g1.edge_ids == []
    g5 = random_tree(rng, 5)
    assert len(g5.edge_ids) == 4 and g5.is_tree()
    for e in g5.edges:
        assert 0.5 <= e.length <= 2.0
    with pytest.raises(ValueError):
        random_tree(rng, 0)


def test_random_graph_structure():
    rng = np.random.default_rng(6)
    g = random_graph(rng, 5, 2)
    assert len(g.edge_ids) == 6 and not g.is_tree()
    with pytest.raises(ValueError):
        random_graph(rng, 3, 10)


def test_triangle_counterexample_reports():
    ce = reproduce_triangle_counterexample()
    assert ce.c1.verdict == "violation"
    assert ce.c2.verdict == "violation"
    assert ce.c1.details["y"] == [0, 1, 2]
    # the C2 identity fails as 0 + 0 on the left against 1 + 0 on the right
    assert ce.c2.details["lhs"] == 0 and ce.c2.details["rhs"] == 1
    assert ce.c1.instance is not None  # violations are replayable
    # the same instance is unproblematic for the local relation
    assert check_c1(ce.graph, "local-delaunay", ce.z, ce.u).verdict == "pass"
    assert check_c2(
        ce.graph, "local-delaunay", ce.z, ce.u, ce.v).verdict == "pass"


def test_sample_general_position_certificate(star3):
    rng = np.random.default_rng(7)
    x = sample_general_position(star3, 1.0, rng, min_points=2)
    from netpp.voronoi import in_general_position
    ok, _ = in_general_position(star3, x)
    assert ok and len(x) >= 2
