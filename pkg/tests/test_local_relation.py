import math

import numpy as np
import pytest

from netpp.lab import random_graph, triangle_graph, triangle_midpoints
from netpp.voronoi import (
    EdgeAdjacency, carrier, delaunay_relation, local_delaunay_relation,
    relation_of_kind)
from conftest import config_on


def test_edge_adjacency(star3):
    adj = EdgeAdjacency(star3)
    assert adj.related(("edge", "s1"), ("edge", "s2"))
    assert adj.shared_vertex("s1", "s2") == "c"
    assert adj.related(("vertex", "c"), ("edge", "s3"))
    assert not adj.related(("vertex", "a"), ("edge", "s2"))
    assert adj.edge_between("c", "a") == "s1"
    assert adj.edge_between("a", "b") is None
    assert adj.related(("edge", "s1"), ("edge", "s1"))


def test_carrier(star3):
    assert carrier(star3.vertex_point("a")) == ("vertex", "a")
    assert carrier(star3.point("s1", 0.3)) == ("edge", "s1")


def test_local_consecutive_on_single_edge(isolated_edge):
    x = config_on(isolated_edge, ("e", 1.0), ("e", 2.0), ("e", 3.0))
    r = local_delaunay_relation(isolated_edge, x)
    assert r.pairs() == [(0, 1), (1, 2)]
    # on a single edge the local and global relations agree
    assert r.pairs() == delaunay_relation(isolated_edge, x).pairs()


def test_local_vertex_nearest_across_shared_vertex(star3):
    # nearest points to the centre on adjacent spokes are related; the far
    # point on s1 is shielded by the near one
    x = config_on(star3, ("s1", 0.2), ("s1", 0.8), ("s2", 0.5))
    r = local_delaunay_relation(star3, x)
    assert r.related(0, 1)       # consecutive on s1
    assert r.related(0, 2)       # both nearest to the shared centre
    assert not r.related(1, 2)   # shielded


def test_local_requires_adjacent_carriers():
    rng = np.random.default_rng(8)
    g = random_graph(rng, 6, 2)
    x = g.sample_poisson(1.5, rng)
    if len(x) < 2:
        pytest.skip("empty draw")
    r = local_delaunay_relation(g, x)
    adj = EdgeAdjacency(g)
    for i, j in r.pairs():
        assert adj.related(carrier(x[i]), carrier(x[j]))


def test_local_triangle_midpoints_form_clique():
    g = triangle_graph()
    z = triangle_midpoints(g)
    r = local_delaunay_relation(g, z)
    assert r.is_clique([0, 1, 2])
    # adding a point between a midpoint and the shared vertex breaks exactly
    # the pair around that vertex
    zu = z.add(g.point("AB", 0.5))
    ru = local_delaunay_relation(g, zu)
    iu = zu.index(g.point("AB", 0.5))
    im_ab = zu.index(g.point("AB", 1.0))
    im_ac = zu.index(g.point("AC", math.sqrt(2) / 2))
    im_cb = zu.index(g.point("CB", math.sqrt(2) / 2))
    assert not ru.related(im_ab, im_ac)
    assert ru.related(iu, im_ab) and ru.related(iu, im_ac)
    assert not ru.related(iu, im_cb)
    assert ru.related(im_ab, im_cb) and ru.related(im_ac, im_cb)


def test_vertex_points_related_through_joining_edge(path_graph):
    x = config_on(path_graph, ("e1", 0.5))
    x = x.add(path_graph.vertex_point("a")).add(path_graph.vertex_point("b"))
    r = local_delaunay_relation(path_graph, x)
    ia = x.index(path_graph.vertex_point("a"))
    ib = x.index(path_graph.vertex_point("b"))
    ip = x.index(path_graph.point("e1", 0.5))
    # the interior point separates the two endpoint vertices on e1
    assert r.related(ia, ip) and r.related(ib, ip)
    assert not r.related(ia, ib)


def test_relation_of_kind_dispatch(isolated_edge):
    x = config_on(isolated_edge, ("e", 1.0), ("e", 3.0))
    assert relation_of_kind("delaunay", isolated_edge, x).kind == "delaunay"
    assert relation_of_kind("local", isolated_edge, x).kind == "local-delaunay"
    assert relation_of_kind(
        "local-delaunay", isolated_edge, x).kind == "local-delaunay"
    with pytest.raises(ValueError):
        relation_of_kind("nope", isolated_edge, x)
