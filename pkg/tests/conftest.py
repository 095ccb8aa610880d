import json
import math

import pytest

from netpp.geometry import Configuration, Edge, MetricGraph


@pytest.fixture
def path_graph():
    """Two edges in a row: a -(1.1)- b -(2.0)- c."""
    return MetricGraph(
        ["a", "b", "c"],
        [Edge("e1", "a", "b", 1.1), Edge("e2", "b", "c", 2.0)],
    )


@pytest.fixture
def detour_triangle():
    """Triangle with one long edge (10) and a short bypass (1 + 1)."""
    return MetricGraph(
        ["a", "b", "c"],
        [Edge("long", "a", "b", 10.0),
         Edge("s1", "a", "c", 1.0),
         Edge("s2", "c", "b", 1.0)],
    )


@pytest.fixture
def isolated_edge():
    return MetricGraph(["a", "b"], [Edge("e", "a", "b", 4.0)])


@pytest.fixture
def star3():
    """Three unit spokes meeting at a centre."""
    return MetricGraph(
        ["c", "a", "b", "d"],
        [Edge("s1", "c", "a", 1.0),
         Edge("s2", "c", "b", 1.0),
         Edge("s3", "c", "d", 1.0)],
    )


@pytest.fixture
def triangle_files(tmp_path):
    """Equilateral-ish triangle graph + midpoint configuration on disk."""
    s = math.sqrt(2.0)
    graph = {
        "vertices": [{"id": "A", "xy": [-1, 0]}, {"id": "B", "xy": [1, 0]},
                     {"id": "C", "xy": [0, 1]}],
        "edges": [{"id": "AB", "ends": ["A", "B"], "length": 2.0},
                  {"id": "AC", "ends": ["A", "C"], "length": s},
                  {"id": "CB", "ends": ["C", "B"], "length": s}],
    }
    config = [{"edge": "AB", "t": 1.0},
              {"edge": "AC", "t": s / 2}, {"edge": "CB", "t": s / 2}]
    gp = tmp_path / "tri.json"
    cp = tmp_path / "mid.json"
    gp.write_text(json.dumps(graph))
    cp.write_text(json.dumps(config))
    return gp, cp


def config_on(g, *specs) -> Configuration:
    return Configuration([g.point(eid, t) for eid, t in specs])
