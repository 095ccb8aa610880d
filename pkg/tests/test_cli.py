import json

import pytest
from click.testing import CliRunner

from netpp.cli import main, parse_point
from netpp.geometry import Edge, GraphError, MetricGraph


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


def test_parse_point():
    g = MetricGraph(["a", "b"], [Edge("e", "a", "b", 2.0)])
    assert parse_point(g, "v:a").is_vertex
    p = parse_point(g, "e:e:0.5")
    assert p.id == "e" and p.t == 0.5
    assert parse_point(g, "e:e:0").is_vertex  # canonicalized endpoint
    with pytest.raises(GraphError):
        parse_point(g, "nonsense")


def test_validate_ok(runner, triangle_files):
    gp, _ = triangle_files
    res = invoke(runner, "validate", str(gp))
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["edges"] == 3 and not out["tree"]
    assert out["total_length"] == pytest.approx(4.8284, abs=1e-3)


def test_validate_loop_exits_2(runner, tmp_path):
    bad = tmp_path / "loop.json"
    bad.write_text(json.dumps({
        "vertices": [{"id": "a"}],
        "edges": [{"id": "e", "ends": ["a", "a"], "length": 1.0}]}))
    res = runner.invoke(main, ["validate", str(bad)])
    assert res.exit_code == 2
    assert "loop forbidden" in json.loads(res.output)["error"]


def test_validate_disconnected_exits_2(runner, tmp_path):
    bad = tmp_path / "disc.json"
    bad.write_text(json.dumps({
        "vertices": [{"id": "a"}, {"id": "b"}, {"id": "c"}, {"id": "d"}],
        "edges": [{"id": "e1", "ends": ["a", "b"], "length": 1.0},
                  {"id": "e2", "ends": ["c", "d"], "length": 1.0}]}))
    res = runner.invoke(main, ["validate", str(bad)])
    assert res.exit_code == 2
    assert "disconnected" in json.loads(res.output)["error"]


def test_dist_detour(runner, tmp_path):
    gp = tmp_path / "g.json"
    gp.write_text(json.dumps({
        "vertices": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
        "edges": [{"id": "long", "ends": ["a", "b"], "length": 10.0},
                  {"id": "s1", "ends": ["a", "c"], "length": 1.0},
                  {"id": "s2", "ends": ["c", "b"], "length": 1.0}]}))
    res = invoke(runner, "dist", str(gp), "e:long:1", "e:long:9")
    assert res.exit_code == 0
    assert json.loads(res.output)["distance"] == pytest.approx(4.0)
    res = invoke(runner, "dist", str(gp), "v:a", "v:a")
    assert json.loads(res.output)["distance"] == 0.0
    res = runner.invoke(main, ["dist", str(gp), "v:zzz", "v:a"])
    assert res.exit_code == 2


def test_path_command(runner, triangle_files):
    gp, _ = triangle_files
    res = invoke(runner, "path", str(gp), "v:A", "e:CB:0.2")
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["weight"] == pytest.approx(2.0 ** 0.5 + 0.2)
    assert out["segments"][0]["edge"] == "AC"


def test_neighbors_and_formats(runner, triangle_files):
    gp, cp = triangle_files
    res = invoke(runner, "neighbors", str(gp), str(cp))
    assert json.loads(res.output)["pairs"] == [[0, 1], [0, 2], [1, 2]]
    res = invoke(runner, "--format", "tsv", "neighbors", str(gp), str(cp))
    assert res.output.splitlines()[0] == "i\tj"
    res = invoke(runner, "neighbors", str(gp), str(cp), "--kind", "local")
    assert json.loads(res.output)["kind"] == "local-delaunay"


def test_voronoi_command(runner, triangle_files):
    gp, cp = triangle_files
    res = invoke(runner, "voronoi", str(gp), str(cp))
    out = json.loads(res.output)
    assert set(out["edges"]) == {"AB", "AC", "CB"}
    assert all(len(v) >= 1 for v in out["vertices"].values())


def test_density_and_papangelou(runner, triangle_files, tmp_path):
    gp, cp = triangle_files
    mp = tmp_path / "m.json"
    mp.write_text(json.dumps({"beta": 2.0, "pair": {
        "family": "constant", "params": {"c": 1.0}}, "relation": "delaunay"}))
    res = invoke(runner, "density", str(gp), str(cp), str(mp))
    import math
    assert json.loads(res.output)["log_density"] == pytest.approx(
        3 * math.log(2.0))
    res = invoke(runner, "papangelou", str(gp), str(cp), str(mp), "e:AB:0.5")
    assert json.loads(res.output)["papangelou"] == pytest.approx(2.0)


def test_sample_deterministic(runner, triangle_files, tmp_path):
    gp, _ = triangle_files
    outputs = []
    for _ in range(2):
        res = invoke(runner, "--seed", "11", "sample", str(gp),
                     "--poisson", "1.0", "--replicates", "5")
        assert res.exit_code == 0
        outputs.append(res.output)
    assert outputs[0] == outputs[1]
    assert len(outputs[0].splitlines()) == 5
    # model mode and poisson mode are mutually exclusive
    mp = tmp_path / "m.json"
    mp.write_text(json.dumps({"beta": 1.0, "pair": {
        "family": "constant", "params": {"c": 1.0}}}))
    res = runner.invoke(main, ["sample", str(gp), "--poisson", "1.0",
                               "--model", str(mp)])
    assert res.exit_code == 2


def test_check_triangle_exit_code(runner):
    res = invoke(runner, "check", "triangle")
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["reproduced"] and out["delaunay"]["c1"] == "violation"
    assert out["local"] == {"c1": "pass", "c2": "pass"}


def test_check_c1_report(runner, tmp_path):
    report = tmp_path / "report.ndjson"
    res = invoke(runner, "--seed", "3", "check", "c1", "--instances", "20",
                 "--report", str(report))
    assert res.exit_code == 0
    assert json.loads(res.output)["violations"] == 0
    lines = report.read_text().splitlines()
    assert len(lines) == 20
    assert all(json.loads(l)["verdict"] == "pass" for l in lines)


def test_export_round_trip(runner, triangle_files, tmp_path):
    gp, cp = triangle_files
    out1 = tmp_path / "o1.json"
    res = invoke(runner, "--out", str(out1), "export", str(gp),
                 "--config", str(cp))
    assert res.exit_code == 0
    doc = json.loads(out1.read_text())
    g2 = tmp_path / "g2.json"
    c2 = tmp_path / "c2.json"
    g2.write_text(json.dumps(doc["graph"]))
    c2.write_text(json.dumps(doc["configuration"]))
    out2 = tmp_path / "o2.json"
    res = invoke(runner, "--out", str(out2), "export", str(g2),
                 "--config", str(c2))
    assert res.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_bad_eps_rejected(runner, triangle_files):
    gp, _ = triangle_files
    res = runner.invoke(main, ["--eps", "-1", "validate", str(gp)])
    assert res.exit_code == 2
