import numpy as np
import pytest

from netpp.envelope import PiecewiseLinearFn, distance_profile, profile_params


def test_plf_validation():
    with pytest.raises(ValueError):
        PiecewiseLinearFn([0.0], [1.0])
    with pytest.raises(ValueError):
        PiecewiseLinearFn([0.0, 2.0, 1.0], [0, 0, 0])


def test_plf_eval_and_domain():
    f = PiecewiseLinearFn([0.0, 1.0, 2.0], [0.0, 1.0, 0.0])
    assert f(0.5) == pytest.approx(0.5)
    assert f(1.5) == pytest.approx(0.5)
    assert f.min_value() == 0.0
    np.testing.assert_allclose(f([0.0, 1.0, 2.0]), [0.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        f(2.5)


def test_profile_params_on_and_off_edge(path_graph):
    g = path_graph
    p = g.point("e1", 0.4)
    a, b, s = profile_params(g, "e1", p)
    assert (a, b, s) == pytest.approx((0.4, 0.7, 0.4))
    a, b, s = profile_params(g, "e2", p)
    assert (a, b) == pytest.approx((0.7, 2.7))
    assert np.isnan(s)


def test_profile_matches_distance(detour_triangle):
    g = detour_triangle
    x = g.point("long", 9.0)
    prof = distance_profile(g, "long", x)
    for t in np.linspace(0.0, 10.0, 41):
        assert prof(t) == pytest.approx(g.distance(g.point("long", t), x),
                                        abs=1e-12)


def test_profile_self_minimum(isolated_edge):
    prof = distance_profile(isolated_edge, "e", isolated_edge.point("e", 1.5))
    assert prof.min_value() == pytest.approx(0.0)
    assert prof(1.5) == pytest.approx(0.0)
