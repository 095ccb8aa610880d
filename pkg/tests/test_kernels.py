import math
import os
import subprocess
import sys

import numpy as np
import pytest

from netpp import kernels
from netpp.kernels import envelope_py

compiled = pytest.importorskip(
    "netpp.kernels._envelope", reason="compiled kernels not built")


def random_profiles(rng, n, ell):
    av = rng.uniform(0.0, 3.0, n)
    bv = rng.uniform(0.0, 3.0, n)
    sv = np.where(rng.random(n) < 0.5, rng.uniform(0.0, ell, n), math.nan)
    return av, bv, sv


@pytest.mark.parametrize("seed", range(10))
def test_backend_parity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    ell = float(rng.uniform(0.5, 4.0))
    av, bv, sv = random_profiles(rng, n, ell)

    ts_py = envelope_py.edge_candidates(av, bv, sv, ell)
    ts_c = np.asarray(compiled.edge_candidates(av, bv, sv, ell))
    np.testing.assert_allclose(ts_c, ts_py, atol=1e-12)

    f_py = envelope_py.profile_values(av, bv, sv, ell, ts_py)
    f_c = np.asarray(compiled.profile_values(av, bv, sv, ell, ts_py))
    np.testing.assert_allclose(f_c, f_py, atol=1e-12)

    m_py = envelope_py.edge_comin_matrix(av, bv, sv, ell, 1e-9)
    m_c = np.asarray(compiled.edge_comin_matrix(av, bv, sv, ell, 1e-9))
    np.testing.assert_array_equal(m_c, m_py)


def test_candidates_cover_breakpoints():
    av = np.array([0.5, 2.0])
    bv = np.array([1.5, 0.0])
    sv = np.array([math.nan, 1.2])
    ts = envelope_py.edge_candidates(av, bv, sv, 2.0)
    assert ts[0] == 0.0 and ts[-1] == 2.0
    assert np.all(np.diff(ts) >= 0)
    assert any(abs(t - 1.2) < 1e-12 for t in ts)  # the tent apex


def test_env_var_selects_python_backend():
    env = dict(os.environ, NETPP_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from netpp import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


def test_default_backend_is_compiled_when_available():
    if os.environ.get("NETPP_PURE_PYTHON"):
        assert kernels.BACKEND == "python"
    else:
        assert kernels.BACKEND == "compiled"
