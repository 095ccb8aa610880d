"""Benchmark the compiled envelope kernels against the numpy fallback.

The kernels dominate the cost of building neighbour relations, which in
turn dominates the sampler and the randomized audits.  Run with::

    python3 benchmarks/bench_envelope.py [--sizes 4,16,64] [--repeats 200]
"""

import argparse
import math
import time

import numpy as np

from netpp.kernels import envelope_py

try:
    from netpp.kernels import _envelope as compiled
except ImportError:
    compiled = None


def make_inputs(rng, n, ell):
    av = rng.uniform(0.0, 3.0, n)
    bv = rng.uniform(0.0, 3.0, n)
    sv = np.where(rng.random(n) < 0.3, rng.uniform(0.0, ell, n), math.nan)
    return av, bv, sv


def time_backend(mod, inputs, ell, eps, repeats):
    av, bv, sv = inputs
    start = time.perf_counter()
    for _ in range(repeats):
        ts = mod.edge_candidates(av, bv, sv, ell)
        mod.profile_values(av, bv, sv, ell, np.asarray(ts))
        mod.edge_comin_matrix(av, bv, sv, ell, eps)
    return (time.perf_counter() - start) / repeats


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="4,16,64",
                    help="comma-separated configuration sizes per edge")
    ap.add_argument("--repeats", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    ell, eps = 2.0, 1e-9
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'n':>6} {'python (us)':>14} {'compiled (us)':>14} {'speedup':>9}")
    for n in sizes:
        inputs = make_inputs(rng, n, ell)
        t_py = time_backend(envelope_py, inputs, ell, eps, args.repeats)
        if compiled is None:
            print(f"{n:>6} {t_py * 1e6:>14.1f} {'n/a':>14} {'n/a':>9}")
            continue
        t_c = time_backend(compiled, inputs, ell, eps, args.repeats)
        print(f"{n:>6} {t_py * 1e6:>14.1f} {t_c * 1e6:>14.1f} "
              f"{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
