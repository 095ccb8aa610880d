"""Numpy implementation of the per-edge distance-envelope kernels.

Every configuration point restricted to one edge yields a piecewise-linear
distance profile ``t -> min(a + t, b + (L - t), |t - s|)`` where ``a`` and
``b`` are the distances from the edge endpoints to the point and the tent
term is present only for points sitting on the edge itself.  All Voronoi
computations reduce to comparing a stack of such profiles, which is why
these three functions are the hot kernels of the package.
"""

from __future__ import annotations

import numpy as np

__all__ = ["edge_candidates", "profile_values", "edge_comin_matrix"]


def edge_candidates(av, bv, sv, ell):
    """Offsets where envelope structure can change on one edge.

    Includes the edge endpoints, the tent apices, and every intersection
    of a rising piece with a falling piece across all profiles.  Any point
    where two profiles are equal, or where the argmin set changes, lies in
    this set; in between, all profiles are linear and non-crossing.

    Parameters are arrays over the configuration points: ``av``/``bv`` the
    endpoint distances, ``sv`` the on-edge offset (NaN if the point is not
    on this edge), and ``ell`` the edge length.  Returns a sorted float
    array within ``[0, ell]``.
    """
    av = np.asarray(av, dtype=float)
    bv = np.asarray(bv, dtype=float)
    sv = np.asarray(sv, dtype=float)
    on_edge = np.isfinite(sv)
    # rising pieces t + c: c in av and -s; falling pieces -t + c: c in bv + ell and s
    pos = np.concatenate([av, -sv[on_edge]])
    neg = np.concatenate([bv + ell, sv[on_edge]])
    cross = (neg[None, :] - pos[:, None]) / 2.0
    cand = np.concatenate([[0.0, ell], sv[on_edge], cross.ravel()])
    cand = cand[(cand >= 0.0) & (cand <= ell)]
    return np.unique(cand)


def profile_values(av, bv, sv, ell, ts):
    """Evaluate every profile at the given offsets; returns (n, len(ts))."""
    av = np.asarray(av, dtype=float)
    bv = np.asarray(bv, dtype=float)
    sv = np.asarray(sv, dtype=float)
    ts = np.asarray(ts, dtype=float)
    f = np.minimum(av[:, None] + ts[None, :], (bv + ell)[:, None] - ts[None, :])
    on_edge = np.isfinite(sv)
    if np.any(on_edge):
        tent = np.abs(ts[None, :] - sv[on_edge, None])
        f[on_edge] = np.minimum(f[on_edge], tent)
    return f


def edge_comin_matrix(av, bv, sv, ell, eps):
    """Boolean (n, n) matrix: profiles i and j attain the pointwise minimum
    simultaneously somewhere on the closed edge (ties within ``eps``)."""
    ts = edge_candidates(av, bv, sv, ell)
    f = profile_values(av, bv, sv, ell, ts)
    if f.shape[0] == 0:
        return np.zeros((0, 0), dtype=bool)
    comin = f <= f.min(axis=0)[None, :] + eps
    co = comin.astype(np.uint8)
    return (co @ co.T) > 0
