"""Piecewise-linear distance profiles along single edges."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from netpp import kernels
from netpp.geometry import MetricGraph, NetworkPoint

__all__ = ["PiecewiseLinearFn", "profile_params", "distance_profile"]


class PiecewiseLinearFn:
    """Continuous piecewise-linear function on ``[0, L]``.

    Stored as sorted breakpoints with values; evaluation interpolates
    linearly.  Profiles built from network distances have segment slopes
    in {-1, 0, +1}.
    """

    __slots__ = ("xs", "ys")

    def __init__(self, xs: Sequence[float], ys: Sequence[float]):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ValueError("need matching 1-d breakpoint and value arrays")
        if np.any(np.diff(xs) < 0):
            raise ValueError("breakpoints must be sorted")
        self.xs = xs
        self.ys = ys

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])

    def __call__(self, t):
        lo, hi = self.domain
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < lo - 1e-12) or np.any(t_arr > hi + 1e-12):
            raise ValueError(f"argument outside domain [{lo}, {hi}]")
        out = np.interp(t_arr, self.xs, self.ys)
        return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out

    def min_value(self) -> float:
        return float(self.ys.min())


def profile_params(g: MetricGraph, edge_id: str, x: NetworkPoint) -> tuple[float, float, float]:
    """Parameters ``(a, b, s)`` of the distance profile of ``x`` on an edge.

    ``a``/``b`` are distances from the edge endpoints to ``x``; ``s`` is
    the offset of ``x`` when it lies on this very edge, NaN otherwise.
    The profile is ``t -> min(a + t, b + (L - t), |t - s|)``.
    """
    e = g.edge(edge_id)
    a = g.distance(g.vertex_point(e.u), x)
    b = g.distance(g.vertex_point(e.v), x)
    s = x.t if (not x.is_vertex and x.id == edge_id) else math.nan
    return a, b, s


def distance_profile(g: MetricGraph, edge_id: str, x: NetworkPoint) -> PiecewiseLinearFn:
    """The function ``t -> distance((edge_id, t), x)`` on ``[0, L]``."""
    g.check_point(x)
    e = g.edge(edge_id)
    a, b, s = profile_params(g, edge_id, x)
    av, bv, sv = np.array([a]), np.array([b]), np.array([s])
    ts = kernels.edge_candidates(av, bv, sv, e.length)
    ys = kernels.profile_values(av, bv, sv, e.length, ts)[0]
    return PiecewiseLinearFn(ts, ys)
