"""Network Voronoi partitions and Delaunay-type neighbour relations.

Two configuration points are Delaunay neighbours when their (closed)
Voronoi cells on the network intersect; a single shared boundary point
suffices.  The local variant restricts the comparison to the one or two
closed edges carrying the pair, combined with the graph's edge adjacency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from netpp import kernels
from netpp.geometry import EPS, Configuration, Edge, MetricGraph, NetworkPoint

__all__ = [
    "Relation",
    "VoronoiPartition",
    "Witness",
    "EdgeAdjacency",
    "voronoi_partition",
    "delaunay_relation",
    "local_delaunay_relation",
    "neighbor_witness",
    "in_general_position",
    "edge_adjacency",
]


@dataclass(frozen=True)
class Relation:
    """Symmetric reflexive adjacency over the points of a configuration."""

    kind: str  # "delaunay" | "local-delaunay"
    configuration: Configuration
    matrix: np.ndarray  # (n, n) bool, symmetric, True diagonal

    def __post_init__(self):
        m = self.matrix
        n = len(self.configuration)
        if m.shape != (n, n):
            raise ValueError("relation matrix shape does not match configuration")
        if n and (not np.array_equal(m, m.T) or not m.diagonal().all()):
            raise ValueError("relation must be symmetric and reflexive")

    def __len__(self) -> int:
        return len(self.configuration)

    def related(self, i: int, j: int) -> bool:
        return bool(self.matrix[i, j])

    def pairs(self) -> list[tuple[int, int]]:
        """Related index pairs with i < j."""
        n = len(self)
        return [(i, j) for i in range(n) for j in range(i + 1, n) if self.matrix[i, j]]

    def neighborhood(self, subset: Iterable[int]) -> set[int]:
        """All indices related to some member of ``subset``."""
        out: set[int] = set()
        for i in subset:
            out.update(np.flatnonzero(self.matrix[i]).tolist())
        return out

    def is_clique(self, subset: Iterable[int]) -> bool:
        idx = list(subset)
        if len(idx) <= 1:
            return True
        return bool(self.matrix[np.ix_(idx, idx)].all())

    def max_clique_size(self) -> int:
        n = len(self)
        if n == 0:
            return 0
        adj = [set(np.flatnonzero(self.matrix[i]).tolist()) - {i} for i in range(n)]
        best = 1

        def expand(r: set[int], p: set[int]):
            nonlocal best
            if not p:
                best = max(best, len(r))
                return
            if len(r) + len(p) <= best:
                return
            pivot = max(p, key=lambda v: len(adj[v] & p))
            for v in list(p - adj[pivot]):
                expand(r | {v}, p & adj[v])
                p.discard(v)

        expand(set(), set(range(n)))
        return best

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": len(self),
            "pairs": [[i, j] for i, j in self.pairs()],
        }


@dataclass(frozen=True)
class Witness:
    """Equidistant point certifying that two cells intersect."""

    point: NetworkPoint
    value: float


@dataclass(frozen=True)
class VoronoiPartition:
    """Per-edge subintervals labelled with the indices attaining the minimum
    distance there, plus the minimizing index sets at the vertices.

    Cells are closed: a boundary offset between differently labelled
    intervals belongs to the cells of both label sets.
    """

    configuration: Configuration
    edge_intervals: dict[str, list[tuple[float, float, frozenset[int]]]]
    vertex_labels: dict[str, frozenset[int]]

    def cell_contains(self, i: int, p: NetworkPoint, tol: float = 1e-12) -> bool:
        """Whether network point ``p`` lies in the (closed) cell of index ``i``."""
        if p.is_vertex:
            return i in self.vertex_labels[p.id]
        for t0, t1, labels in self.edge_intervals[p.id]:
            if t0 - tol <= p.t <= t1 + tol and i in labels:
                return True
        return False

    def to_json(self) -> dict:
        return {
            "edges": {
                eid: [[t0, t1, sorted(labels)] for t0, t1, labels in ivs]
                for eid, ivs in self.edge_intervals.items()
            },
            "vertices": {v: sorted(ls) for v, ls in self.vertex_labels.items()},
        }


# ----------------------------------------------------------------------
# profile assembly
# ----------------------------------------------------------------------

def _vertex_point_distances(g: MetricGraph, x: Configuration) -> dict[str, np.ndarray]:
    """For each vertex, the distances to every configuration point."""
    out: dict[str, np.ndarray] = {}
    for v in g.vertex_ids:
        dv = np.empty(len(x))
        for k, p in enumerate(x):
            if p.is_vertex:
                dv[k] = g.vertex_distance(v, p.id)
            else:
                e = g.edge(p.id)
                dv[k] = min(g.vertex_distance(v, e.u) + p.t,
                            g.vertex_distance(v, e.v) + e.length - p.t)
        out[v] = dv
    return out


def _edge_profiles(g: MetricGraph, x: Configuration,
                   vd: dict[str, np.ndarray], e: Edge):
    av = vd[e.u].copy()
    bv = vd[e.v].copy()
    sv = np.full(len(x), math.nan)
    for k, p in enumerate(x):
        if not p.is_vertex and p.id == e.id:
            sv[k] = p.t
    return av, bv, sv


# ----------------------------------------------------------------------
# operations
# ----------------------------------------------------------------------

def voronoi_partition(g: MetricGraph, x: Configuration, eps: float = EPS) -> VoronoiPartition:
    """Exact lower envelope of the distance profiles, with argmin labels."""
    if len(x) == 0:
        raise ValueError("voronoi_partition requires a nonempty configuration")
    for p in x:
        g.check_point(p)
    vd = _vertex_point_distances(g, x)
    edge_intervals: dict[str, list[tuple[float, float, frozenset[int]]]] = {}
    for e in g.edges:
        av, bv, sv = _edge_profiles(g, x, vd, e)
        ts = kernels.edge_candidates(av, bv, sv, e.length)
        mids = (ts[:-1] + ts[1:]) / 2.0
        fm = kernels.profile_values(av, bv, sv, e.length, mids)
        argmins = fm <= fm.min(axis=0)[None, :] + eps
        intervals: list[tuple[float, float, frozenset[int]]] = []
        for k in range(len(mids)):
            labels = frozenset(np.flatnonzero(argmins[:, k]).tolist())
            if intervals and intervals[-1][2] == labels:
                t0, _, _ = intervals[-1]
                intervals[-1] = (t0, float(ts[k + 1]), labels)
            else:
                intervals.append((float(ts[k]), float(ts[k + 1]), labels))
        edge_intervals[e.id] = intervals
    vertex_labels = {}
    for v, dv in vd.items():
        vertex_labels[v] = frozenset(np.flatnonzero(dv <= dv.min() + eps).tolist())
    return VoronoiPartition(x, edge_intervals, vertex_labels)


def delaunay_relation(g: MetricGraph, x: Configuration, eps: float = EPS) -> Relation:
    """Delaunay relation: cells share at least one point of the network."""
    n = len(x)
    for p in x:
        g.check_point(p)
    matrix = np.eye(n, dtype=bool)
    if n > 1:
        vd = _vertex_point_distances(g, x)
        for e in g.edges:
            av, bv, sv = _edge_profiles(g, x, vd, e)
            matrix |= kernels.edge_comin_matrix(av, bv, sv, e.length, eps)
    return Relation("delaunay", x, matrix)


def neighbor_witness(g: MetricGraph, x: Configuration, i: int, j: int,
                     eps: float = EPS) -> Witness | None:
    """A point equidistant to ``x_i`` and ``x_j`` with no closer configuration
    point, or ``None`` when the pair is not Delaunay-related."""
    if i == j:
        raise ValueError("witness requires distinct indices")
    vd = _vertex_point_distances(g, x)
    for e in g.edges:
        av, bv, sv = _edge_profiles(g, x, vd, e)
        ts = kernels.edge_candidates(av, bv, sv, e.length)
        f = kernels.profile_values(av, bv, sv, e.length, ts)
        lo = f.min(axis=0)
        hit = (f[i] <= lo + eps) & (f[j] <= lo + eps)
        idx = np.flatnonzero(hit)
        if idx.size:
            k = int(idx[0])
            return Witness(g.point(e.id, float(ts[k])), float(lo[k]))
    return None


def in_general_position(g: MetricGraph, x: Configuration, eps: float = EPS):
    """Check that no three points lie on the boundary of one metric ball.

    Solves the triple-equidistance condition exactly over the per-edge
    piecewise-linear profiles.  Returns ``(flag, certificate)``; the
    certificate names an offending triple, the centre and the radius.
    """
    n = len(x)
    if n <= 2:
        return True, None
    vd = _vertex_point_distances(g, x)
    for e in g.edges:
        av, bv, sv = _edge_profiles(g, x, vd, e)
        ts = kernels.edge_candidates(av, bv, sv, e.length)
        f = kernels.profile_values(av, bv, sv, e.length, ts)
        order = np.argsort(f, axis=0)
        fs = np.take_along_axis(f, order, axis=0)
        # any three pairwise-equal values form a sorted window of spread <= eps
        spread = fs[2:, :] - fs[:-2, :]
        rows, cols = np.nonzero(spread <= eps)
        if rows.size:
            r, c = int(rows[0]), int(cols[0])
            triple = tuple(sorted(int(order[r + d, c]) for d in range(3)))
            centre = g.point(e.id, float(ts[c]))
            return False, {
                "triple": triple,
                "centre": centre,
                "radius": float(fs[r, c]),
            }
    return True, None


# ----------------------------------------------------------------------
# edge adjacency and the local relation
# ----------------------------------------------------------------------

Carrier = tuple[str, str]  # ("edge", id) or ("vertex", id)


def carrier(p: NetworkPoint) -> Carrier:
    return ("vertex", p.id) if p.is_vertex else ("edge", p.id)


class EdgeAdjacency:
    """Static neighbour relation on the graph elements themselves.

    Edges are related iff they share an endpoint, a vertex is related to
    its incident edges, and two vertices are related iff joined by an
    edge.  Reflexive by convention.
    """

    def __init__(self, g: MetricGraph):
        self._g = g
        self._ends = {e.id: frozenset((e.u, e.v)) for e in g.edges}
        self._edge_between = {frozenset((e.u, e.v)): e.id for e in g.edges}

    def related(self, a: Carrier, b: Carrier) -> bool:
        if a == b:
            return True
        (ka, ia), (kb, ib) = a, b
        if ka == "edge" and kb == "edge":
            return bool(self._ends[ia] & self._ends[ib])
        if ka == "edge" and kb == "vertex":
            return ib in self._ends[ia]
        if ka == "vertex" and kb == "edge":
            return ia in self._ends[ib]
        return frozenset((ia, ib)) in self._edge_between

    def shared_vertex(self, eid_a: str, eid_b: str) -> str | None:
        common = self._ends[eid_a] & self._ends[eid_b]
        return next(iter(common)) if common else None

    def edge_between(self, va: str, vb: str) -> str | None:
        return self._edge_between.get(frozenset((va, vb)))

    def to_json(self) -> dict:
        g = self._g
        edge_pairs = []
        eids = g.edge_ids
        for i, a in enumerate(eids):
            for b in eids[i + 1:]:
                if self._ends[a] & self._ends[b]:
                    edge_pairs.append([a, b])
        return {
            "edge_pairs": edge_pairs,
            "vertex_edges": {v: sorted(g.incident_edges(v)) for v in g.vertex_ids},
            "vertex_pairs": [[e.u, e.v] for e in g.edges],
        }


def edge_adjacency(g: MetricGraph) -> EdgeAdjacency:
    return EdgeAdjacency(g)


def _restriction(g: MetricGraph, x: Configuration, edge_ids: tuple[str, ...]):
    """Sub-network of one or two closed edges with the restricted configuration.

    Returns ``(subgraph, sub-configuration, global indices)``; vertex and
    edge ids are preserved so points carry over unchanged.
    """
    edges = [g.edge(eid) for eid in edge_ids]
    vids = sorted({v for e in edges for v in (e.u, e.v)})
    sub = MetricGraph([(v, None) for v in vids], edges)
    keep: list[int] = []
    pts: list[NetworkPoint] = []
    vset = set(vids)
    eset = set(edge_ids)
    for k, p in enumerate(x):
        if (p.is_vertex and p.id in vset) or (not p.is_vertex and p.id in eset):
            keep.append(k)
            pts.append(p)
    return sub, Configuration(pts), keep


def local_delaunay_relation(g: MetricGraph, x: Configuration, eps: float = EPS) -> Relation:
    """Delaunay relation localized to pairs of adjacent graph elements.

    Points are related iff their carrying edges/vertices are adjacent in
    the graph and the points are Delaunay-related on the sub-network of
    those one or two closed edges, with the configuration restricted
    likewise.
    """
    n = len(x)
    for p in x:
        g.check_point(p)
    matrix = np.eye(n, dtype=bool)
    adj = EdgeAdjacency(g)
    carriers = [carrier(p) for p in x]
    cache: dict[tuple[str, ...], set[frozenset[int]]] = {}

    def restricted_pairs(edge_ids: tuple[str, ...]) -> set[frozenset[int]]:
        got = cache.get(edge_ids)
        if got is None:
            sub, subx, keep = _restriction(g, x, edge_ids)
            r = delaunay_relation(sub, subx, eps)
            got = {frozenset((keep[i], keep[j])) for i, j in r.pairs()}
            cache[edge_ids] = got
        return got

    for i in range(n):
        for j in range(i + 1, n):
            (ki, ci), (kj, cj) = carriers[i], carriers[j]
            if ki == "edge" and kj == "edge":
                if ci == cj:
                    key = (ci,)
                elif adj.shared_vertex(ci, cj) is not None:
                    key = tuple(sorted((ci, cj)))
                else:
                    continue
            elif ki == "edge" and kj == "vertex":
                if cj not in (g.edge(ci).u, g.edge(ci).v):
                    continue
                key = (ci,)
            elif ki == "vertex" and kj == "edge":
                if ci not in (g.edge(cj).u, g.edge(cj).v):
                    continue
                key = (cj,)
            else:
                eid = adj.edge_between(ci, cj)
                if eid is None:
                    continue
                key = (eid,)
            if frozenset((i, j)) in restricted_pairs(key):
                matrix[i, j] = matrix[j, i] = True
    return Relation("local-delaunay", x, matrix)


def relation_of_kind(kind: str, g: MetricGraph, x: Configuration, eps: float = EPS) -> Relation:
    if kind == "delaunay":
        return delaunay_relation(g, x, eps)
    if kind in ("local-delaunay", "local"):
        return local_delaunay_relation(g, x, eps)
    raise ValueError(f"unknown relation kind {kind!r}")
