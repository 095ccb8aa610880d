"""Executable verification: brute-force oracles and randomized audits.

Everything here is deliberately independent of the production code paths:
distances are re-derived by exhaustive path enumeration and the Delaunay
relation by dense discretization, so the two sides can check each other.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from netpp.geometry import (
    EPS, Configuration, Edge, GraphError, MetricGraph, NetworkPoint)
from netpp.voronoi import (
    Relation, _edge_profiles, _vertex_point_distances, delaunay_relation,
    in_general_position, relation_of_kind)

__all__ = [
    "AuditReport",
    "brute_force_distance",
    "count_simple_paths",
    "grid_voronoi_oracle",
    "compare_relations",
    "check_c1",
    "check_c2",
    "check_hereditary",
    "random_tree",
    "random_graph",
    "sample_general_position",
    "run_consistency_audit",
    "run_hereditary_audit",
    "run_oracle_audit",
    "triangle_graph",
    "triangle_midpoints",
    "reproduce_triangle_counterexample",
]


@dataclass
class AuditReport:
    """Outcome of one audit instance.

    Violations carry enough to replay: the seed (when driven by a seeded
    generator) and the serialized instance.
    """

    condition: str
    verdict: str  # "pass" | "violation" | "near-degenerate" | "discarded"
    details: dict = field(default_factory=dict)
    instance: dict | None = None
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        rec = {"condition": self.condition, "verdict": self.verdict,
               "details": self.details}
        if self.instance is not None:
            rec["instance"] = self.instance
        if self.seed is not None:
            rec["seed"] = self.seed
        return rec


def _serialize_instance(g: MetricGraph, z: Configuration,
                        u: NetworkPoint | None = None,
                        v: NetworkPoint | None = None,
                        y: Iterable[int] | None = None) -> dict:
    rec = {"graph": g.to_json(), "configuration": z.to_json()}
    if u is not None:
        rec["u"] = u.to_json()
    if v is not None:
        rec["v"] = v.to_json()
    if y is not None:
        rec["y"] = sorted(y)
    return rec


# ----------------------------------------------------------------------
# brute-force distance oracle
# ----------------------------------------------------------------------

MAX_ORACLE_EDGES = 12


def _enumerate_route_weights(g: MetricGraph, p: NetworkPoint, q: NetworkPoint) -> list[float]:
    """Weights of all simple paths from ``p`` to ``q``.

    A route leaves ``p`` along its edge to one endpoint, follows a
    vertex-simple edge path, and enters ``q`` along its edge; the partial
    edges carrying interior endpoints may not be traversed again, and for
    two points on one edge the entry and exit stretches may not overlap.
    """
    if len(g.edge_ids) > MAX_ORACLE_EDGES:
        raise GraphError(f"oracle limited to {MAX_ORACLE_EDGES} edges")
    g.check_point(p)
    g.check_point(q)
    weights: list[float] = []
    same_edge = (not p.is_vertex and not q.is_vertex and p.id == q.id)
    if same_edge:
        weights.append(abs(p.t - q.t))

    forbidden: set[str] = set()
    if not p.is_vertex:
        forbidden.add(p.id)
    if not q.is_vertex:
        forbidden.add(q.id)

    adj: dict[str, list[tuple[str, str, float]]] = {v: [] for v in g.vertex_ids}
    for e in g.edges:
        if e.id in forbidden:
            continue
        adj[e.u].append((e.v, e.id, e.length))
        adj[e.v].append((e.u, e.id, e.length))

    def anchors(x: NetworkPoint) -> list[tuple[str, float, tuple[float, float]]]:
        # (anchor vertex, cost, covered offset interval on the carrier edge)
        if x.is_vertex:
            return [(x.id, 0.0, (math.nan, math.nan))]
        e = g.edge(x.id)
        return [(e.u, x.t, (0.0, x.t)), (e.v, e.length - x.t, (x.t, e.length))]

    for a, ca, span_a in anchors(p):
        for b, cb, span_b in anchors(q):
            if same_edge:
                # the stretches on the shared edge must not overlap
                lo = max(span_a[0], span_b[0])
                hi = min(span_a[1], span_b[1])
                if hi > lo:
                    continue
            if a == b:
                if not p.is_vertex or not q.is_vertex:
                    weights.append(ca + cb)
                continue
            # DFS over vertex-simple paths a -> b
            stack = [(a, {a}, 0.0)]
            while stack:
                v, seen, w = stack.pop()
                for nxt, _, length in adj[v]:
                    if nxt == b:
                        weights.append(ca + w + length + cb)
                    elif nxt not in seen:
                        stack.append((nxt, seen | {nxt}, w + length))
    return weights


def brute_force_distance(g: MetricGraph, p: NetworkPoint, q: NetworkPoint) -> float:
    """Minimum weight over explicitly enumerated simple paths."""
    if p == q:
        return 0.0
    weights = _enumerate_route_weights(g, p, q)
    if not weights:
        raise GraphError("no path between the points")
    return min(weights)


def count_simple_paths(g: MetricGraph, p: NetworkPoint, q: NetworkPoint) -> int:
    if p == q:
        raise ValueError("path count requires distinct points")
    return len(_enumerate_route_weights(g, p, q))


# ----------------------------------------------------------------------
# discretized Voronoi oracle
# ----------------------------------------------------------------------

def grid_voronoi_oracle(g: MetricGraph, x: Configuration, h: float,
                        eps: float = EPS) -> Relation:
    """Delaunay relation from grid argmin label sets at spacing ``h``.

    Ties are resolved at tolerance ``max(eps, h)``: distance profiles have
    slopes bounded by one, so a genuine cell boundary shows up at the
    nearest grid node with a value gap of at most ``h``.  A smaller
    tolerance would miss almost every boundary that falls between nodes.
    """
    if h <= 0:
        raise ValueError("grid spacing must be positive")
    n = len(x)
    tol = max(eps, h)
    matrix = np.eye(n, dtype=bool)
    if n > 1:
        vd = _vertex_point_distances(g, x)
        for e in g.edges:
            av, bv, sv = _edge_profiles(g, x, vd, e)
            ts = np.linspace(0.0, e.length, max(2, int(math.ceil(e.length / h)) + 1))
            f = _grid_profile_values(av, bv, sv, e.length, ts)
            comin = f <= f.min(axis=0)[None, :] + tol
            co = comin.astype(np.uint8)
            matrix |= (co @ co.T) > 0
    return Relation("delaunay", x, matrix)


def _grid_profile_values(av, bv, sv, ell, ts):
    # deliberately re-stated rather than imported from the kernels
    f = np.minimum(av[:, None] + ts[None, :], (bv + ell)[:, None] - ts[None, :])
    on_edge = np.isfinite(sv)
    if np.any(on_edge):
        f[on_edge] = np.minimum(f[on_edge], np.abs(ts[None, :] - sv[on_edge, None]))
    return f


def _pair_margin(g: MetricGraph, x: Configuration, i: int, j: int,
                 grid_h: float | None = None) -> float:
    """How far the pair is from sharing a cell boundary point.

    Minimum over sample offsets of ``max(f_i, f_j) - min_k f_k``; zero iff
    the pair is co-minimal somewhere on the sampled set.  With ``grid_h``
    the sample set is the oracle grid, otherwise the exact candidate set.
    """
    from netpp import kernels

    vd = _vertex_point_distances(g, x)
    best = math.inf
    for e in g.edges:
        av, bv, sv = _edge_profiles(g, x, vd, e)
        if grid_h is None:
            ts = kernels.edge_candidates(av, bv, sv, e.length)
        else:
            ts = np.linspace(0.0, e.length,
                             max(2, int(math.ceil(e.length / grid_h)) + 1))
        f = _grid_profile_values(av, bv, sv, e.length, ts)
        psi = np.maximum(f[i], f[j]) - f.min(axis=0)
        best = min(best, float(psi.min()))
    return best


def compare_relations(g: MetricGraph, x: Configuration, exact: Relation,
                      oracle: Relation, h: float) -> dict:
    """Classify disagreements between the exact relation and the grid oracle.

    A disagreeing pair is near-degenerate when the dissenting side comes
    within ``10 h`` of agreeing, i.e. the boundary sliver is thinner than
    the grid can resolve.
    """
    n = len(x)
    mismatches = []
    near_degenerate = []
    for i in range(n):
        for j in range(i + 1, n):
            a, b = exact.related(i, j), oracle.related(i, j)
            if a == b:
                continue
            # margin as seen by whichever side says "not related"
            margin = _pair_margin(g, x, i, j, grid_h=h if a else None)
            if margin < 10 * h:
                near_degenerate.append((i, j))
            else:
                mismatches.append((i, j, margin))
    return {
        "agree": not mismatches,
        "mismatches": mismatches,
        "near_degenerate": near_degenerate,
    }


# ----------------------------------------------------------------------
# consistency audits
# ----------------------------------------------------------------------

def _clique(rel: Relation, idx: Iterable[int]) -> int:
    return 1 if rel.is_clique(idx) else 0


def _candidate_subsets(g: MetricGraph, z: Configuration, kind: str):
    """Subsets of z worth auditing, per the proven clique taxonomy.

    For the global relation, sizes two and three (on trees nothing larger
    can ever be a clique in general position).  For the local relation,
    all pairs plus larger subsets whose carrier edges all emanate from one
    common vertex, capped by that vertex's degree: those are the clique
    shapes the local consistency argument covers.
    """
    n = len(z)
    idx = range(n)
    subsets = [list(c) for c in itertools.combinations(idx, 2)]
    if kind == "delaunay":
        subsets.extend(list(c) for c in itertools.combinations(idx, 3))
        return subsets

    def incident_vertices(p: NetworkPoint) -> set[str]:
        if p.is_vertex:
            return {p.id}
        e = g.edge(p.id)
        return {e.u, e.v}

    for v in g.vertex_ids:
        members = [k for k in idx if v in incident_vertices(z[k])]
        top = min(len(members), g.degree(v))
        for size in range(3, top + 1):
            subsets.extend(list(c) for c in itertools.combinations(members, size))
    # dedupe (a subset may sit around several vertices)
    seen = set()
    unique = []
    for s in subsets:
        key = tuple(s)
        if key not in seen:
            seen.add(key)
            unique.append(s)
    return unique


def check_c1(g: MetricGraph, relation_kind: str, z: Configuration,
             u: NetworkPoint, eps: float = EPS, seed: int | None = None) -> AuditReport:
    """First consistency condition: a clique status flipped by adding ``u``
    forces every member of the subset into the neighbourhood of ``u``."""
    if u in z:
        raise ValueError("u must not belong to z")
    zu = z.add(u)
    iu = zu.index(u)
    r_z = relation_of_kind(relation_kind, g, z, eps)
    r_zu = relation_of_kind(relation_kind, g, zu, eps)
    shift = lambda k: k if k < iu else k + 1
    nb_u = {k for k in range(len(z)) if r_zu.related(shift(k), iu)}
    for y in _candidate_subsets(g, z, relation_kind):
        chi_z = _clique(r_z, y)
        chi_zu = _clique(r_zu, [shift(k) for k in y])
        if chi_z != chi_zu and not set(y) <= nb_u:
            return AuditReport(
                condition="C1",
                verdict="violation",
                details={"y": y, "chi_z": chi_z, "chi_zu": chi_zu,
                         "outside_neighbourhood": sorted(set(y) - nb_u)},
                instance=_serialize_instance(g, z, u=u, y=y),
                seed=seed,
            )
    return AuditReport(condition="C1", verdict="pass", seed=seed)


def check_c2(g: MetricGraph, relation_kind: str, z: Configuration,
             u: NetworkPoint, v: NetworkPoint, eps: float = EPS,
             seed: int | None = None) -> AuditReport:
    """Second consistency condition: the four-term clique identity for two
    added points that are not neighbours of each other."""
    if u in z or v in z or u == v:
        raise ValueError("u, v must be distinct points outside z")
    x = z.add(u).add(v)
    r_x = relation_of_kind(relation_kind, g, x, eps)
    if r_x.related(x.index(u), x.index(v)):
        return AuditReport(condition="C2", verdict="discarded",
                           details={"reason": "u ~ v in z + {u, v}"}, seed=seed)
    zu = z.add(u)
    zv = z.add(v)
    r_z = relation_of_kind(relation_kind, g, z, eps)
    r_zu = relation_of_kind(relation_kind, g, zu, eps)
    r_zv = relation_of_kind(relation_kind, g, zv, eps)
    for y in _candidate_subsets(g, z, relation_kind):
        pts = [z[k] for k in y]
        lhs = _clique(r_zu, [zu.index(p) for p in pts]) + \
            _clique(r_zv, [zv.index(p) for p in pts])
        rhs = _clique(r_z, y) + _clique(r_x, [x.index(p) for p in pts])
        if lhs != rhs:
            return AuditReport(
                condition="C2",
                verdict="violation",
                details={"y": y, "lhs": lhs, "rhs": rhs},
                instance=_serialize_instance(g, z, u=u, v=v, y=y),
                seed=seed,
            )
    return AuditReport(condition="C2", verdict="pass", seed=seed)


def check_hereditary(g: MetricGraph, x: Configuration,
                     rng: np.random.Generator, chains: int = 100,
                     eps: float = EPS, seed: int | None = None) -> AuditReport:
    """Randomized audit of the clique monotonicity under sub-configurations:
    a clique of the full configuration stays one in any sub-configuration,
    and a non-clique of a sub-configuration stays one in the full set."""
    n = len(x)
    r_x = delaunay_relation(g, x, eps)
    for _ in range(chains):
        mask_z = rng.random(n) < rng.uniform(0.4, 1.0)
        z_idx = [k for k in range(n) if mask_z[k]]
        if len(z_idx) < 2:
            continue
        z = x.subset(z_idx)
        r_z = delaunay_relation(g, z, eps)
        take = rng.random(len(z_idx)) < rng.uniform(0.3, 1.0)
        y_in_x = [k for k, t in zip(z_idx, take) if t]
        if len(y_in_x) < 2:
            continue
        y_in_z = [z.index(x[k]) for k in y_in_x]
        chi_x = _clique(r_x, y_in_x)
        chi_z = _clique(r_z, y_in_z)
        if chi_x == 1 and chi_z == 0:
            return AuditReport(
                condition="hereditary", verdict="violation",
                details={"y": y_in_x, "z": z_idx,
                         "chi_x": chi_x, "chi_z": chi_z},
                instance=_serialize_instance(g, x, y=y_in_x), seed=seed)
    return AuditReport(condition="hereditary", verdict="pass", seed=seed)


# ----------------------------------------------------------------------
# instance generators
# ----------------------------------------------------------------------

def random_tree(rng: np.random.Generator, n_vertices: int,
                length_range: tuple[float, float] = (0.5, 2.0)) -> MetricGraph:
    """Uniform random labelled tree with i.i.d. uniform edge lengths."""
    if n_vertices < 1:
        raise ValueError("need at least one vertex")
    lo, hi = length_range
    if not (0 < lo <= hi):
        raise ValueError("invalid length range")
    vids = [f"v{i}" for i in range(n_vertices)]
    edges: list[Edge] = []
    if n_vertices == 2:
        pairs = [(0, 1)]
    elif n_vertices > 2:
        # decode a random Pruefer sequence
        prufer = [int(rng.integers(n_vertices)) for _ in range(n_vertices - 2)]
        degree = [1] * n_vertices
        for a in prufer:
            degree[a] += 1
        pairs = []
        for a in prufer:
            for b in range(n_vertices):
                if degree[b] == 1:
                    pairs.append((a, b))
                    degree[a] -= 1
                    degree[b] -= 1
                    break
        leaves = [b for b in range(n_vertices) if degree[b] == 1]
        pairs.append((leaves[0], leaves[1]))
    else:
        pairs = []
    for k, (a, b) in enumerate(pairs):
        edges.append(Edge(f"e{k}", vids[a], vids[b], float(rng.uniform(lo, hi))))
    return MetricGraph([(v, None) for v in vids], edges)


def random_graph(rng: np.random.Generator, n_vertices: int, extra_edges: int,
                 length_range: tuple[float, float] = (0.5, 2.0)) -> MetricGraph:
    """Random tree plus ``extra_edges`` chords (creating cycles)."""
    tree = random_tree(rng, n_vertices, length_range)
    doc = tree.to_json()
    present = {frozenset(e["ends"]) for e in doc["edges"]}
    candidates = [
        (a, b)
        for i, a in enumerate(tree.vertex_ids)
        for b in tree.vertex_ids[i + 1:]
        if frozenset((a, b)) not in present
    ]
    if extra_edges > len(candidates):
        raise ValueError("not enough vertex pairs for the requested chords")
    lo, hi = length_range
    picks = rng.choice(len(candidates), size=extra_edges, replace=False)
    for k, c in enumerate(picks):
        a, b = candidates[int(c)]
        doc["edges"].append({
            "id": f"x{k}", "ends": [a, b],
            "length": float(rng.uniform(lo, hi)),
        })
    from netpp.geometry import load_graph
    return load_graph(doc)


def sample_general_position(g: MetricGraph, rate: float,
                            rng: np.random.Generator, eps: float = EPS,
                            min_points: int = 0, max_points: int | None = None,
                            max_tries: int = 200) -> Configuration:
    """Poisson configuration conditioned on being in general position."""
    for _ in range(max_tries):
        x = g.sample_poisson(rate, rng)
        if len(x) < min_points:
            continue
        if max_points is not None and len(x) > max_points:
            continue
        ok, _ = in_general_position(g, x, eps)
        if ok:
            return x
    raise RuntimeError("failed to draw a general-position configuration")


# ----------------------------------------------------------------------
# audit drivers
# ----------------------------------------------------------------------

def _sample_point_outside(g: MetricGraph, z: Configuration,
                          rng: np.random.Generator) -> NetworkPoint:
    while True:
        u = g.sample_uniform(rng)
        if u not in z:
            return u


def run_consistency_audit(condition: str, relation_kind: str, instances: int,
                          seed: int, cyclic: bool = False, rate: float = 1.0,
                          n_vertices: tuple[int, int] = (4, 7),
                          reuse: int = 4, eps: float = EPS,
                          max_points: int = 9) -> list[AuditReport]:
    """Drive randomized C1/C2 audits over generated instances.

    Each graph/configuration pair serves up to ``reuse`` added-point draws;
    every report carries the attempt index, which together with the master
    ``seed`` replays the instance exactly.  Instances failing the C2
    not-neighbours precondition are resampled, not counted.
    """
    if condition not in ("c1", "c2"):
        raise ValueError("condition must be 'c1' or 'c2'")
    reports: list[AuditReport] = []
    attempt = 0
    while len(reports) < instances:
        rng = np.random.default_rng([seed, attempt])
        attempt += 1
        lo, hi = n_vertices
        nv = int(rng.integers(lo, hi + 1))
        try:
            if cyclic:
                g = random_graph(rng, nv, int(rng.integers(1, 3)))
            else:
                g = random_tree(rng, nv)
            z = sample_general_position(g, rate, rng, eps,
                                        min_points=2, max_points=max_points,
                                        max_tries=20)
        except (ValueError, RuntimeError):
            continue
        for _ in range(reuse):
            if len(reports) >= instances:
                break
            u = _sample_point_outside(g, z, rng)
            if condition == "c1":
                rep = check_c1(g, relation_kind, z, u, eps, seed=attempt - 1)
            else:
                rep = None
                for _ in range(10):
                    v = _sample_point_outside(g, z.add(u), rng)
                    rep = check_c2(g, relation_kind, z, u, v, eps,
                                   seed=attempt - 1)
                    if rep.verdict != "discarded":
                        break
                if rep is None or rep.verdict == "discarded":
                    continue
            reports.append(rep)
    return reports


def run_hereditary_audit(chains: int, seed: int, rate: float = 1.0,
                         n_vertices: tuple[int, int] = (4, 8),
                         chains_per_instance: int = 50,
                         eps: float = EPS) -> list[AuditReport]:
    """Spread the requested number of subset chains over random trees."""
    reports: list[AuditReport] = []
    done = 0
    attempt = 0
    while done < chains:
        rng = np.random.default_rng([seed, attempt])
        attempt += 1
        g = random_tree(rng, int(rng.integers(*n_vertices)))
        x = g.sample_poisson(rate, rng)
        if len(x) < 3:
            continue
        batch = min(chains_per_instance, chains - done)
        reports.append(check_hereditary(g, x, rng, chains=batch, eps=eps,
                                        seed=attempt - 1))
        done += batch
    return reports


def run_oracle_audit(instances: int, seed: int, h: float = 1e-3,
                     rate: float = 1.0, n_vertices: tuple[int, int] = (4, 8),
                     eps: float = EPS) -> dict:
    """Exact Delaunay relation versus the grid oracle on random trees."""
    mismatched = []
    near_degenerate_pairs = 0
    compared_pairs = 0
    attempt = 0
    made = 0
    while made < instances:
        rng = np.random.default_rng([seed, attempt])
        attempt += 1
        g = random_tree(rng, int(rng.integers(*n_vertices)))
        x = g.sample_poisson(rate, rng)
        if len(x) < 2:
            continue
        exact = delaunay_relation(g, x, eps)
        oracle = grid_voronoi_oracle(g, x, h, eps)
        res = compare_relations(g, x, exact, oracle, h)
        compared_pairs += len(x) * (len(x) - 1) // 2
        near_degenerate_pairs += len(res["near_degenerate"])
        if res["mismatches"]:
            mismatched.append({"seed": attempt - 1, "mismatches": res["mismatches"]})
        made += 1
    return {
        "instances": made,
        "compared_pairs": compared_pairs,
        "near_degenerate_pairs": near_degenerate_pairs,
        "near_degenerate_fraction": (near_degenerate_pairs / compared_pairs
                                     if compared_pairs else 0.0),
        "mismatched": mismatched,
        "agree": not mismatched,
    }


# ----------------------------------------------------------------------
# the triangle counterexample
# ----------------------------------------------------------------------

def triangle_graph() -> MetricGraph:
    """Complete graph on (-1,0), (1,0), (0,1) with straight edges."""
    s = math.sqrt(2.0)
    return MetricGraph(
        [("A", (-1.0, 0.0)), ("B", (1.0, 0.0)), ("C", (0.0, 1.0))],
        [Edge("AB", "A", "B", 2.0), Edge("AC", "A", "C", s), Edge("CB", "C", "B", s)],
    )


def triangle_midpoints(g: MetricGraph) -> Configuration:
    return Configuration([
        g.point("AB", 1.0),
        g.point("AC", math.sqrt(2.0) / 2.0),
        g.point("CB", math.sqrt(2.0) / 2.0),
    ])


@dataclass(frozen=True)
class TriangleCounterexample:
    graph: MetricGraph
    z: Configuration
    u: NetworkPoint
    v: NetworkPoint
    c1: AuditReport
    c2: AuditReport


def reproduce_triangle_counterexample(eps: float = EPS) -> TriangleCounterexample:
    """Deterministically exhibit the failure of both consistency conditions
    for the global Delaunay relation on the triangle network.

    One point per edge forms a clique of its own relation; any extra point
    splits two of them while the third stays outside the newcomer's
    neighbourhood, and a second far enough extra point breaks the four-term
    identity.  Raises if the construction unexpectedly fails.
    """
    g = triangle_graph()
    z = triangle_midpoints(g)
    r_z = delaunay_relation(g, z, eps)
    if not r_z.is_clique(range(len(z))):
        raise RuntimeError("triangle midpoints are expected to form a clique")
    u = g.point("AB", 0.5)
    v = g.point("AB", 1.5)
    c1 = check_c1(g, "delaunay", z, u, eps)
    if c1.verdict != "violation":
        raise RuntimeError("expected a C1 violation on the triangle")
    c2 = check_c2(g, "delaunay", z, u, v, eps)
    if c2.verdict != "violation":
        raise RuntimeError("expected a C2 violation on the triangle")
    return TriangleCounterexample(g, z, u, v, c1, c2)
