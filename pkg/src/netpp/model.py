"""Pairwise-interaction Gibbs models on networks and their simulation.

Densities are specified up to a normalizing constant as an activity
``beta`` per point times a pair interaction ``g`` evaluated at the network
distance of every pair of neighbouring points, with neighbours taken from
the (global or local) Delaunay relation of the configuration itself.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from netpp.geometry import EPS, Configuration, MetricGraph, NetworkPoint
from netpp.voronoi import Relation, relation_of_kind

__all__ = [
    "PairInteraction",
    "Constant",
    "Strauss",
    "HardCore",
    "SoftCore",
    "InteractionModel",
    "SamplerState",
    "Trace",
    "TraceRecord",
    "log_density",
    "papangelou",
    "birth_death_step",
    "run_sampler",
]


class PairInteraction:
    """Distance-dependent pair interaction ``g: [0, inf) -> [0, 1]``."""

    family = "abstract"

    def __call__(self, d: float) -> float:
        raise NotImplementedError

    @property
    def is_unit(self) -> bool:
        """True when ``g`` is identically one (no interaction)."""
        return False

    def params(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"family": self.family, "params": self.params()}


@dataclass(frozen=True)
class Constant(PairInteraction):
    c: float = 1.0
    family = "constant"

    def __post_init__(self):
        if not 0.0 <= self.c <= 1.0:
            raise ValueError("constant interaction requires 0 <= c <= 1")

    def __call__(self, d: float) -> float:
        return self.c

    @property
    def is_unit(self) -> bool:
        return self.c == 1.0

    def params(self) -> dict:
        return {"c": self.c}


@dataclass(frozen=True)
class Strauss(PairInteraction):
    gamma: float
    R: float
    family = "strauss"

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("strauss interaction requires 0 <= gamma <= 1")
        if self.R <= 0:
            raise ValueError("strauss interaction requires R > 0")

    def __call__(self, d: float) -> float:
        return self.gamma if d <= self.R else 1.0

    def params(self) -> dict:
        return {"gamma": self.gamma, "R": self.R}


@dataclass(frozen=True)
class HardCore(PairInteraction):
    R: float
    family = "hardcore"

    def __post_init__(self):
        if self.R <= 0:
            raise ValueError("hardcore interaction requires R > 0")

    def __call__(self, d: float) -> float:
        return 0.0 if d <= self.R else 1.0

    def params(self) -> dict:
        return {"R": self.R}


@dataclass(frozen=True)
class SoftCore(PairInteraction):
    sigma: float
    kappa: float
    family = "softcore"

    def __post_init__(self):
        if self.sigma <= 0 or self.kappa <= 0:
            raise ValueError("softcore interaction requires sigma, kappa > 0")

    def __call__(self, d: float) -> float:
        if d == 0.0:
            return 0.0
        return math.exp(-((self.sigma / d) ** self.kappa))

    def params(self) -> dict:
        return {"sigma": self.sigma, "kappa": self.kappa}


_FAMILIES = {
    "constant": lambda p: Constant(float(p.get("c", 1.0))),
    "strauss": lambda p: Strauss(float(p["gamma"]), float(p["R"])),
    "hardcore": lambda p: HardCore(float(p["R"])),
    "softcore": lambda p: SoftCore(float(p["sigma"]), float(p["kappa"])),
}


@dataclass(frozen=True)
class InteractionModel:
    """Activity plus pair interaction plus the neighbour relation to use."""

    beta: float
    pair: PairInteraction
    relation_kind: str = "delaunay"

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError("activity beta must be positive and finite")
        if self.relation_kind not in ("delaunay", "local-delaunay"):
            raise ValueError(f"unknown relation kind {self.relation_kind!r}")

    @staticmethod
    def from_json(document: str | dict) -> "InteractionModel":
        doc = json.loads(document) if isinstance(document, str) else document
        pair_doc = doc.get("pair", {"family": "constant", "params": {"c": 1.0}})
        family = pair_doc["family"]
        if family not in _FAMILIES:
            raise ValueError(f"unknown pair interaction family {family!r}")
        pair = _FAMILIES[family](pair_doc.get("params", {}))
        relation = doc.get("relation", "delaunay")
        if relation == "local":
            relation = "local-delaunay"
        return InteractionModel(float(doc["beta"]), pair, relation)

    def to_json(self) -> dict:
        relation = "local" if self.relation_kind == "local-delaunay" else "delaunay"
        return {"beta": self.beta, "pair": self.pair.to_json(), "relation": relation}


# ----------------------------------------------------------------------
# density and conditional intensity
# ----------------------------------------------------------------------

def log_density(m: InteractionModel, g: MetricGraph, x: Configuration,
                eps: float = EPS) -> float:
    """Unnormalized log density; ``-inf`` when a neighbouring pair is
    forbidden by the interaction.  The empty configuration scores 0."""
    n = len(x)
    if n == 0:
        return 0.0
    total = n * math.log(m.beta)
    if m.pair.is_unit:
        return total
    rel = relation_of_kind(m.relation_kind, g, x, eps)
    for i, j in rel.pairs():
        gv = m.pair(g.distance(x[i], x[j]))
        if gv == 0.0:
            return -math.inf
        total += math.log(gv)
    return total


def _index_shift(k: int, inserted_at: int) -> int:
    return k if k < inserted_at else k + 1


def papangelou(m: InteractionModel, g: MetricGraph, x: Configuration,
               u: NetworkPoint, eps: float = EPS) -> float:
    """Conditional intensity of adding ``u`` to ``x``.

    Computed from the factorization directly: the activity times the pair
    terms gained at ``u``, divided by the pair terms of neighbour pairs
    that the insertion of ``u`` breaks.
    """
    g.check_point(u)
    if u in x:
        raise ValueError("point already present in the configuration")
    if m.pair.is_unit:
        return m.beta
    xu = x.add(u)
    iu = xu.index(u)
    r_x = relation_of_kind(m.relation_kind, g, x, eps)
    r_xu = relation_of_kind(m.relation_kind, g, xu, eps)
    value = m.beta
    for k, p in enumerate(x):
        if r_xu.related(_index_shift(k, iu), iu):
            gv = m.pair(g.distance(p, u))
            if gv == 0.0:
                return 0.0
            value *= gv
    for i, j in r_x.pairs():
        gv = m.pair(g.distance(x[i], x[j]))
        if gv == 0.0:
            raise ValueError("current configuration has zero density")
        if not r_xu.related(_index_shift(i, iu), _index_shift(j, iu)):
            value /= gv
    return value


# ----------------------------------------------------------------------
# birth-death Metropolis-Hastings
# ----------------------------------------------------------------------

@dataclass
class SamplerState:
    """Mutable chain state; owned by a single thread of control."""

    configuration: Configuration
    iteration: int = 0
    birth_proposals: int = 0
    birth_accepts: int = 0
    death_proposals: int = 0
    death_accepts: int = 0
    _relation: Relation | None = field(default=None, repr=False)

    def relation(self, m: InteractionModel, g: MetricGraph, eps: float = EPS) -> Relation:
        """Neighbour relation of the current configuration (lazily cached)."""
        if self._relation is None or self._relation.configuration != self.configuration:
            self._relation = relation_of_kind(m.relation_kind, g, self.configuration, eps)
        return self._relation

    @property
    def acceptance_rates(self) -> dict:
        def rate(a, p):
            return a / p if p else 0.0
        return {
            "birth": rate(self.birth_accepts, self.birth_proposals),
            "death": rate(self.death_accepts, self.death_proposals),
        }


def birth_death_step(state: SamplerState, m: InteractionModel, g: MetricGraph,
                     rng: np.random.Generator, eps: float = EPS) -> SamplerState:
    """One Metropolis-Hastings step: propose a uniform birth or death.

    Birth of ``u`` is accepted with ``min(1, lambda(u|x) |L| / (n+1))``,
    death of ``x_i`` with ``min(1, n / (|L| lambda(x_i | x minus x_i)))``.
    A death proposed on the empty configuration is auto-rejected but still
    counts as a step.  The state is updated in place and returned.
    """
    x = state.configuration
    n = len(x)
    total = g.total_length()
    state.iteration += 1
    if rng.random() < 0.5:
        state.birth_proposals += 1
        u = g.sample_uniform(rng)
        if u in x:  # pragma: no cover - zero-probability collision
            return state
        lam = papangelou(m, g, x, u, eps)
        accept = lam * total / (n + 1)
        if rng.random() < accept:
            state.configuration = x.add(u)
            state._relation = None
            state.birth_accepts += 1
    else:
        state.death_proposals += 1
        if n == 0:
            return state
        i = int(rng.integers(n))
        reduced = x.remove(i)
        lam = papangelou(m, g, reduced, x[i], eps)
        accept = math.inf if lam == 0.0 else n / (total * lam)
        if rng.random() < accept:
            state.configuration = reduced
            state._relation = None
            state.death_accepts += 1
    return state


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    count: int
    edge_counts: dict[str, int]
    configuration: list | None = None

    def to_json(self) -> dict:
        rec = {
            "iteration": self.iteration,
            "count": self.count,
            "edge_counts": self.edge_counts,
        }
        if self.configuration is not None:
            rec["configuration"] = self.configuration
        return rec


@dataclass
class Trace:
    """Thinned summaries of a sampler run."""

    records: list[TraceRecord]
    iterations: int
    burn_in: int
    thin: int
    acceptance: dict

    def counts(self) -> np.ndarray:
        return np.array([r.count for r in self.records])

    def to_ndjson(self) -> str:
        return "\n".join(json.dumps(r.to_json()) for r in self.records)


def _edge_counts(g: MetricGraph, x: Configuration) -> dict[str, int]:
    counts = {eid: 0 for eid in g.edge_ids}
    for p in x:
        if not p.is_vertex:
            counts[p.id] += 1
    return counts


def run_sampler(m: InteractionModel, g: MetricGraph, iterations: int,
                burn_in: int, thin: int, rng: np.random.Generator,
                record_configurations: bool = False,
                initial: Configuration | None = None,
                eps: float = EPS) -> Trace:
    """Run the birth-death chain and record thinned summaries.

    Records are taken every ``thin`` steps after ``burn_in``, giving
    ``(iterations - burn_in) // thin`` of them.
    """
    if not (iterations >= burn_in >= 0):
        raise ValueError("need iterations >= burn_in >= 0")
    if thin < 1:
        raise ValueError("thin must be at least 1")
    state = SamplerState(initial if initial is not None else Configuration())
    records: list[TraceRecord] = []
    for step in range(1, iterations + 1):
        birth_death_step(state, m, g, rng, eps)
        if step > burn_in and (step - burn_in) % thin == 0:
            records.append(TraceRecord(
                iteration=step,
                count=len(state.configuration),
                edge_counts=_edge_counts(g, state.configuration),
                configuration=(state.configuration.to_json()
                               if record_configurations else None),
            ))
    return Trace(records, iterations, burn_in, thin, state.acceptance_rates)
