"""Metric graphs and the weighted shortest-path geometry on their networks.

A :class:`MetricGraph` is a finite simple connected graph whose edges carry
strictly positive lengths.  Points live on the associated network: either at
a vertex or in the interior of an edge, addressed by an offset from the
edge's first endpoint.  Distances are measured along the network, so the
shortest route between two points on one edge may detour through the rest
of the graph.
"""

from __future__ import annotations

import heapq
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "EPS",
    "GraphError",
    "NetworkPoint",
    "Edge",
    "MetricGraph",
    "Configuration",
    "PathSegment",
    "NetworkPath",
    "load_graph",
    "load_graph_file",
    "load_configuration",
]

#: Default absolute tolerance for floating-point comparisons.
EPS = 1e-9


class GraphError(ValueError):
    """Raised when a graph document violates a structural invariant."""


@dataclass(frozen=True, order=True)
class NetworkPoint:
    """A location on the network: a vertex, or an interior point of an edge.

    Edge offsets are measured in length units from the edge's first
    endpoint.  Points on distinct edges are distinct locations even if a
    planar embedding would place them at the same coordinates; the edge id
    is part of the identity.  Instances are created through
    :meth:`MetricGraph.point` or :meth:`NetworkPoint.at_vertex` so that
    offsets of exactly 0 or the edge length canonicalize to the vertex
    variant.
    """

    id: str
    t: float
    is_vertex: bool

    @staticmethod
    def at_vertex(vertex_id: str) -> "NetworkPoint":
        return NetworkPoint(vertex_id, 0.0, True)

    @staticmethod
    def on_edge(edge_id: str, t: float) -> "NetworkPoint":
        """Interior edge point; use :meth:`MetricGraph.point` to canonicalize."""
        if t <= 0:
            raise ValueError(f"interior offset must be positive, got {t}")
        return NetworkPoint(edge_id, float(t), False)

    def to_json(self) -> dict:
        if self.is_vertex:
            return {"vertex": self.id}
        return {"edge": self.id, "t": self.t}

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"v:{self.id}"
        return f"e:{self.id}:{self.t:g}"


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: float
    polyline: tuple[tuple[float, float], ...] | None = None

    @property
    def ends(self) -> tuple[str, str]:
        return (self.u, self.v)


def _polyline_length(coords: Sequence[Sequence[float]]) -> float:
    pts = np.asarray(coords, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != 2:
        raise GraphError("polyline must be a list of at least two [x, y] pairs")
    return float(np.sum(np.hypot(*(np.diff(pts, axis=0).T))))


class MetricGraph:
    """Finite simple connected graph with positively weighted edges.

    Immutable after construction; vertex-to-vertex shortest paths are
    computed once per source and cached, so instances are safe for
    concurrent reads.
    """

    def __init__(
        self,
        vertices: Iterable[tuple[str, tuple[float, float] | None]] | Iterable[str],
        edges: Iterable[Edge],
    ):
        vs: dict[str, tuple[float, float] | None] = {}
        for item in vertices:
            if isinstance(item, str):
                vid, xy = item, None
            else:
                vid, xy = item
            if vid in vs:
                raise GraphError(f"duplicate vertex id {vid!r}")
            vs[vid] = tuple(xy) if xy is not None else None
        self._vertices = vs

        es: dict[str, Edge] = {}
        seen_pairs: set[frozenset[str]] = set()
        for e in edges:
            if e.id in es:
                raise GraphError(f"duplicate edge id {e.id!r}")
            if e.u not in vs or e.v not in vs:
                raise GraphError(f"edge {e.id!r} references unknown vertex")
            if e.u == e.v:
                raise GraphError(f"loop forbidden: edge {e.id!r} joins {e.u!r} to itself")
            pair = frozenset((e.u, e.v))
            if pair in seen_pairs:
                raise GraphError(f"duplicate edge between {e.u!r} and {e.v!r}")
            seen_pairs.add(pair)
            if not (math.isfinite(e.length) and e.length > 0):
                raise GraphError(f"edge {e.id!r} must have finite positive length")
            if e.polyline is not None:
                arc = _polyline_length(e.polyline)
                if abs(arc - e.length) > 1e-6 * max(1.0, abs(e.length)):
                    warnings.warn(
                        f"edge {e.id!r}: polyline arc length {arc:g} does not match "
                        f"declared length {e.length:g}",
                        stacklevel=2,
                    )
            es[e.id] = e
        self._edges = es

        self._adj: dict[str, list[tuple[str, str, float]]] = {v: [] for v in vs}
        for e in es.values():
            self._adj[e.u].append((e.v, e.id, e.length))
            self._adj[e.v].append((e.u, e.id, e.length))

        self._check_connected()
        # Per-source Dijkstra results, filled lazily: source -> (dist, pred)
        # where pred maps vertex -> (previous vertex, edge id).
        self._sp_cache: dict[str, tuple[dict[str, float], dict[str, tuple[str, str]]]] = {}

    # ------------------------------------------------------------------
    # basic structure
    # ------------------------------------------------------------------

    @property
    def vertex_ids(self) -> list[str]:
        return list(self._vertices)

    @property
    def edge_ids(self) -> list[str]:
        return list(self._edges)

    @property
    def edges(self) -> list[Edge]:
        return list(self._edges.values())

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError:
            raise GraphError(f"unknown edge id {edge_id!r}") from None

    def has_vertex(self, vertex_id: str) -> bool:
        return vertex_id in self._vertices

    def vertex_xy(self, vertex_id: str) -> tuple[float, float] | None:
        return self._vertices[vertex_id]

    def degree(self, vertex_id: str) -> int:
        return len(self._adj[vertex_id])

    def incident_edges(self, vertex_id: str) -> list[str]:
        return [eid for (_, eid, _) in self._adj[vertex_id]]

    def _check_connected(self) -> None:
        if not self._vertices:
            raise GraphError("graph must have at least one vertex")
        start = next(iter(self._vertices))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w, _, _ in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(self._vertices):
            raise GraphError("disconnected graph")

    def is_tree(self) -> bool:
        """True iff the graph is acyclic (edge count = vertex count - 1)."""
        return len(self._edges) == len(self._vertices) - 1

    def total_length(self) -> float:
        """Total length of the network; vertices carry no mass."""
        return sum(e.length for e in self._edges.values())

    # ------------------------------------------------------------------
    # points
    # ------------------------------------------------------------------

    def point(self, edge_id: str, t: float) -> NetworkPoint:
        """Point at offset ``t`` on an edge, canonicalized to a vertex at 0 or L."""
        e = self.edge(edge_id)
        if t < -EPS or t > e.length + EPS:
            raise GraphError(
                f"offset {t} outside [0, {e.length}] on edge {edge_id!r}")
        if t <= 0.0:
            return NetworkPoint.at_vertex(e.u)
        if t >= e.length:
            return NetworkPoint.at_vertex(e.v)
        return NetworkPoint.on_edge(edge_id, t)

    def vertex_point(self, vertex_id: str) -> NetworkPoint:
        if vertex_id not in self._vertices:
            raise GraphError(f"unknown vertex id {vertex_id!r}")
        return NetworkPoint.at_vertex(vertex_id)

    def check_point(self, p: NetworkPoint) -> None:
        if p.is_vertex:
            if p.id not in self._vertices:
                raise GraphError(f"unknown vertex id {p.id!r}")
        else:
            e = self.edge(p.id)
            if not (0.0 < p.t < e.length):
                raise GraphError(
                    f"offset {p.t} not interior to edge {p.id!r} of length {e.length}")

    # ------------------------------------------------------------------
    # shortest paths
    # ------------------------------------------------------------------

    def _single_source(self, source: str) -> tuple[dict[str, float], dict[str, tuple[str, str]]]:
        cached = self._sp_cache.get(source)
        if cached is not None:
            return cached
        dist: dict[str, float] = {source: 0.0}
        pred: dict[str, tuple[str, str]] = {}
        done: set[str] = set()
        heap: list[tuple[float, str]] = [(0.0, source)]
        while heap:
            d, v = heapq.heappop(heap)
            if v in done:
                continue
            done.add(v)
            for w, eid, length in self._adj[v]:
                nd = d + length
                if nd < dist.get(w, math.inf):
                    dist[w] = nd
                    pred[w] = (v, eid)
                    heapq.heappush(heap, (nd, w))
        self._sp_cache[source] = (dist, pred)
        return dist, pred

    def vertex_distance(self, a: str, b: str) -> float:
        return self._single_source(a)[0][b]

    def _anchors(self, p: NetworkPoint) -> list[tuple[str, float]]:
        """Vertices reachable from ``p`` without leaving its carrier, with costs."""
        if p.is_vertex:
            return [(p.id, 0.0)]
        e = self.edge(p.id)
        return [(e.u, p.t), (e.v, e.length - p.t)]

    def distance(self, p: NetworkPoint, q: NetworkPoint) -> float:
        """Weighted shortest-path distance between two network points."""
        self.check_point(p)
        self.check_point(q)
        if p == q:
            return 0.0
        best = math.inf
        if not p.is_vertex and not q.is_vertex and p.id == q.id:
            best = abs(p.t - q.t)
        for a, ca in self._anchors(p):
            dist_a = self._single_source(a)[0]
            for b, cb in self._anchors(q):
                best = min(best, ca + dist_a[b] + cb)
        return best

    def shortest_path(self, p: NetworkPoint, q: NetworkPoint) -> "NetworkPath":
        """A path realizing :meth:`distance`; raises on identical points."""
        self.check_point(p)
        self.check_point(q)
        if p == q:
            raise GraphError("shortest_path requires distinct points")
        best = math.inf
        choice: tuple[str, float, str, float] | None = None
        if not p.is_vertex and not q.is_vertex and p.id == q.id:
            best = abs(p.t - q.t)
        for a, ca in self._anchors(p):
            dist_a = self._single_source(a)[0]
            for b, cb in self._anchors(q):
                w = ca + dist_a[b] + cb
                if w < best - 1e-15:
                    best = w
                    choice = (a, ca, b, cb)

        segments: list[PathSegment] = []
        vertices: list[str] = []
        if choice is None:
            # direct route along the shared edge
            segments.append(PathSegment(p.id, p.t, q.t))
            return NetworkPath(tuple(segments), best, ())

        a, ca, b, cb = choice
        if not p.is_vertex:
            e = self.edge(p.id)
            segments.append(PathSegment(p.id, p.t, 0.0 if a == e.u else e.length))
        vertices.append(a)
        _, pred = self._single_source(a)
        # reconstruct the vertex path a -> b
        chain: list[tuple[str, str]] = []  # (edge id, arrival vertex)
        v = b
        while v != a:
            u, eid = pred[v]
            chain.append((eid, v))
            v = u
        for eid, arrive in reversed(chain):
            e = self.edge(eid)
            if arrive == e.v:
                segments.append(PathSegment(eid, 0.0, e.length))
            else:
                segments.append(PathSegment(eid, e.length, 0.0))
            vertices.append(arrive)
        if not q.is_vertex:
            e = self.edge(q.id)
            segments.append(PathSegment(q.id, 0.0 if b == e.u else e.length, q.t))
        weight = sum(seg.length for seg in segments)
        return NetworkPath(tuple(segments), weight, tuple(vertices))

    def midpoint_on_path(self, p: NetworkPoint, q: NetworkPoint) -> NetworkPoint:
        """The point halfway along a shortest path from ``p`` to ``q``.

        Unique when the graph is a tree; otherwise taken along whichever
        shortest path :meth:`shortest_path` returns.
        """
        path = self.shortest_path(p, q)
        half = path.weight / 2.0
        acc = 0.0
        for seg in path.segments:
            if acc + seg.length >= half - 1e-15:
                frac = half - acc
                t = seg.t0 + math.copysign(frac, seg.t1 - seg.t0)
                return self.point(seg.edge_id, t)
            acc += seg.length
        # rounding pushed the midpoint past the last segment end
        last = path.segments[-1]
        return self.point(last.edge_id, last.t1)

    # ------------------------------------------------------------------
    # sampling
    # ------------------------------------------------------------------

    def sample_uniform(self, rng: np.random.Generator) -> NetworkPoint:
        """Uniform point on the network: edge by length, offset uniform."""
        total = self.total_length()
        if total <= 0:
            raise GraphError("cannot sample on a zero-length network")
        ids = self.edge_ids
        lengths = np.array([self._edges[eid].length for eid in ids])
        eid = ids[rng.choice(len(ids), p=lengths / total)]
        length = self._edges[eid].length
        t = 0.0
        while t <= 0.0 or t >= length:
            t = rng.uniform(0.0, length)
        return NetworkPoint.on_edge(eid, t)

    def sample_poisson(self, rate: float, rng: np.random.Generator) -> "Configuration":
        """Poisson process with the given rate per unit length."""
        if rate < 0:
            raise GraphError(f"rate must be nonnegative, got {rate}")
        pts: list[NetworkPoint] = []
        for e in self._edges.values():
            n = rng.poisson(rate * e.length)
            for _ in range(int(n)):
                t = 0.0
                while t <= 0.0 or t >= e.length:
                    t = rng.uniform(0.0, e.length)
                pts.append(NetworkPoint.on_edge(e.id, t))
        # ties have probability zero; resample any collision defensively
        while len(set(pts)) != len(pts):  # pragma: no cover
            seen: set[NetworkPoint] = set()
            for i, p in enumerate(pts):
                if p in seen:
                    e = self._edges[p.id]
                    pts[i] = NetworkPoint.on_edge(e.id, rng.uniform(0.0, e.length))
                seen.add(pts[i])
        return Configuration(pts)

    # ------------------------------------------------------------------
    # export
    # ------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [
                {"id": vid, **({"xy": list(xy)} if xy is not None else {})}
                for vid, xy in self._vertices.items()
            ],
            "edges": [
                {
                    "id": e.id,
                    "ends": [e.u, e.v],
                    "length": e.length,
                    **({"polyline": [list(p) for p in e.polyline]}
                       if e.polyline is not None else {}),
                }
                for e in self._edges.values()
            ],
        }


@dataclass(frozen=True)
class PathSegment:
    """Traversal of the stretch of one edge between two offsets."""

    edge_id: str
    t0: float
    t1: float

    @property
    def length(self) -> float:
        return abs(self.t1 - self.t0)


@dataclass(frozen=True)
class NetworkPath:
    """A simple path on the network together with its total weight.

    ``vertices`` lists the vertex ids traversed at segment junctions, in
    order (empty for a single-segment route inside one edge).
    """

    segments: tuple[PathSegment, ...]
    weight: float
    vertices: tuple[str, ...]


class Configuration:
    """A finite set of distinct network points, kept in sorted order."""

    __slots__ = ("_points",)

    def __init__(self, points: Iterable[NetworkPoint] = ()):
        pts = sorted(points, key=lambda p: (not p.is_vertex, p.id, p.t))
        if len(set(pts)) != len(pts):
            raise ValueError("configuration points must be pairwise distinct")
        self._points: tuple[NetworkPoint, ...] = tuple(pts)

    @property
    def points(self) -> tuple[NetworkPoint, ...]:
        return self._points

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[NetworkPoint]:
        return iter(self._points)

    def __getitem__(self, i: int) -> NetworkPoint:
        return self._points[i]

    def __contains__(self, p: NetworkPoint) -> bool:
        return p in self._points

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Configuration) and self._points == other._points

    def __hash__(self) -> int:
        return hash(self._points)

    def __repr__(self) -> str:
        return f"Configuration({list(self._points)!r})"

    def index(self, p: NetworkPoint) -> int:
        return self._points.index(p)

    def add(self, p: NetworkPoint) -> "Configuration":
        return Configuration(self._points + (p,))

    def remove(self, i: int) -> "Configuration":
        return Configuration(self._points[:i] + self._points[i + 1:])

    def subset(self, indices: Iterable[int]) -> "Configuration":
        return Configuration(self._points[i] for i in indices)

    def to_json(self) -> list[dict]:
        return [p.to_json() for p in self._points]


# ----------------------------------------------------------------------
# file formats
# ----------------------------------------------------------------------

def load_graph(document: str | dict) -> MetricGraph:
    """Parse the JSON graph format and return a validated graph.

    Each edge carries exactly one of ``length`` or ``polyline``; when only
    a polyline is given, the length is its arc length.
    """
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphError(f"graph document is not valid JSON: {exc}") from exc
    else:
        doc = document
    if not isinstance(doc, dict) or "vertices" not in doc or "edges" not in doc:
        raise GraphError("graph document must contain 'vertices' and 'edges'")
    vertices = []
    for rec in doc["vertices"]:
        xy = rec.get("xy")
        vertices.append((str(rec["id"]), tuple(xy) if xy is not None else None))
    edges = []
    for rec in doc["edges"]:
        ends = rec.get("ends")
        if not ends or len(ends) != 2:
            raise GraphError(f"edge {rec.get('id')!r} must list two endpoint ids")
        polyline = rec.get("polyline")
        length = rec.get("length")
        if length is None:
            if polyline is None:
                raise GraphError(
                    f"edge {rec.get('id')!r} needs 'length' or 'polyline'")
            length = _polyline_length(polyline)
        edges.append(Edge(
            id=str(rec["id"]),
            u=str(ends[0]),
            v=str(ends[1]),
            length=float(length),
            polyline=tuple(tuple(p) for p in polyline) if polyline else None,
        ))
    return MetricGraph(vertices, edges)


def load_graph_file(path) -> MetricGraph:
    with open(path) as fh:
        return load_graph(fh.read())


def load_configuration(document: str | list, graph: MetricGraph) -> Configuration:
    """Parse the configuration format, canonicalizing offsets against ``graph``."""
    records = json.loads(document) if isinstance(document, str) else document
    pts = []
    for rec in records:
        if "vertex" in rec:
            pts.append(graph.vertex_point(str(rec["vertex"])))
        else:
            pts.append(graph.point(str(rec["edge"]), float(rec["t"])))
    return Configuration(pts)
