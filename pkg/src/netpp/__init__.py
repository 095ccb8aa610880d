"""Point processes on metric graphs.

Shortest-path geometry on networks of weighted edges, network Voronoi
partitions with global and local Delaunay-type neighbour relations,
pairwise-interaction Gibbs models with a birth-death sampler, and an
executable verification harness with brute-force oracles.
"""

from netpp.geometry import (
    EPS, Configuration, Edge, GraphError, MetricGraph, NetworkPath,
    NetworkPoint, PathSegment, load_configuration, load_graph,
    load_graph_file)
from netpp.envelope import PiecewiseLinearFn, distance_profile
from netpp.voronoi import (
    Relation, VoronoiPartition, Witness, delaunay_relation, edge_adjacency,
    in_general_position, local_delaunay_relation, neighbor_witness,
    relation_of_kind, voronoi_partition)
from netpp.model import (
    Constant, HardCore, InteractionModel, PairInteraction, SamplerState,
    SoftCore, Strauss, Trace, birth_death_step, log_density, papangelou,
    run_sampler)
from netpp.lab import (
    AuditReport, brute_force_distance, check_c1, check_c2, check_hereditary,
    grid_voronoi_oracle, random_graph, random_tree,
    reproduce_triangle_counterexample)
from netpp.kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "EPS", "GraphError", "NetworkPoint", "Edge", "MetricGraph",
    "Configuration", "PathSegment", "NetworkPath",
    "load_graph", "load_graph_file", "load_configuration",
    "PiecewiseLinearFn", "distance_profile",
    "Relation", "VoronoiPartition", "Witness",
    "voronoi_partition", "delaunay_relation", "local_delaunay_relation",
    "neighbor_witness", "in_general_position", "edge_adjacency",
    "relation_of_kind",
    "PairInteraction", "Constant", "Strauss", "HardCore", "SoftCore",
    "InteractionModel", "SamplerState", "Trace",
    "log_density", "papangelou", "birth_death_step", "run_sampler",
    "AuditReport", "brute_force_distance", "grid_voronoi_oracle",
    "check_c1", "check_c2", "check_hereditary",
    "random_tree", "random_graph", "reproduce_triangle_counterexample",
    "KERNEL_BACKEND",
]
