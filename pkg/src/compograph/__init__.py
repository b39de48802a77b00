"""Graph-based service composition: matchmaking, forward-chaining composition, layered execution."""

from .composer import (
    SINK,
    SOURCE,
    CompositionGraph,
    InteractionGraph,
    RelationKind,
    Unsatisfiable,
    build_interaction_graph,
    compose,
    reachable_closure,
    relation,
)
from .matcher import (
    MatchDegree,
    SimilarityScore,
    SubRequest,
    best_match,
    discover,
    match_degree,
    similarity,
    syntactic_approx,
    syntactic_equal,
    world_score,
)
from .model import (
    Request,
    ServiceDescriptor,
    Taxonomy,
    Violation,
    WorldState,
    concept_satisfies,
    validate_descriptor,
)
from .planner import ExecutionPlan, SimulationTrace, execution_order, simulate
from .registry import Registry, RegistryError, load_registry, publish_composite

__all__ = [
    "SINK",
    "SOURCE",
    "CompositionGraph",
    "ExecutionPlan",
    "InteractionGraph",
    "MatchDegree",
    "Registry",
    "RegistryError",
    "RelationKind",
    "Request",
    "ServiceDescriptor",
    "SimilarityScore",
    "SimulationTrace",
    "SubRequest",
    "Taxonomy",
    "Unsatisfiable",
    "Violation",
    "WorldState",
    "best_match",
    "build_interaction_graph",
    "compose",
    "concept_satisfies",
    "discover",
    "execution_order",
    "load_registry",
    "match_degree",
    "publish_composite",
    "reachable_closure",
    "relation",
    "similarity",
    "simulate",
    "syntactic_approx",
    "syntactic_equal",
    "validate_descriptor",
    "world_score",
]
