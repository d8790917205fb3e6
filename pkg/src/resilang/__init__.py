"""Resilience design-pattern language toolkit.

A machine-readable catalog of resilience design patterns, the typed
relation graph that turns the catalog into a language, a synthesis engine
that derives ranked solution candidates from design queries, a parametric
cost model, and a discrete-event fault-injection simulator for design
space exploration.
"""

__version__ = "0.1.0"

from .catalog import (
    Capability,
    Catalog,
    FaultModelClass,
    Pattern,
    PatternClass,
    builtin_catalog,
    catalog_to_json,
    load_catalog,
    validate_catalog,
)
from .costmodel import (
    CostVector,
    CostWeights,
    aggregate_cost,
    instance_cost,
    majority_masking_capacity,
    score,
)
from .graph import (
    EdgeOrigin,
    EdgeOverlay,
    PatternGraph,
    RelationEdge,
    RelationKind,
    ancestry,
    build_language_graph,
    export_dot,
    export_graph_json,
    graph_from_json,
    neighbors,
    validate_graph,
)
from .simulator import (
    AnalyticEstimate,
    SimConfig,
    SimReport,
    SimSolution,
    SweepTable,
    analytic_checkpoint_model,
    run_simulation,
    sweep,
)
from .synthesis import (
    DesignQuery,
    EntryMode,
    PatternInstance,
    SolutionCandidate,
    UnsatisfiableQueryError,
    check_compatibility,
    explain,
    synthesize,
)
from .system import InterarrivalModel, SystemModel, Workload

__all__ = [
    "__version__",
    "Capability",
    "Catalog",
    "FaultModelClass",
    "Pattern",
    "PatternClass",
    "builtin_catalog",
    "catalog_to_json",
    "load_catalog",
    "validate_catalog",
    "CostVector",
    "CostWeights",
    "aggregate_cost",
    "instance_cost",
    "majority_masking_capacity",
    "score",
    "EdgeOrigin",
    "EdgeOverlay",
    "PatternGraph",
    "RelationEdge",
    "RelationKind",
    "ancestry",
    "build_language_graph",
    "export_dot",
    "export_graph_json",
    "graph_from_json",
    "neighbors",
    "validate_graph",
    "AnalyticEstimate",
    "SimConfig",
    "SimReport",
    "SimSolution",
    "SweepTable",
    "analytic_checkpoint_model",
    "run_simulation",
    "sweep",
    "DesignQuery",
    "EntryMode",
    "PatternInstance",
    "SolutionCandidate",
    "UnsatisfiableQueryError",
    "check_compatibility",
    "explain",
    "synthesize",
    "InterarrivalModel",
    "SystemModel",
    "Workload",
]
