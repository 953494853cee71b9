"""Spanning tree reconfiguration in simultaneous steps.

A round-based message-passing simulator, protocols that move between two
spanning trees of the same network in a single step under a per-node
edge-change budget, and a validation harness for such steps.
"""

from .algorithms import (
    Orientation,
    RootedTree,
    ceil_log_3_2,
    check_rooted_spanning,
    max_orient_iterations,
    orient,
    orient_distributed,
    root_tree_centralized,
    rooted_reconfigure,
    two_sim_reconfigure,
)
from .gadget import ExtractionError, GadgetInstance, build_gadget, extract_rooting, step_from_rooting
from .graph import (
    Edge,
    EdgeNotInGraph,
    EdgeSubset,
    Graph,
    GraphError,
    all_labeled_trees,
    edge,
    random_spanning_tree_pair,
    random_tree,
    read_edge_subset,
    read_graph,
    tree_edges_from_prufer,
    validate_spanning_tree,
    write_edge_subset,
    write_graph,
)
from .reconfig import (
    AddAlreadyPresent,
    AddNotInGraph,
    DeleteMissing,
    EdgeClaimConflict,
    NodeDecision,
    ReconfigStep,
    Schedule,
    StepError,
    ValidityReport,
    apply_step,
    enumerate_one_step_schedules,
    read_schedule,
    schedule_from_json,
    schedule_to_json,
    validate_schedule,
    write_schedule,
)
from .sim import (
    CONGEST,
    LOCAL,
    CongestViolation,
    Message,
    NodeProgram,
    ProtocolError,
    RoundLimitExceeded,
    SimError,
    SimTrace,
    congest_budget,
    default_round_limit,
    id_bits,
    message_bits,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "AddAlreadyPresent",
    "AddNotInGraph",
    "CONGEST",
    "CongestViolation",
    "DeleteMissing",
    "Edge",
    "EdgeClaimConflict",
    "EdgeNotInGraph",
    "EdgeSubset",
    "ExtractionError",
    "GadgetInstance",
    "Graph",
    "GraphError",
    "LOCAL",
    "Message",
    "NodeDecision",
    "NodeProgram",
    "Orientation",
    "ProtocolError",
    "ReconfigStep",
    "RootedTree",
    "RoundLimitExceeded",
    "Schedule",
    "SimError",
    "SimTrace",
    "StepError",
    "ValidityReport",
    "all_labeled_trees",
    "apply_step",
    "build_gadget",
    "ceil_log_3_2",
    "check_rooted_spanning",
    "congest_budget",
    "default_round_limit",
    "edge",
    "enumerate_one_step_schedules",
    "extract_rooting",
    "id_bits",
    "max_orient_iterations",
    "message_bits",
    "orient",
    "orient_distributed",
    "random_spanning_tree_pair",
    "random_tree",
    "read_edge_subset",
    "read_graph",
    "read_schedule",
    "root_tree_centralized",
    "rooted_reconfigure",
    "run",
    "schedule_from_json",
    "schedule_to_json",
    "step_from_rooting",
    "tree_edges_from_prufer",
    "two_sim_reconfigure",
    "validate_schedule",
    "validate_spanning_tree",
    "write_edge_subset",
    "write_graph",
    "write_schedule",
]
