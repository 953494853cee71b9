"""Mirror construction tying budget-1 steps to tree rootings.

Given a tree T on n nodes, build a graph on 2n nodes: the original tree, a
disjoint copy of it (node v copied to v + n), and a matching edge between
every node and its copy. The source tree is the original plus the matching;
the target tree is the copy plus the matching.

Moving between those two spanning trees in a single budget-1 step forces
every original edge to be deleted by one of its endpoints and every copy
edge to be added by one of its endpoints, one operation per node. The
delete side therefore picks, for each non-root node, the edge toward its
parent: valid steps correspond exactly to choices of a root and parent
assignment in T (independently on each side, n * n valid steps in total).
"""

from __future__ import annotations

from dataclasses import dataclass

from .algorithms import RootedTree, check_rooted_spanning
from .graph import Edge, EdgeSubset, Graph, _is_spanning_tree
from .reconfig import (
    NodeDecision,
    ReconfigStep,
    Schedule,
    ValidityReport,
    validate_schedule,
)


class ExtractionError(ValueError):
    """A step does not encode a rooting of the base tree."""

    def __init__(self, message: str, report: "ValidityReport | None" = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class GadgetInstance:
    """Base tree plus the doubled graph and its two spanning trees."""

    base: Graph
    graph: Graph
    t1: EdgeSubset
    t2: EdgeSubset

    @property
    def n(self) -> int:
        """Number of nodes of the base tree."""
        return self.base.n

    def copy_of(self, v: int) -> int:
        return v + self.base.n

    def original_of(self, v: int) -> int:
        if v < self.base.n:
            raise ValueError(f"node {v} is not a copy node")
        return v - self.base.n


def build_gadget(base: Graph) -> GadgetInstance:
    """Double a tree into the mirror instance. base must itself be a tree."""
    n = base.n
    if len(base.edges) != n - 1 or not _is_spanning_tree(n, base.edges):
        raise ValueError("base graph must be a tree")
    original = list(base.edges)
    mirrored = [(u + n, v + n) for u, v in original]
    matching = [(v, v + n) for v in range(n)]
    graph = Graph(2 * n, original + mirrored + matching)
    t1 = EdgeSubset(graph, original + matching)
    t2 = EdgeSubset(graph, mirrored + matching)
    return GadgetInstance(base, graph, t1, t2)


def step_from_rooting(inst: GadgetInstance, rooted: RootedTree) -> ReconfigStep:
    """Budget-1 step realizing a rooting: each non-root node deletes its
    parent edge, each non-root copy adds the mirrored one."""
    check_rooted_spanning(inst.base, rooted)
    n = inst.base.n
    decisions = []
    for v, p in sorted(rooted.parents.items()):
        e: Edge = (v, p) if v < p else (p, v)
        decisions.append(NodeDecision._unchecked(v, (), (e,)))
        decisions.append(NodeDecision._unchecked(v + n, ((e[0] + n, e[1] + n),), ()))
    return ReconfigStep._unchecked(1, tuple(sorted(decisions, key=lambda d: d.node)))


def extract_rooting(inst: GadgetInstance, step: ReconfigStep) -> RootedTree:
    """Read the rooting off a valid budget-1 step's delete side.

    Raises ExtractionError when the step is not a valid single-step
    reconfiguration of the instance (the report, if any, says why).
    """
    report = validate_schedule(inst.graph, inst.t1, inst.t2, Schedule(1, (step,)))
    if not report.valid:
        raise ExtractionError(f"step is not valid: {report.message()}", report)
    n = inst.base.n
    parents: dict[int, int] = {}
    for dec in step.decisions:
        if dec.node >= n:
            continue
        for u, v in dec.deletes:
            # validity guarantees the edge joins two originals
            parents[dec.node] = v if dec.node == u else u
    roots = [v for v in range(n) if v not in parents]
    if len(roots) != 1:
        raise ExtractionError(f"delete side names {len(roots)} roots, expected 1")
    rooted = RootedTree(roots[0], parents)
    check_rooted_spanning(inst.base, rooted)
    return rooted
