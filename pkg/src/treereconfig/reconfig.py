"""Simultaneous reconfiguration steps between spanning trees.

A step is a set of per-node decisions, each adding at most k and deleting at
most k edges incident to that node, with no edge touched by two nodes. A
schedule is valid when every step applies cleanly, every intermediate edge set
is again a spanning tree, and the final set equals the target tree exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .graph import Edge, EdgeSubset, Graph, edge as canonical_edge


class StepError(Exception):
    """A decision could not be applied; names the offending node and edge."""

    rule = "step"

    def __init__(self, node: int, e: Edge, msg: str):
        super().__init__(f"node {node}, edge {e}: {msg}")
        self.node = node
        self.edge = e


class DeleteMissing(StepError):
    rule = "delete_missing"

    def __init__(self, node: int, e: Edge):
        super().__init__(node, e, "delete of an edge not in the current tree")


class AddAlreadyPresent(StepError):
    rule = "add_present"

    def __init__(self, node: int, e: Edge):
        super().__init__(node, e, "add of an edge already in the current tree")


class AddNotInGraph(StepError):
    rule = "add_not_in_graph"

    def __init__(self, node: int, e: Edge):
        super().__init__(node, e, "add of an edge the network does not have")


class EdgeClaimConflict(StepError):
    rule = "claim_conflict"

    def __init__(self, node: int, e: Edge, other: int):
        super().__init__(node, e, f"edge already claimed by node {other}")
        self.other_node = other


class NodeDecision:
    """One node's part of a step: sorted tuples of added and deleted edges."""

    __slots__ = ("node", "adds", "deletes")

    def __init__(self, node: int, adds=(), deletes=()):
        if node < 0:
            raise ValueError(f"bad node id {node}")
        adds = tuple(sorted(canonical_edge(u, v) for u, v in adds))
        deletes = tuple(sorted(canonical_edge(u, v) for u, v in deletes))
        for e in adds + deletes:
            if e[0] != node and e[1] != node:
                raise ValueError(f"node {node} claims non-incident edge {e}")
        if len(set(adds)) != len(adds) or len(set(deletes)) != len(deletes):
            raise ValueError(f"node {node} repeats an edge claim")
        if set(adds) & set(deletes):
            raise ValueError(f"node {node} adds and deletes the same edge")
        self.node = node
        self.adds = adds
        self.deletes = deletes

    @classmethod
    def _unchecked(cls, node: int, adds: tuple, deletes: tuple) -> "NodeDecision":
        d = object.__new__(cls)
        d.node = node
        d.adds = adds
        d.deletes = deletes
        return d

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NodeDecision)
            and self.node == other.node
            and self.adds == other.adds
            and self.deletes == other.deletes
        )

    def __hash__(self) -> int:
        return hash((self.node, self.adds, self.deletes))

    def __repr__(self) -> str:
        return f"NodeDecision(node={self.node}, adds={self.adds}, deletes={self.deletes})"


class ReconfigStep:
    """One simultaneous step: budget k plus at most one decision per node.

    Construction enforces only per-node structural sanity; budget and
    cross-node edge-claim uniqueness are judged by apply_step and
    validate_schedule so that ill-formed steps can be represented and
    reported rather than being unconstructible.
    """

    __slots__ = ("k", "decisions")

    def __init__(self, k: int, decisions=()):
        if k < 0:
            raise ValueError(f"budget k must be >= 0, got {k}")
        kept = tuple(
            sorted((d for d in decisions if d.adds or d.deletes), key=lambda d: d.node)
        )
        seen = set()
        for d in kept:
            if d.node in seen:
                raise ValueError(f"two decisions for node {d.node}")
            seen.add(d.node)
        self.k = k
        self.decisions = kept

    @classmethod
    def _unchecked(cls, k: int, decisions: tuple) -> "ReconfigStep":
        s = object.__new__(cls)
        s.k = k
        s.decisions = decisions
        return s

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ReconfigStep)
            and self.k == other.k
            and self.decisions == other.decisions
        )

    def __hash__(self) -> int:
        return hash((self.k, self.decisions))

    def __repr__(self) -> str:
        return f"ReconfigStep(k={self.k}, decisions={list(self.decisions)})"


class Schedule:
    """An ordered list of steps sharing one budget k."""

    __slots__ = ("k", "steps")

    def __init__(self, k: int, steps=()):
        if k < 0:
            raise ValueError(f"budget k must be >= 0, got {k}")
        self.k = k
        self.steps = tuple(steps)

    def __eq__(self, other) -> bool:
        return isinstance(other, Schedule) and self.k == other.k and self.steps == other.steps

    def __hash__(self) -> int:
        return hash((self.k, self.steps))

    def __repr__(self) -> str:
        return f"Schedule(k={self.k}, steps={len(self.steps)})"


def apply_step(g: Graph, current: EdgeSubset, step: ReconfigStep) -> EdgeSubset:
    """Apply one step atomically: all checks against the pre-step edge set.

    Raises DeleteMissing, AddAlreadyPresent, AddNotInGraph, or
    EdgeClaimConflict. Makes no spanning-tree judgment.
    """
    cur = current.edges
    g_edges = g.edges
    claimed: dict[Edge, int] = {}
    deletes = []
    adds = []
    for d in step.decisions:
        node = d.node
        for e in d.deletes:
            prev = claimed.setdefault(e, node)
            if prev != node:
                raise EdgeClaimConflict(node, e, prev)
            if e not in cur:
                raise DeleteMissing(node, e)
            deletes.append(e)
        for e in d.adds:
            prev = claimed.setdefault(e, node)
            if prev != node:
                raise EdgeClaimConflict(node, e, prev)
            if e in cur:
                raise AddAlreadyPresent(node, e)
            if e not in g_edges:
                raise AddNotInGraph(node, e)
            adds.append(e)
    out = set(cur)
    out.difference_update(deletes)
    out.update(adds)
    return EdgeSubset._unchecked(g, frozenset(out))


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of validate_schedule; invalid reports carry the first failure."""

    valid: bool
    step_index: "int | None" = None
    rule: "str | None" = None
    node: "int | None" = None
    edge: "Edge | None" = None
    detail: "dict | None" = None

    def message(self) -> str:
        if self.valid:
            return "VALID"
        parts = [f"INVALID at step {self.step_index}: {self.rule}"]
        if self.node is not None:
            parts.append(f"node {self.node}")
        if self.edge is not None:
            parts.append(f"edge {self.edge}")
        if self.detail:
            parts.append(repr(self.detail))
        return ", ".join(parts)

    def to_json(self) -> str:
        if self.valid:
            return '{"valid":true}\n'
        obj: dict = {"valid": False, "step": self.step_index, "rule": self.rule}
        if self.node is not None:
            obj["node"] = self.node
        if self.edge is not None:
            obj["edge"] = list(self.edge)
        if self.detail is not None:
            obj["detail"] = self.detail
        return json.dumps(obj, separators=(",", ":")) + "\n"


_VALID = ValidityReport(True)


def _components(n: int, edges) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    frontier.append(y)
        comps.append(sorted(comp))
    return comps


def _cycle_certificate(n: int, edges) -> "list[Edge] | None":
    # First edge that closes a cycle, plus the tree path between its endpoints.
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    kept: list[Edge] = []
    for e in sorted(edges):
        ra, rb = find(e[0]), find(e[1])
        if ra == rb:
            adj: dict[int, list[int]] = {}
            for u, v in kept:
                adj.setdefault(u, []).append(v)
                adj.setdefault(v, []).append(u)
            prev = {e[0]: e[0]}
            frontier = [e[0]]
            while frontier and e[1] not in prev:
                nxt = []
                for x in frontier:
                    for y in adj.get(x, ()):
                        if y not in prev:
                            prev[y] = x
                            nxt.append(y)
                frontier = nxt
            path = [e[1]]
            while path[-1] != e[0]:
                path.append(prev[path[-1]])
            cyc = [canonical_edge(path[i], path[i + 1]) for i in range(len(path) - 1)]
            cyc.append(e)
            return cyc
        parent[ra] = rb
        kept.append(e)
    return None


def _not_spanning_detail(n: int, cur: set) -> dict:
    if len(cur) != n - 1:
        comps = _components(n, cur)
        detail: dict = {"edge_count": len(cur), "expected": n - 1}
        if len(comps) > 1:
            detail["cut"] = min(comps, key=len)
        return detail
    cyc = _cycle_certificate(n, cur)
    return {"cycle": [list(e) for e in cyc or []]}


def validate_schedule(g: Graph, t1: EdgeSubset, t2: EdgeSubset, sched: Schedule) -> ValidityReport:
    """Judge a schedule from t1 to t2 on g; never raises on bad schedules.

    VALID iff every step respects the budget k, incidence, and edge-claim
    uniqueness, applies cleanly, leaves a spanning tree after every step, and
    the final edge set equals t2 exactly. The first failure is reported with
    a witness; spanning failures carry a cut or cycle certificate.
    """
    if not validate_spanning_tree_of(g, t1):
        raise ValueError("t1 is not a spanning tree of g")
    if not validate_spanning_tree_of(g, t2):
        raise ValueError("t2 is not a spanning tree of g")
    n = g.n
    k = sched.k
    g_edges = g.edges
    cur = set(t1.edges)
    target = t2.edges
    idx = -1
    for idx, step in enumerate(sched.steps):
        claimed: dict[Edge, bool] = {}
        for d in step.decisions:
            node = d.node
            adds = d.adds
            deletes = d.deletes
            if len(adds) > k or len(deletes) > k:
                return ValidityReport(
                    False, idx, "budget", node=node,
                    detail={"adds": len(adds), "deletes": len(deletes), "k": k},
                )
            for e in deletes:
                if e[0] != node and e[1] != node:
                    return ValidityReport(False, idx, "incidence", node=node, edge=e)
                if e in claimed:
                    return ValidityReport(False, idx, "claim_conflict", node=node, edge=e)
                claimed[e] = False
                if e not in cur:
                    return ValidityReport(False, idx, "delete_missing", node=node, edge=e)
            for e in adds:
                if e[0] != node and e[1] != node:
                    return ValidityReport(False, idx, "incidence", node=node, edge=e)
                if e in claimed:
                    return ValidityReport(False, idx, "claim_conflict", node=node, edge=e)
                claimed[e] = True
                if e in cur:
                    return ValidityReport(False, idx, "add_present", node=node, edge=e)
                if e not in g_edges:
                    return ValidityReport(False, idx, "add_not_in_graph", node=node, edge=e)
        for e, is_add in claimed.items():
            if is_add:
                cur.add(e)
            else:
                cur.discard(e)
        if len(cur) != n - 1 or not _spans(n, cur):
            return ValidityReport(
                False, idx, "not_spanning", detail=_not_spanning_detail(n, cur)
            )
    if cur != target:
        missing = sorted(target - cur)
        extra = sorted(cur - target)
        return ValidityReport(
            False, idx if idx >= 0 else None, "final_mismatch",
            detail={
                "missing": [list(e) for e in missing],
                "extra": [list(e) for e in extra],
            },
        )
    return _VALID


def _spans(n: int, edges) -> bool:
    parent = list(range(n))
    for u, v in edges:
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        if u == v:
            return False
        parent[u] = v
    return True


def validate_spanning_tree_of(g: Graph, s: EdgeSubset) -> bool:
    if s.graph is g:
        return s.is_spanning_tree()
    if not s.edges <= g.edges:
        return False
    return len(s.edges) == g.n - 1 and _spans(g.n, s.edges)


def enumerate_one_step_schedules(
    g: Graph, t1: EdgeSubset, t2: EdgeSubset, k: int, cap: int = 8
) -> list[ReconfigStep]:
    """All valid single steps from t1 to t2 with budget k.

    Every edge of the symmetric difference is assigned to one of its two
    endpoints (lower endpoint branch first), and assignments violating a
    per-node budget are pruned. Any surviving assignment turns t1 into t2
    exactly, so the result is the complete set of valid one-step schedules.
    Exhaustive, hence capped: raises ValueError when g has more than cap nodes.
    """
    if g.n > cap:
        raise ValueError(
            f"exhaustive enumeration is capped at {cap} nodes, got n={g.n}; "
            f"raise cap explicitly for larger instances"
        )
    if not validate_spanning_tree_of(g, t1):
        raise ValueError("t1 is not a spanning tree of g")
    if not validate_spanning_tree_of(g, t2):
        raise ValueError("t2 is not a spanning tree of g")
    dels = sorted(t1.edges - t2.edges)
    adds = sorted(t2.edges - t1.edges)
    nd = len(dels)
    edges = dels + adds
    total = len(edges)
    n = g.n
    del_load = [0] * n
    add_load = [0] * n
    owner = [0] * total
    out: list[ReconfigStep] = []
    decision_cache: dict[tuple, NodeDecision] = {}

    def emit() -> None:
        per_node: dict[int, tuple[list, list]] = {}
        for i in range(nd):
            per_node.setdefault(owner[i], ([], []))[1].append(edges[i])
        for i in range(nd, total):
            per_node.setdefault(owner[i], ([], []))[0].append(edges[i])
        decisions = []
        for node in sorted(per_node):
            a, d = per_node[node]
            key = (node, tuple(a), tuple(d))
            dec = decision_cache.get(key)
            if dec is None:
                dec = NodeDecision._unchecked(node, key[1], key[2])
                decision_cache[key] = dec
            decisions.append(dec)
        out.append(ReconfigStep._unchecked(k, tuple(decisions)))

    def assign(i: int) -> None:
        if i == total:
            emit()
            return
        u, v = edges[i]
        load = del_load if i < nd else add_load
        if load[u] < k:
            load[u] += 1
            owner[i] = u
            assign(i + 1)
            load[u] -= 1
        if load[v] < k:
            load[v] += 1
            owner[i] = v
            assign(i + 1)
            load[v] -= 1

    assign(0)
    return out


def schedule_to_json(sched: Schedule) -> str:
    """Canonical schedule serialization; identical schedules give identical bytes."""
    obj = {
        "k": sched.k,
        "steps": [
            {
                "decisions": [
                    {
                        "node": d.node,
                        "adds": [list(e) for e in d.adds],
                        "deletes": [list(e) for e in d.deletes],
                    }
                    for d in step.decisions
                ]
            }
            for step in sched.steps
        ],
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"


def schedule_from_json(text: str) -> Schedule:
    """Parse the schedule format written by schedule_to_json."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"bad schedule JSON: {exc}") from exc
    if not isinstance(obj, dict) or "k" not in obj or "steps" not in obj:
        raise ValueError("schedule JSON needs top-level 'k' and 'steps'")
    k = obj["k"]
    if not isinstance(k, int):
        raise ValueError(f"schedule k must be an integer, got {k!r}")
    steps = []
    for s in obj["steps"]:
        decisions = []
        for d in s["decisions"]:
            decisions.append(
                NodeDecision(
                    d["node"],
                    [tuple(e) for e in d.get("adds", [])],
                    [tuple(e) for e in d.get("deletes", [])],
                )
            )
        steps.append(ReconfigStep(k, decisions))
    return Schedule(k, steps)


def write_schedule(sched: Schedule, path: str) -> None:
    with open(path, "w") as f:
        f.write(schedule_to_json(sched))


def read_schedule(path: str) -> Schedule:
    with open(path) as f:
        return schedule_from_json(f.read())
