"""Tree orientation and one-step reconfiguration protocols.

Orientation peels a tree: every round, all nodes of residual degree <= 2 leave
together, orienting their remaining edges outward; an edge between two nodes
leaving in the same round goes to the lower id. Each node ends up with
out-degree at most 2, and at least a third of the surviving nodes leave per
round, so the number of rounds is logarithmic.

The reconfiguration protocols build on that: the rooted variant swaps parent
edges in a single communication round with budget 1; the unrooted variant
orients both trees and trades outgoing edges with budget 2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph import Edge, EdgeSubset, Graph, edge as canonical_edge
from .reconfig import NodeDecision, ReconfigStep, Schedule
from .sim import CONGEST, Message, NodeProgram, SimTrace, run


def ceil_log_3_2(n: int) -> int:
    """Smallest k with (3/2)**k >= n, computed exactly."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    k = 0
    num = 1
    den = 1
    while num < n * den:
        k += 1
        num *= 3
        den *= 2
    return k


def max_orient_iterations(n: int) -> int:
    """Guaranteed ceiling on peeling rounds for an n-node tree."""
    return ceil_log_3_2(n) + 1


@dataclass
class Orientation:
    """Directed version of a tree plus the peeling history that produced it.

    directions maps each canonical tree edge to its (tail, head) pair.
    removal_log[i] holds the nodes peeled in round i+1; the sets partition
    the node set.
    """

    tree: EdgeSubset
    directions: dict[Edge, tuple[int, int]]
    removal_log: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.removal_log)

    def out_degrees(self) -> list[int]:
        out = [0] * self.tree.graph.n
        for tail, _ in self.directions.values():
            out[tail] += 1
        return out

    def to_json(self) -> str:
        edges = [list(self.directions[e]) for e in sorted(self.directions)]
        return (
            json.dumps({"iterations": self.iterations, "edges": edges}, separators=(",", ":"))
            + "\n"
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Orientation)
            and self.directions == other.directions
            and self.removal_log == other.removal_log
        )


def orient(t: EdgeSubset) -> Orientation:
    """Centralized peeling orientation of a spanning tree (lower id wins ties)."""
    if not t.is_spanning_tree():
        raise ValueError("t is not a spanning tree of its graph")
    n = t.graph.n
    if t.edges is t.graph.edges or t.edges == t.graph.edges:
        adj: "list[tuple[int, ...]] | list[list[int]]" = t.graph._adj
    else:
        adj = [[] for _ in range(n)]
        for u, v in t.edges:
            adj[u].append(v)
            adj[v].append(u)
    deg = [len(a) for a in adj]
    mark = [0] * n  # generation a node peels in; 0 while alive
    current: "list[int] | range" = range(n)
    directions: dict[Edge, tuple[int, int]] = {}
    removal_log: list[tuple[int, ...]] = []
    gen = 0
    while True:
        gen += 1
        peel = [v for v in current if deg[v] <= 2]
        assert peel, "a forest always has a node of degree <= 2"
        for v in peel:
            mark[v] = gen
        for v in peel:
            for u in adj[v]:
                mu = mark[u]
                if mu == 0:
                    # u stays: v orients outward and u drops a residual degree
                    directions[(v, u) if v < u else (u, v)] = (v, u)
                    deg[u] -= 1
                elif mu == gen and v < u:
                    # u peels together with v; the lower id owns the edge
                    directions[(v, u)] = (v, u)
        removal_log.append(tuple(peel))
        if len(peel) == len(current):
            break
        current = [v for v in current if mark[v] == 0]
    return Orientation(t, directions, removal_log)


class _OrientState:
    __slots__ = ("node", "alive", "announced", "targets", "iteration", "round")

    def __init__(self, node: int, alive: set):
        self.node = node
        self.alive = alive
        self.announced = False
        self.targets: tuple = ()
        self.iteration = 0
        self.round = 0


class _OrientProgram(NodeProgram):
    """Distributed peeling: announce removal at degree <= 2, then settle ties.

    A node leaving in round r sends a tag-only "rm" to each neighbor still
    alive; in round r+1 the announcements of neighbors that left in the same
    round are in its inbox, which is exactly what the lower-id tie-break
    needs. Nothing is ever sent to a node that has already halted: everyone
    drops a neighbor from its alive set before that neighbor stops listening.
    """

    def init(self, node, t1_edges, t2_edges, neighbors):
        alive = {u if v == node else v for u, v in t1_edges}
        return _OrientState(node, alive)

    def round(self, st, inbox):
        st.round += 1
        if st.announced:
            partners = {m.sender for m in inbox}
            node = st.node
            owned = [
                [node, u] for u in st.targets if u not in partners or node < u
            ]
            return st, None, True, {"iter": st.iteration, "edges": owned}
        if inbox:
            alive = st.alive
            for m in inbox:
                alive.discard(m.sender)
        if len(st.alive) <= 2:
            st.announced = True
            st.iteration = st.round
            st.targets = tuple(sorted(st.alive))
            if not st.targets:
                return st, None, True, {"iter": st.iteration, "edges": []}
            node = st.node
            out = {u: Message(node, "rm") for u in st.targets}
            return st, out, False, None
        return st, None, False, None


def orient_distributed(
    g: Graph,
    t: EdgeSubset,
    *,
    mode: str = CONGEST,
    round_limit: "int | None" = None,
    eval_seed: "int | None" = None,
) -> tuple[Orientation, SimTrace]:
    """Distributed peeling orientation; matches orient(t) edge for edge."""
    if not t.is_spanning_tree():
        raise ValueError("t is not a spanning tree of its graph")
    trace = run(
        g, _OrientProgram(), t1=t, mode=mode, round_limit=round_limit, eval_seed=eval_seed
    )
    directions: dict[Edge, tuple[int, int]] = {}
    by_iter: dict[int, list[int]] = {}
    for v, outp in enumerate(trace.outputs):
        by_iter.setdefault(outp["iter"], []).append(v)
        for tail, head in outp["edges"]:
            e = (tail, head) if tail < head else (head, tail)
            if e in directions:
                raise AssertionError(f"edge {e} oriented twice")
            directions[e] = (tail, head)
    if len(directions) != len(t.edges):
        raise AssertionError("orientation does not cover the tree")
    iters = sorted(by_iter)
    if iters != list(range(1, len(iters) + 1)):
        raise AssertionError(f"non-contiguous removal rounds {iters}")
    removal_log = [tuple(sorted(by_iter[i])) for i in iters]
    return Orientation(t, directions, removal_log), trace


@dataclass(frozen=True)
class RootedTree:
    """A spanning tree with parent pointers toward a root (root has none)."""

    root: int
    parents: dict[int, int]

    def __post_init__(self):
        if self.root in self.parents:
            raise ValueError(f"root {self.root} must not have a parent")
        for v, p in self.parents.items():
            if v == p:
                raise ValueError(f"node {v} is its own parent")

    def __hash__(self):
        return hash((self.root, tuple(sorted(self.parents.items()))))

    def edges(self) -> list[Edge]:
        return sorted(canonical_edge(v, p) for v, p in self.parents.items())

    def parent_edge(self, v: int) -> "Edge | None":
        p = self.parents.get(v)
        return None if p is None else canonical_edge(v, p)


def check_rooted_spanning(g: Graph, rt: RootedTree) -> None:
    """Raise ValueError unless rt is a rooted spanning tree of g."""
    n = g.n
    if not 0 <= rt.root < n:
        raise ValueError(f"root {rt.root} out of range for n={n}")
    if set(rt.parents) | {rt.root} != set(range(n)) or len(rt.parents) != n - 1:
        raise ValueError("parent map must cover every node except the root")
    edges = rt.edges()
    for e in edges:
        if e not in g.edges:
            raise ValueError(f"parent edge {e} is not an edge of g")
    sub = EdgeSubset._unchecked(g, frozenset(edges))
    if not sub.is_spanning_tree():
        raise ValueError("parent edges do not form a spanning tree")


def root_tree_centralized(t: EdgeSubset, root: int) -> RootedTree:
    """Root a spanning tree by BFS. Centralized on purpose: it is the fixture
    that hands the rooted protocol its input, not part of the protocol."""
    if not t.is_spanning_tree():
        raise ValueError("t is not a spanning tree of its graph")
    n = t.graph.n
    if not 0 <= root < n:
        raise ValueError(f"root {root} out of range for n={n}")
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in t.edges:
        adj[u].append(v)
        adj[v].append(u)
    parents: dict[int, int] = {}
    seen = [False] * n
    seen[root] = True
    frontier = [root]
    while frontier:
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    parents[y] = x
                    nxt.append(y)
        frontier = nxt
    return RootedTree(root, parents)


class _RootedState:
    __slots__ = ("node", "p1", "p2", "del_edge", "add_edge", "sent")

    def __init__(self, node, p1, p2, del_edge, add_edge):
        self.node = node
        self.p1 = p1
        self.p2 = p2
        self.del_edge = del_edge
        self.add_edge = add_edge
        self.sent = False


class _RootedProgram(NodeProgram):
    """Budget-1 swap of parent edges in one communication round.

    Round 1: every non-root node claims "delete my old parent edge" toward
    its old parent and "add my new parent edge" toward its new parent; a node
    whose two parent edges coincide claims nothing. After the exchange, a
    claim is withdrawn when the neighbor across that edge claimed the
    opposite operation on it, which happens exactly on edges both trees share
    with flipped child roles, so shared edges stay untouched on both sides.
    """

    def __init__(self, parents1: dict, parents2: dict):
        self._p1 = parents1
        self._p2 = parents2

    def init(self, node, t1_edges, t2_edges, neighbors):
        p1 = self._p1.get(node)
        p2 = self._p2.get(node)
        del_edge = None if p1 is None else canonical_edge(node, p1)
        add_edge = None if p2 is None else canonical_edge(node, p2)
        if del_edge is not None and del_edge == add_edge:
            del_edge = add_edge = None
        return _RootedState(node, p1, p2, del_edge, add_edge)

    def round(self, st, inbox):
        if not st.sent:
            st.sent = True
            out = {}
            if st.del_edge is not None:
                out[st.p1] = Message(st.node, "del")
            if st.add_edge is not None:
                out[st.p2] = Message(st.node, "add")
            return st, out or None, False, None
        del_edge = st.del_edge
        add_edge = st.add_edge
        for m in inbox:
            if m.tag == "add" and m.sender == st.p1:
                del_edge = None
            elif m.tag == "del" and m.sender == st.p2:
                add_edge = None
        output = {
            "adds": [] if add_edge is None else [list(add_edge)],
            "deletes": [] if del_edge is None else [list(del_edge)],
        }
        return st, None, True, output


def rooted_reconfigure(
    g: Graph,
    t1: RootedTree,
    t2: RootedTree,
    *,
    mode: str = CONGEST,
    round_limit: "int | None" = None,
    eval_seed: "int | None" = None,
) -> tuple[Schedule, SimTrace]:
    """One-round, budget-1 reconfiguration between two rooted spanning trees."""
    check_rooted_spanning(g, t1)
    check_rooted_spanning(g, t2)
    sub1 = EdgeSubset._unchecked(g, frozenset(t1.edges()))
    sub2 = EdgeSubset._unchecked(g, frozenset(t2.edges()))
    program = _RootedProgram(t1.parents, t2.parents)
    trace = run(
        g, program, t1=sub1, t2=sub2, mode=mode, round_limit=round_limit, eval_seed=eval_seed
    )
    decisions = []
    for v, outp in enumerate(trace.outputs):
        if outp["adds"] or outp["deletes"]:
            decisions.append(
                NodeDecision._unchecked(
                    v,
                    tuple(tuple(e) for e in outp["adds"]),
                    tuple(tuple(e) for e in outp["deletes"]),
                )
            )
    step = ReconfigStep(1, decisions)
    return Schedule(1, (step,)), trace


class _TwoSimState:
    __slots__ = (
        "node",
        "alive1", "alive2",
        "ann1", "ann2", "res1", "res2",
        "ann_round1", "ann_round2",
        "targets1", "targets2",
        "dir1", "dir2",
        "decided", "expected", "claims", "rcv",
        "round",
    )

    def __init__(self, node, alive1, alive2):
        self.node = node
        self.alive1 = alive1
        self.alive2 = alive2
        self.ann1 = self.ann2 = False
        self.res1 = self.res2 = False
        self.ann_round1 = self.ann_round2 = 0
        self.targets1 = self.targets2 = ()
        self.dir1 = {}  # t1 neighbor -> True if edge points away from node
        self.dir2 = {}
        self.decided = False
        self.expected = set()
        self.claims = {}  # neighbor -> "del" | "add" (own active claims)
        self.rcv = {}  # neighbor -> decision received on the shared edge
        self.round = 0


class _TwoSimProgram(NodeProgram):
    """Budget-2 reconfiguration: peel both trees, then trade outgoing edges.

    Both peelings run in lockstep ("rm1"/"rm2", merged to "rm12" when one
    node leaves both trees in the same round). Once a node knows the
    direction of every incident edge in both trees it fixes its claims:
    delete edges pointing away in the old tree, add edges pointing away in
    the new one, dropping an edge claimed both ways. It sends one decision
    ("del", "add", or "keep") along each outgoing edge and waits for exactly
    the decisions owed to it, one per incoming edge. Opposite decisions on a
    shared edge cancel on both sides. Nodes finish at different rounds; a
    decision can arrive early and is buffered.
    """

    def init(self, node, t1_edges, t2_edges, neighbors):
        alive1 = {u if v == node else v for u, v in t1_edges}
        alive2 = {u if v == node else v for u, v in t2_edges}
        return _TwoSimState(node, alive1, alive2)

    def round(self, st, inbox):
        st.round += 1
        partners1 = partners2 = None
        if inbox:
            for m in inbox:
                tag = m.tag
                u = m.sender
                if tag == "rm1" or tag == "rm12":
                    if st.ann1:
                        if partners1 is None:
                            partners1 = set()
                        partners1.add(u)
                    else:
                        st.alive1.discard(u)
                        st.dir1[u] = False
                if tag == "rm2" or tag == "rm12":
                    if st.ann2:
                        if partners2 is None:
                            partners2 = set()
                        partners2.add(u)
                    else:
                        st.alive2.discard(u)
                        st.dir2[u] = False
                if tag == "del" or tag == "add" or tag == "keep":
                    st.rcv[u] = tag

        node = st.node
        out: "dict[int, Message] | None" = None

        # settle ties for announcements made last round
        if st.ann1 and not st.res1 and st.round > st.ann_round1:
            p = partners1 or ()
            for u in st.targets1:
                st.dir1[u] = True if u not in p else node < u
            st.res1 = True
        if st.ann2 and not st.res2 and st.round > st.ann_round2:
            p = partners2 or ()
            for u in st.targets2:
                st.dir2[u] = True if u not in p else node < u
            st.res2 = True

        # leave a tree once residual degree drops to 2
        if not st.ann1 and len(st.alive1) <= 2:
            st.ann1 = True
            st.ann_round1 = st.round
            st.targets1 = tuple(sorted(st.alive1))
            if not st.targets1:
                st.res1 = True
            else:
                out = {u: Message(node, "rm1") for u in st.targets1}
        if not st.ann2 and len(st.alive2) <= 2:
            st.ann2 = True
            st.ann_round2 = st.round
            st.targets2 = tuple(sorted(st.alive2))
            if not st.targets2:
                st.res2 = True
            else:
                if out is None:
                    out = {u: Message(node, "rm2") for u in st.targets2}
                else:
                    for u in st.targets2:
                        prev = out.get(u)
                        out[u] = Message(node, "rm12" if prev is not None else "rm2")

        # both trees settled locally: fix claims, send one decision per outgoing edge
        if st.res1 and st.res2 and not st.decided:
            st.decided = True
            dir1 = st.dir1
            dir2 = st.dir2
            claims = st.claims
            dec = {}
            for u, outgoing in dir1.items():
                if outgoing:
                    dec[u] = "del"
                else:
                    st.expected.add(u)
            for u, outgoing in dir2.items():
                if outgoing:
                    if dec.get(u) == "del":
                        dec[u] = "keep"  # add and delete of the same edge cancel
                    else:
                        dec[u] = "add"
                else:
                    st.expected.add(u)
            for u, op in dec.items():
                if op != "keep":
                    claims[u] = op
            if dec:
                if out is None:
                    out = {}
                for u, op in dec.items():
                    if u in out:
                        raise AssertionError("decision overlaps a removal message")
                    out[u] = Message(node, op)

        if st.decided and len(st.rcv) >= len(st.expected):
            adds = []
            deletes = []
            for u, op in st.claims.items():
                got = st.rcv.get(u)
                if op == "del":
                    if got != "add":
                        deletes.append(list(canonical_edge(node, u)))
                elif got != "del":
                    adds.append(list(canonical_edge(node, u)))
            adds.sort()
            deletes.sort()
            return st, out, True, {"adds": adds, "deletes": deletes}
        return st, out, False, None


_TWO_SIM_PROGRAM = _TwoSimProgram()


def two_sim_reconfigure(
    g: Graph,
    t1: EdgeSubset,
    t2: EdgeSubset,
    *,
    mode: str = CONGEST,
    round_limit: "int | None" = None,
    eval_seed: "int | None" = None,
) -> tuple[Schedule, SimTrace]:
    """Budget-2 single-step reconfiguration between two spanning trees.

    No rooting and no global coordination: nodes peel both trees, settle
    edge directions, and trade claims. Deleted edges are exactly those of
    t1 missing from t2, added edges exactly those of t2 missing from t1.
    """
    if not t1.is_spanning_tree():
        raise ValueError("t1 is not a spanning tree of its graph")
    if not t2.is_spanning_tree():
        raise ValueError("t2 is not a spanning tree of its graph")
    trace = run(
        g,
        _TWO_SIM_PROGRAM,
        t1=t1,
        t2=t2,
        mode=mode,
        round_limit=round_limit,
        eval_seed=eval_seed,
    )
    decisions = []
    for v, outp in enumerate(trace.outputs):
        adds = outp["adds"]
        deletes = outp["deletes"]
        if adds or deletes:
            decisions.append(
                NodeDecision._unchecked(
                    v,
                    tuple(tuple(e) for e in adds),
                    tuple(tuple(e) for e in deletes),
                )
            )
    step = ReconfigStep._unchecked(2, tuple(decisions))
    return Schedule(2, (step,)), trace
