"""Undirected simple graphs, edge subsets, and labeled tree generation.

Nodes are dense integer ids 0..n-1. Edges are canonical (min, max) tuples.
Everything here is deterministic: random generation takes an explicit seed.
"""

from __future__ import annotations

import itertools
import random

Edge = tuple[int, int]


class GraphError(ValueError):
    """Malformed graph, edge, or graph file."""


class EdgeNotInGraph(GraphError):
    """An edge subset referenced an edge that its parent graph does not have."""

    def __init__(self, e: Edge):
        super().__init__(f"edge {e} is not an edge of the parent graph")
        self.edge = e


def edge(u: int, v: int) -> Edge:
    """Canonical form of the undirected edge {u, v}."""
    if u == v:
        raise GraphError(f"self-loop at node {u}")
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph on nodes 0..n-1 with sorted adjacency lists."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: "list[Edge] | tuple[Edge, ...] | frozenset[Edge]"):
        if n < 1:
            raise GraphError(f"graph needs at least one node, got n={n}")
        canon = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            canon.append(edge(u, v))
        es = frozenset(canon)
        if len(es) != len(canon):
            raise GraphError("duplicate edge in edge list")
        self.n = n
        self.edges = es
        self._adj = _build_adjacency(n, es)

    @classmethod
    def _unchecked(cls, n: int, edges: frozenset[Edge]) -> "Graph":
        # Fast path for generators that produce valid canonical edges.
        g = object.__new__(cls)
        g.n = n
        g.edges = edges
        g._adj = _build_adjacency(n, edges)
        return g

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edges

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"


def _build_adjacency(n: int, edges) -> list[tuple[int, ...]]:
    # One lexicographic sort of the canonical edges leaves every per-node list
    # sorted: node x first collects u < x (from edges (u, x)), then w > x.
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in sorted(edges):
        adj[u].append(v)
        adj[v].append(u)
    return [tuple(a) for a in adj]


class EdgeSubset:
    """A set of edges that must all belong to one parent graph."""

    __slots__ = ("graph", "edges", "_tree_cache")

    def __init__(self, graph: Graph, edges):
        member = graph.edges
        if isinstance(edges, frozenset) and edges <= member:
            # already canonical members, no per-edge work needed
            self.graph = graph
            self.edges = edges
            self._tree_cache = None
            return
        canon = []
        for u, v in edges:
            e = edge(u, v)
            if e not in member:
                raise EdgeNotInGraph(e)
            canon.append(e)
        self.graph = graph
        self.edges = frozenset(canon)
        self._tree_cache = None

    @classmethod
    def _unchecked(cls, graph: Graph, edges: frozenset[Edge]) -> "EdgeSubset":
        s = object.__new__(cls)
        s.graph = graph
        s.edges = edges
        s._tree_cache = None
        return s

    def is_spanning_tree(self) -> bool:
        """Cached: do the member edges form a spanning tree of the parent graph?"""
        cached = self._tree_cache
        if cached is None:
            n = self.graph.n
            if len(self.edges) != n - 1:
                cached = False
            elif self.edges is self.graph.edges or self.edges == self.graph.edges:
                # n-1 edges and connected is a tree; reuse the built adjacency
                cached = _connected(n, self.graph._adj)
            else:
                cached = _is_spanning_tree(n, self.edges)
            self._tree_cache = cached
        return cached

    def incident_edges(self, v: int) -> tuple[Edge, ...]:
        return tuple(sorted(e for e in self.edges if e[0] == v or e[1] == v))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e) -> bool:
        return e in self.edges

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EdgeSubset)
            and self.graph.n == other.graph.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.graph.n, self.edges))

    def __repr__(self) -> str:
        return f"EdgeSubset({len(self.edges)} edges of {self.graph!r})"


class UnionFind:
    """Array union-find with path halving and union by size."""

    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b; False if they were already together."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def _connected(n: int, adj) -> bool:
    seen = bytearray(n)
    seen[0] = 1
    count = 1
    stack = [0]
    pop = stack.pop
    push = stack.append
    while stack:
        for u in adj[pop()]:
            if not seen[u]:
                seen[u] = 1
                count += 1
                push(u)
    return count == n


def _is_spanning_tree(n: int, edges) -> bool:
    # Internal fast path over raw canonical edges (no membership checks).
    count = 0
    parent = list(range(n))
    for u, v in edges:
        count += 1
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        if u == v:
            return False
        parent[u] = v
    return count == n - 1


def validate_spanning_tree(g: Graph, s) -> bool:
    """True iff s is a spanning tree of g: exactly n-1 edges connecting all nodes.

    s may be an EdgeSubset of g or any iterable of edges; an edge absent from g
    raises EdgeNotInGraph rather than returning False.
    """
    if isinstance(s, EdgeSubset):
        if s.graph is g:
            return s.is_spanning_tree()
        edges = s.edges
        if not edges <= g.edges:
            for e in sorted(edges):
                if e not in g.edges:
                    raise EdgeNotInGraph(e)
    else:
        edges = [edge(u, v) for u, v in s]
        for e in edges:
            if e not in g.edges:
                raise EdgeNotInGraph(e)
    if len(edges) != g.n - 1:
        return False
    return _is_spanning_tree(g.n, edges)


def tree_edges_from_prufer(seq, n: int) -> list[Edge]:
    """Decode a Prufer sequence over 0..n-1 into the n-1 edges of its tree."""
    if n < 1:
        raise GraphError(f"need n >= 1, got {n}")
    if len(seq) != max(0, n - 2):
        raise GraphError(f"sequence length {len(seq)} does not match n={n}")
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    # Linear-time variant of the smallest-leaf scan: ptr sweeps node ids once;
    # a node below ptr that turns into a leaf is consumed before ptr moves on.
    edges = []
    append = edges.append
    deg = degree
    ptr = 0
    leaf = -1
    for x in seq:
        if leaf < 0:
            while deg[ptr] != 1:
                ptr += 1
            leaf = ptr
        append((leaf, x) if leaf < x else (x, leaf))
        deg[leaf] = 0
        d = deg[x] - 1
        deg[x] = d
        if d == 1 and x < ptr:
            leaf = x
        else:
            leaf = -1
    if leaf < 0:
        while degree[ptr] != 1:
            ptr += 1
        leaf = ptr
    edges.append((leaf, n - 1))
    return edges


def _random_tree_edges(n: int, rng: random.Random) -> list[Edge]:
    if n <= 2:
        return tree_edges_from_prufer([], n)
    seq = rng.choices(range(n), k=n - 2)
    return tree_edges_from_prufer(seq, n)


def random_tree(n: int, seed: int) -> Graph:
    """Uniformly random labeled tree on n nodes, deterministic in seed."""
    if n < 1:
        raise GraphError(f"need n >= 1, got {n}")
    rng = random.Random(seed)
    return Graph._unchecked(n, frozenset(_random_tree_edges(n, rng)))


def all_labeled_trees(n: int):
    """Yield the edge lists of all n**(n-2) labeled trees on n nodes."""
    if n < 1:
        raise GraphError(f"need n >= 1, got {n}")
    if n <= 2:
        yield tree_edges_from_prufer([], n)
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield tree_edges_from_prufer(seq, n)


def random_spanning_tree_pair(
    n: int, extra_edges: int = 0, seed: int = 0
) -> tuple[Graph, EdgeSubset, EdgeSubset]:
    """Random instance (G, T1, T2): G is the union of two random spanning trees.

    Up to extra_edges additional non-tree edges are mixed in when the node count
    allows; fewer are added if the graph runs out of absent edges.
    """
    if n < 1:
        raise GraphError(f"need n >= 1, got {n}")
    rng = random.Random(seed)
    t1_edges = frozenset(_random_tree_edges(n, rng))
    t2_edges = frozenset(_random_tree_edges(n, rng))
    union = set(t1_edges | t2_edges)
    want = len(union) + extra_edges
    max_edges = n * (n - 1) // 2
    want = min(want, max_edges)
    attempts = 0
    while len(union) < want and attempts < 50 * (extra_edges + 1):
        attempts += 1
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        e = (u, v) if u < v else (v, u)
        if e not in union:
            union.add(e)
    g = Graph._unchecked(n, frozenset(union))
    return g, EdgeSubset._unchecked(g, t1_edges), EdgeSubset._unchecked(g, t2_edges)


def write_graph(g: Graph, path: str, header: "list[str] | None" = None) -> None:
    """Write a graph file: optional # comments, a line "n m", then one "u v" per edge."""
    lines = []
    for h in header or []:
        lines.append(f"# {h}")
    lines.append(f"{g.n} {len(g.edges)}")
    for u, v in sorted(g.edges):
        lines.append(f"{u} {v}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def _data_lines(path: str) -> list[str]:
    out = []
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            out.append(line)
    return out


def read_graph(path: str) -> Graph:
    """Parse a graph file written by write_graph."""
    lines = _data_lines(path)
    if not lines:
        raise GraphError(f"{path}: empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"{path}: first line must be 'n m', got {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise GraphError(f"{path}: expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"{path}: bad edge line {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if not (0 <= u < v < n):
            raise GraphError(f"{path}: edge line {line!r} violates 0 <= u < v < n")
        edges.append((u, v))
    return Graph(n, edges)


def write_edge_subset(s: EdgeSubset, path: str, header: "list[str] | None" = None) -> None:
    """Write an edge subset file: one canonical "u v" line per member edge."""
    lines = []
    for h in header or []:
        lines.append(f"# {h}")
    for u, v in sorted(s.edges):
        lines.append(f"{u} {v}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n" if lines else "")


def read_edge_subset(g: Graph, path: str) -> EdgeSubset:
    """Parse an edge subset file against its parent graph g."""
    edges = []
    for line in _data_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"{path}: bad edge line {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return EdgeSubset(g, edges)
