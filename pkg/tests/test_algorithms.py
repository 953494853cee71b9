import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treereconfig.algorithms import (
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
from treereconfig.graph import EdgeSubset, Graph, random_spanning_tree_pair, random_tree
from treereconfig.reconfig import validate_schedule
from treereconfig.sim import congest_budget, id_bits


def tree_subset(g):
    return EdgeSubset(g, g.edges)


def cycle4():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    t1 = EdgeSubset(g, [(0, 1), (1, 2), (2, 3)])
    t2 = EdgeSubset(g, [(1, 2), (2, 3), (0, 3)])
    return g, t1, t2


def test_ceil_log_3_2_frozen():
    # smallest k with (3/2)^k >= n, worked by hand
    table = {1: 0, 2: 2, 3: 3, 4: 4, 5: 4, 7: 5, 8: 6, 10: 6, 12: 7, 100: 12}
    for n, k in table.items():
        assert ceil_log_3_2(n) == k
        assert 3**k >= n * 2**k
        if k:
            assert 3 ** (k - 1) < n * 2 ** (k - 1)
    with pytest.raises(ValueError):
        ceil_log_3_2(0)


def test_orient_path():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    o = orient(tree_subset(g))
    assert o.directions == {(0, 1): (0, 1), (1, 2): (1, 2), (2, 3): (2, 3)}
    assert o.removal_log == [(0, 1, 2, 3)]
    assert o.iterations == 1


def test_orient_star():
    g = Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    o = orient(tree_subset(g))
    assert o.directions == {
        (0, 1): (1, 0),
        (0, 2): (2, 0),
        (0, 3): (3, 0),
        (0, 4): (4, 0),
    }
    assert o.removal_log == [(1, 2, 3, 4), (0,)]
    assert o.iterations == 2


def test_orient_single_node():
    g = Graph(1, [])
    o = orient(tree_subset(g))
    assert o.directions == {} and o.removal_log == [(0,)]


def test_orient_rejects_non_tree():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError):
        orient(tree_subset(g))


def test_orientation_json_dump():
    g = Graph(3, [(0, 1), (1, 2)])
    o = orient(tree_subset(g))
    assert o.to_json() == '{"iterations":1,"edges":[[0,1],[1,2]]}\n'


def peel_fractions_ok(o: Orientation) -> bool:
    alive = o.tree.graph.n
    for i, removed in enumerate(o.removal_log):
        last = i == len(o.removal_log) - 1
        if not last and 3 * len(removed) < alive:
            return False
        alive -= len(removed)
    return alive == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=300), st.integers(min_value=0, max_value=10**6))
def test_orient_bounds_random_trees(n, seed):
    t = tree_subset(random_tree(n, seed))
    o = orient(t)
    assert set(o.directions) == t.edges
    assert max(o.out_degrees(), default=0) <= 2
    assert o.iterations <= max_orient_iterations(n)
    assert peel_fractions_ok(o)
    removed = [v for batch in o.removal_log for v in batch]
    assert sorted(removed) == list(range(n))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=80), st.integers(min_value=0, max_value=10**6))
def test_orient_distributed_matches(n, seed):
    g = random_tree(n, seed)
    t = tree_subset(g)
    dist, trace = orient_distributed(g, t)
    assert dist == orient(t)
    assert trace.max_bits() <= congest_budget(n)


def test_orient_distributed_on_non_tree_graph():
    # tree edges are a strict subset of the graph's edges
    g, t1, _ = random_spanning_tree_pair(12, extra_edges=4, seed=9)
    dist, _ = orient_distributed(g, t1)
    assert dist == orient(t1)


def test_rooted_tree_validation():
    with pytest.raises(ValueError):
        RootedTree(0, {0: 1})
    with pytest.raises(ValueError):
        RootedTree(0, {1: 1})
    g = Graph(3, [(0, 1), (1, 2)])
    check_rooted_spanning(g, RootedTree(0, {1: 0, 2: 1}))
    with pytest.raises(ValueError):
        check_rooted_spanning(g, RootedTree(0, {1: 0}))
    with pytest.raises(ValueError):
        check_rooted_spanning(g, RootedTree(0, {1: 0, 2: 0}))


def test_root_tree_centralized_path():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    rt = root_tree_centralized(tree_subset(g), 2)
    assert rt.root == 2
    assert rt.parents == {1: 2, 3: 2, 0: 1}
    assert rt.parent_edge(0) == (0, 1) and rt.parent_edge(2) is None


def test_rooted_reconfigure_cycle4():
    g, t1, t2 = cycle4()
    sched, trace = rooted_reconfigure(
        g, root_tree_centralized(t1, 0), root_tree_centralized(t2, 0)
    )
    assert sched.k == 1 and len(sched.steps) == 1
    assert trace.rounds == 1
    by_node = {d.node: d for d in sched.steps[0].decisions}
    assert set(by_node) == {1, 3}
    assert by_node[1].deletes == ((0, 1),) and by_node[1].adds == ()
    assert by_node[3].adds == ((0, 3),) and by_node[3].deletes == ()
    assert validate_schedule(g, t1, t2, sched).valid


def test_rooted_identity_is_empty_step():
    g, t1, _ = cycle4()
    rt = root_tree_centralized(t1, 1)
    sched, trace = rooted_reconfigure(g, rt, rt)
    assert trace.rounds == 1
    assert sched.steps[0].decisions == ()
    assert validate_schedule(g, t1, t1, sched).valid


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=2, max_value=60),
    st.integers(min_value=0, max_value=10**6),
    st.data(),
)
def test_rooted_reconfigure_random(n, seed, data):
    g, t1, t2 = random_spanning_tree_pair(n, seed=seed)
    r1 = data.draw(st.integers(min_value=0, max_value=n - 1))
    r2 = data.draw(st.integers(min_value=0, max_value=n - 1))
    sched, trace = rooted_reconfigure(
        g, root_tree_centralized(t1, r1), root_tree_centralized(t2, r2)
    )
    assert trace.rounds == 1
    assert trace.max_bits() <= congest_budget(n)
    assert validate_schedule(g, t1, t2, sched).valid


def test_two_sim_cycle4():
    g, t1, t2 = cycle4()
    sched, trace = two_sim_reconfigure(g, t1, t2)
    assert sched.k == 2 and len(sched.steps) == 1
    decisions = sched.steps[0].decisions
    assert len(decisions) == 1
    d = decisions[0]
    assert d.node == 0 and d.deletes == ((0, 1),) and d.adds == ((0, 3),)
    assert validate_schedule(g, t1, t2, sched).valid


def test_two_sim_identity_is_empty_step():
    g, t1, _ = cycle4()
    sched, _ = two_sim_reconfigure(g, t1, t1)
    assert sched.steps[0].decisions == ()
    assert validate_schedule(g, t1, t1, sched).valid


def test_two_sim_single_node():
    g = Graph(1, [])
    t = EdgeSubset(g, [])
    sched, trace = two_sim_reconfigure(g, t, t)
    assert trace.rounds == 1
    assert validate_schedule(g, t, t, sched).valid


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=2, max_value=80), st.integers(min_value=0, max_value=10**6))
def test_two_sim_random(n, seed):
    g, t1, t2 = random_spanning_tree_pair(n, seed=seed)
    sched, trace = two_sim_reconfigure(g, t1, t2)
    assert validate_schedule(g, t1, t2, sched).valid
    deletes = {e for d in sched.steps[0].decisions for e in d.deletes}
    adds = {e for d in sched.steps[0].decisions for e in d.adds}
    assert deletes == t1.edges - t2.edges
    assert adds == t2.edges - t1.edges
    assert trace.rounds <= 64 * (id_bits(n) + 1)
    assert trace.max_bits() <= congest_budget(n)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(min_value=2, max_value=40),
    st.integers(min_value=0, max_value=10**6),
    st.integers(min_value=0, max_value=10**6),
)
def test_protocols_ignore_eval_order(n, seed, eval_seed):
    g, t1, t2 = random_spanning_tree_pair(n, seed=seed)
    a_sched, a_trace = two_sim_reconfigure(g, t1, t2)
    b_sched, b_trace = two_sim_reconfigure(g, t1, t2, eval_seed=eval_seed)
    assert a_sched == b_sched
    assert a_trace.jsonl() == b_trace.jsonl()
