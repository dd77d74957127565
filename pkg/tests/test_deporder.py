import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posat.deporder import DepOrder
from posat.errors import ContractError, InvariantViolation

from oracles import dependents, maximal, random_dag, transitive_closure


def build(nodes, edges, threshold=4096):
    d = DepOrder(threshold)
    for v in nodes:
        d.add_level(v)
    for j, i in edges:
        d.add_dep(j, i)
    return d


def test_add_dep_idempotent():
    d = build([1, 2], [])
    assert d.add_dep(1, 2) is True
    assert d.add_dep(1, 2) is False
    assert d.edges() == [(1, 2)]


def test_ground_never_stored():
    d = build([5], [])
    assert d.add_dep(0, 5) is False
    assert d.edges() == []


def test_self_dep_rejected():
    d = build([3], [])
    with pytest.raises(ContractError):
        d.add_dep(3, 3)


def test_dead_level_rejected():
    d = build([1], [])
    with pytest.raises(ContractError):
        d.add_dep(1, 2)


def test_dependents_closure_chain():
    d = build([1, 2, 4, 7], [(1, 2), (2, 4)])
    assert d.dependents_closure(1) == {2, 4}
    assert d.dependents_closure(7) == set()
    assert d.ancestors(4) == {1, 2}


@pytest.mark.parametrize(
    "edges, expected",
    [([(2, 5)], {5, 7}), ([(2, 5), (5, 7)], {7}), ([], {2, 5, 7})],
)
def test_maximal_of(edges, expected):
    d = build([2, 5, 7], edges)
    assert d.maximal_of({2, 5, 7}) == expected


def test_maximal_of_empty():
    assert DepOrder().maximal_of(set()) == set()


def test_remove_keeps_only_direct_edges():
    d = build([1, 2, 4], [(1, 2), (2, 4)])
    d.remove_levels({2})
    assert d.edges() == []
    assert not d.reaches(1, 4)
    d.remove_levels(set())
    assert sorted(d.slot_of) == [1, 4]
    d.clear()
    assert len(d) == 0 and d.edges() == []
    d.check()


def test_slot_reuse_after_removal():
    d = build([1, 2], [(1, 2)])
    slot = d.slot_of[2]
    d.remove_levels({2})
    assert d.add_level(3) == slot
    assert not d.has_dep(1, 3)
    d.check()


def test_matrix_dropped_past_threshold():
    d = DepOrder(matrix_threshold=2)
    for v in (1, 2):
        d.add_level(v)
    assert d.matrix_enabled
    d.add_dep(1, 2)
    d.add_level(3)
    assert not d.matrix_enabled
    assert d.has_dep(1, 2)
    assert d.add_dep(2, 3) and not d.add_dep(2, 3)
    assert d.dependents_closure(1) == {2, 3}


def test_large_threshold_keeps_matrix():
    d = build(range(1, 200), [(v, v + 1) for v in range(1, 199)], threshold=1_000_000)
    assert d.matrix_enabled


def test_check_detects_cycle():
    d = build([1, 2], [(1, 2)])
    d.add_dep(2, 1)
    with pytest.raises(InvariantViolation):
        d.check()


def _agree(d, nodes, edges):
    reach = transitive_closure(nodes, edges)
    for a in nodes:
        assert d.dependents_closure(a) == dependents(reach, a)
    return reach


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False))
def test_closure_against_floyd_warshall(rng):
    nodes, edges = random_dag(rng, max_nodes=30, max_edges=80)
    d = build(nodes, edges)
    d.check()
    reach = _agree(d, nodes, edges)
    subset = rng.sample(nodes, rng.randint(0, len(nodes)))
    assert d.maximal_of(subset) == maximal(reach, subset)
    if subset:
        assert d.maximal_of(subset)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_matrix_differential_with_deletions(rng):
    nodes, edges = random_dag(rng, max_nodes=25, max_edges=60)
    with_matrix = build(nodes, edges, threshold=10**9)
    without = build(nodes, edges, threshold=0)
    assert not without.matrix_enabled
    dead = set(rng.sample(nodes, rng.randint(0, len(nodes))))
    for d in (with_matrix, without):
        d.remove_levels(dead)
        d.check()
    live = [v for v in nodes if v not in dead]
    live_edges = [(j, i) for j, i in edges if j not in dead and i not in dead]
    assert with_matrix.edges() == without.edges() == live_edges
    for j in live:
        for i in live:
            assert with_matrix.has_dep(j, i) == without.has_dep(j, i)
    _agree(with_matrix, live, live_edges)
    _agree(without, live, live_edges)


def test_maximal_never_empty_on_nonempty_sets():
    rng = random.Random(3)
    for _ in range(200):
        nodes, edges = random_dag(rng, max_nodes=12, max_edges=40)
        d = build(nodes, edges)
        s = rng.sample(nodes, rng.randint(1, len(nodes)))
        assert d.maximal_of(s)
