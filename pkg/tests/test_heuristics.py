import pytest

from posat.deporder import DepOrder
from posat.errors import ContractError
from posat.heuristics import Heuristic, choose_assertion, new_dep_count, undo_cost


def dag(levels, edges):
    d = DepOrder()
    for v in levels:
        d.add_level(v)
    for j, i in edges:
        d.add_dep(j, i)
    return d


def test_chrono_takes_newest():
    d = dag([5, 7], [])
    assert choose_assertion({5, 7}, Heuristic.CHRONO, {5, 7}, 9, d, lambda l: 1) == 7


def test_least_undos():
    # level 3 has dependents 4 (size 6) and the conflict level 9; level 5 has 6 (size 2)
    d = dag([3, 4, 5, 6, 9], [(3, 4), (4, 9), (5, 6), (3, 9)])
    sizes = {3: 1, 4: 6, 5: 1, 6: 2, 9: 10}
    assert undo_cost(3, 9, d, sizes.get) == 6
    assert undo_cost(5, 9, d, sizes.get) == 2
    args = ({3, 5}, {3, 5}, 9, d, sizes.get)
    assert choose_assertion(args[0], "least-undos", *args[1:]) == 5
    assert choose_assertion(args[0], "most-undos", *args[1:]) == 3


def test_deps_policies():
    d = dag([2, 4, 6, 8], [(2, 4)])
    levels = {2, 4, 6}
    assert new_dep_count(4, levels, 8, d) == 1
    assert new_dep_count(6, levels, 8, d) == 2
    assert choose_assertion({4, 6}, "least-deps", levels, 8, d, len) == 4
    assert choose_assertion({4, 6}, "most-deps", levels, 8, d, len) == 6


def test_closure_versus_direct_existing():
    d = dag([1, 2, 3, 5], [(1, 2), (2, 3)])
    levels = {1, 3}
    assert new_dep_count(3, levels, 5, d, existing="closure") == 0
    assert new_dep_count(3, levels, 5, d, existing="direct") == 1


@pytest.mark.parametrize("policy", list(Heuristic))
def test_ties_go_to_largest_id(policy):
    d = dag([2, 4, 6], [])
    assert choose_assertion({2, 4, 6}, policy, {2, 4, 6}, 9, d, lambda l: 1) == 6


def test_empty_candidates_rejected():
    with pytest.raises(ContractError):
        choose_assertion(set(), Heuristic.CHRONO, set(), 1, DepOrder(), len)
