import pytest

from posat.errors import ContractError
from posat.literals import from_dimacs as L
from posat.trail import DECISION, GROUND, GROUND_UNIT, Trail


def test_first_level_is_one():
    t = Trail(3)
    t.assign(L(1), GROUND, GROUND_UNIT)
    assert t.new_level(L(2)).id == 1


def test_ids_never_reused():
    t = Trail(5)
    ids = [t.new_level(L(v)).id for v in (1, 2, 3)]
    assert ids == [1, 2, 3]
    t.delete_levels({2})
    assert t.new_level(L(4)).id == 4


def test_assign_grows_sequence():
    t = Trail(3)
    t.new_level(L(1))
    t.new_level(L(2))
    t.assign(L(3), 2, 7)
    assert t.levels[2].seq == [L(2), L(3)]
    assert t.reason[3] == 7 and t.level_of[3] == 2 and t.position[3] == 1
    t2 = Trail(1)
    t2.assign(L(1), GROUND, GROUND_UNIT)
    assert t2.levels[GROUND].seq == [L(1)]


def test_phase_survives_deletion():
    t = Trail(3)
    t.new_level(L(1))
    t.new_level(L(-2))
    t.assign(L(3), 2, 0)
    assert t.delete_levels({2}) == 2
    assert t.val[L(3)] == 0 and t.level_of[3] == -1
    assert t.saved_phase[3] is True
    assert t.saved_phase[2] is False
    t.check_partition()


def test_delete_counts():
    t = Trail(10)
    t.new_level(L(1))
    for v in (2, 3, 4, 5):
        t.assign(L(v), 1, 0)
    assert t.delete_levels(set()) == 0
    assert t.num_assigned == 5
    assert t.delete_levels({1}) == 5
    t.new_level(L(1))
    t.assign(L(2), 2, 0)
    t.assign(L(3), 2, 0)
    t.new_level(L(4))
    for v in (5, 6, 7):
        t.assign(L(v), 3, 0)
    assert t.delete_levels({2, 3}) == 7
    assert t.num_assigned == 0
    assert t.non_ground_levels() == []


def test_queue_purged_of_deleted_literals():
    t = Trail(4)
    t.new_level(L(1))
    t.new_level(L(2))
    t.delete_levels({1})
    assert list(t.queue) == [L(2)]


@pytest.mark.parametrize(
    "action",
    [
        lambda t: t.delete_levels({GROUND}),
        lambda t: t.delete_levels({9}),
        lambda t: t.assign(L(1), 1, 0),
        lambda t: t.assign(L(-1), 1, 0),
        lambda t: t.new_level(L(1)),
        lambda t: t.assign(L(2), 5, 0),
    ],
)
def test_contract_errors(action):
    t = Trail(2)
    t.new_level(L(1))
    with pytest.raises(ContractError):
        action(t)


def test_decision_reason():
    t = Trail(1)
    t.new_level(L(-1))
    assert t.reason[1] == DECISION
    assert t.val[L(-1)] == 1 and t.val[L(1)] == -1
