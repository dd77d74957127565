"""Assertion level choice among the maximal candidate levels of a conflict."""

from __future__ import annotations

from enum import Enum
from typing import Callable, Collection

from posat.deporder import DepOrder
from posat.errors import ContractError


class Heuristic(str, Enum):
    CHRONO = "chrono"
    LEAST_UNDOS = "least-undos"
    MOST_UNDOS = "most-undos"
    LEAST_DEPS = "least-deps"
    MOST_DEPS = "most-deps"

    def __str__(self):
        return self.value


def undo_cost(a: int, conflict_level: int, dep: DepOrder, level_size: Callable[[int], int]) -> int:
    """Assignments living in levels that depend on ``a``.

    The conflict level is left out: it is deleted whichever level is chosen.
    """
    return sum(level_size(l) for l in dep.dependents_closure(a) if l != conflict_level)


def new_dep_count(
    a: int,
    clause_levels: Collection[int],
    conflict_level: int,
    dep: DepOrder,
    existing: str = "closure",
) -> int:
    """Dependencies the assertion at ``a`` would add that do not hold yet.

    With ``existing="closure"`` a transitively implied dependency counts as
    present; with ``"direct"`` only a stored edge does.
    """
    if existing == "closure":
        below = dep.ancestors(a)
        return sum(1 for l in clause_levels if l != conflict_level and l != a and l not in below)
    return sum(
        1 for l in clause_levels if l != conflict_level and l != a and not dep.has_dep(l, a)
    )


def choose_assertion(
    candidates: Collection[int],
    policy: Heuristic,
    clause_levels: Collection[int],
    conflict_level: int,
    dep: DepOrder,
    level_size: Callable[[int], int],
    existing: str = "closure",
) -> int:
    """Pick the assertion level. Ties always go to the most recent level."""
    if not candidates:
        raise ContractError("no candidate assertion level")
    policy = Heuristic(policy)
    if policy is Heuristic.CHRONO or len(candidates) == 1:
        return max(candidates)
    if policy in (Heuristic.LEAST_UNDOS, Heuristic.MOST_UNDOS):
        cost = {a: undo_cost(a, conflict_level, dep, level_size) for a in candidates}
    else:
        cost = {a: new_dep_count(a, clause_levels, conflict_level, dep, existing) for a in candidates}
    if policy in (Heuristic.LEAST_UNDOS, Heuristic.LEAST_DEPS):
        return min(candidates, key=lambda a: (cost[a], -a))
    return max(candidates, key=lambda a: (cost[a], a))
