"""Live decision levels, each with its own assignment sequence.

A single stack cannot express deleting an arbitrary set of levels, so each
level keeps the literals assigned at it in propagation order and every
variable records its level and its position in that sequence.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Iterable, Optional

from posat.errors import ContractError, InvariantViolation

GROUND = 0

# reason codes for assignments without a clause; clause refs are >= 0
DECISION = -1
GROUND_UNIT = -2
NO_REASON = -3


class Level:
    __slots__ = ("id", "slot", "decision", "seq", "alive")

    def __init__(self, lid: int, decision: Optional[int] = None):
        self.id = lid
        self.slot: Optional[int] = None
        self.decision = decision
        self.seq: list[int] = []
        self.alive = True

    def __repr__(self):
        return f"Level({self.id}, decision={self.decision}, size={len(self.seq)})"


class Trail:
    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        # per literal code: 1 true, -1 false, 0 unassigned
        self.val = [0] * (2 * num_vars + 2)
        self.level_of = [-1] * (num_vars + 1)
        self.reason = [NO_REASON] * (num_vars + 1)
        self.position = [-1] * (num_vars + 1)
        self.saved_phase = [False] * (num_vars + 1)
        self.levels: dict[int, Level] = {GROUND: Level(GROUND)}
        self.queue: deque[int] = deque()
        self.num_assigned = 0
        self._next_id = 1
        self.on_unassign: Optional[Callable[[int], None]] = None

    def new_level(self, decision: int) -> Level:
        if self.val[decision]:
            raise ContractError(f"decision variable {decision >> 1} already assigned")
        level = Level(self._next_id, decision)
        self._next_id += 1
        self.levels[level.id] = level
        self.assign(decision, level.id, DECISION)
        return level

    def assign(self, lit: int, lid: int, reason: int) -> None:
        v = lit >> 1
        if self.val[lit]:
            raise ContractError(f"variable {v} assigned twice")
        level = self.levels.get(lid)
        if level is None:
            raise ContractError(f"level {lid} is not alive")
        self.val[lit] = 1
        self.val[lit ^ 1] = -1
        self.level_of[v] = lid
        self.reason[v] = reason
        self.position[v] = len(level.seq)
        self.saved_phase[v] = not (lit & 1)
        level.seq.append(lit)
        self.queue.append(lit)
        self.num_assigned += 1

    def delete_levels(self, dead: Iterable[int]) -> int:
        """Unassign every literal of the given levels and drop the levels.

        Saved phases are kept. Returns the number of unassigned variables.
        """
        dead = set(dead)
        if GROUND in dead:
            raise ContractError("the ground level cannot be deleted")
        val, level_of, reason, position = self.val, self.level_of, self.reason, self.position
        hook = self.on_unassign
        undone = 0
        for lid in dead:
            level = self.levels.pop(lid, None)
            if level is None:
                raise ContractError(f"level {lid} is not alive")
            for lit in level.seq:
                v = lit >> 1
                val[lit] = 0
                val[lit ^ 1] = 0
                level_of[v] = -1
                reason[v] = NO_REASON
                position[v] = -1
                if hook is not None:
                    hook(v)
            undone += len(level.seq)
            level.seq = []
            level.alive = False
        if undone and self.queue:
            self.queue = deque(p for p in self.queue if val[p] == 1)
        self.num_assigned -= undone
        return undone

    def non_ground_levels(self) -> list[int]:
        return [lid for lid in self.levels if lid != GROUND]

    def check_partition(self) -> None:
        """Every assigned variable sits in exactly one live level at its position."""
        owner = {}
        for lid, level in self.levels.items():
            for pos, lit in enumerate(level.seq):
                v = lit >> 1
                if v in owner:
                    raise InvariantViolation(f"variable {v} in levels {owner[v]} and {lid}")
                owner[v] = lid
                if self.val[lit] != 1 or self.level_of[v] != lid or self.position[v] != pos:
                    raise InvariantViolation(f"variable {v} state disagrees with level {lid}")
            if level.decision is not None and (not level.seq or level.seq[0] != level.decision):
                raise InvariantViolation(f"level {lid} does not start with its decision")
        for v in range(1, self.num_vars + 1):
            if (self.level_of[v] >= 0) != (v in owner):
                raise InvariantViolation(f"variable {v} assigned outside any level")
        if len(owner) != self.num_assigned:
            raise InvariantViolation("assigned count out of sync")
