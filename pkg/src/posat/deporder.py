"""Dependency order between live decision levels.

``j <_D i`` (level ``i`` depends on level ``j``) is stored as direct edges
only, once in each direction, plus an optional slot-indexed boolean matrix
for constant-time edge tests. Transitive questions are answered by graph
traversal at query time. The ground level (id 0) is below every level by
convention and is never stored.
"""

from __future__ import annotations

from typing import Iterable

from posat.errors import ContractError, InvariantViolation

GROUND = 0
DEFAULT_MATRIX_THRESHOLD = 4096


class DepOrder:
    def __init__(self, matrix_threshold: int = DEFAULT_MATRIX_THRESHOLD):
        self.threshold = matrix_threshold
        self.matrix_enabled = True
        self.below: list[set[int]] = []  # per slot: slots it depends on directly
        self.above: list[set[int]] = []  # per slot: slots depending on it directly
        self.matrix: list[bytearray] = []
        self.slot_of: dict[int, int] = {}
        self.id_of: list[int] = []  # -1 for a free slot
        self._free: list[int] = []
        self.edge_count = 0

    def __len__(self):
        return len(self.slot_of)

    def __contains__(self, lid):
        return lid in self.slot_of

    def add_level(self, lid: int) -> int:
        if lid == GROUND:
            raise ContractError("the ground level is implicit")
        if lid in self.slot_of:
            raise ContractError(f"level {lid} already registered")
        if self._free:
            slot = self._free.pop()
            self.id_of[slot] = lid
        else:
            slot = len(self.id_of)
            self.id_of.append(lid)
            self.below.append(set())
            self.above.append(set())
            if self.matrix_enabled:
                self._grow_matrix()
        self.slot_of[lid] = slot
        if self.matrix_enabled and len(self.slot_of) > self.threshold:
            self._drop_matrix()
        return slot

    def _grow_matrix(self):
        size = len(self.id_of)
        for row in self.matrix:
            row.extend(bytes(size - len(row)))
        self.matrix.append(bytearray(size))

    def _drop_matrix(self):
        self.matrix = []
        self.matrix_enabled = False

    def set_matrix_threshold(self, threshold: int) -> None:
        self.threshold = threshold
        if self.matrix_enabled and len(self.slot_of) > threshold:
            self._drop_matrix()

    def add_dep(self, j: int, i: int) -> bool:
        """Record that level ``i`` depends on level ``j``; False if already known."""
        if j == GROUND:
            return False
        if i == j:
            raise ContractError(f"level {i} cannot depend on itself")
        slot_of = self.slot_of
        try:
            sj = slot_of[j]
            si = slot_of[i]
        except KeyError as exc:
            raise ContractError(f"level {exc.args[0]} is not alive") from None
        if self.matrix_enabled:
            row = self.matrix[sj]
            if row[si]:
                return False
            row[si] = 1
        elif sj in self.below[si]:
            return False
        self.below[si].add(sj)
        self.above[sj].add(si)
        self.edge_count += 1
        return True

    def has_dep(self, j: int, i: int) -> bool:
        """Direct edge test."""
        if j == GROUND or j not in self.slot_of or i not in self.slot_of:
            return False
        sj, si = self.slot_of[j], self.slot_of[i]
        if self.matrix_enabled:
            return bool(self.matrix[sj][si])
        return sj in self.below[si]

    def _reach(self, start: int, adj: list[set[int]]) -> set[int]:
        seen = set()
        stack = list(adj[start])
        while stack:
            s = stack.pop()
            if s not in seen:
                seen.add(s)
                stack.extend(adj[s] - seen)
        return seen

    def dependents_closure(self, a: int) -> set[int]:
        """All live levels that depend on ``a``, directly or transitively."""
        slot = self.slot_of.get(a)
        if slot is None:
            return set()
        id_of = self.id_of
        return {id_of[s] for s in self._reach(slot, self.above)}

    def ancestors(self, a: int) -> set[int]:
        """All live levels that ``a`` depends on, directly or transitively."""
        slot = self.slot_of.get(a)
        if slot is None:
            return set()
        id_of = self.id_of
        return {id_of[s] for s in self._reach(slot, self.below)}

    def reaches(self, j: int, i: int) -> bool:
        """True when ``i`` depends on ``j`` through some chain of edges."""
        return self._any_above(j, {i})

    def _any_above(self, a: int, targets: set[int]) -> bool:
        slot = self.slot_of.get(a)
        if slot is None or not targets:
            return False
        target_slots = {self.slot_of[t] for t in targets if t in self.slot_of}
        above = self.above
        seen = set()
        stack = [slot]
        while stack:
            s = stack.pop()
            for t in above[s]:
                if t in target_slots:
                    return True
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return False

    def maximal_of(self, levels: Iterable[int]) -> set[int]:
        """Members of ``levels`` on which no other member depends."""
        levels = set(levels)
        if len(levels) <= 1:
            return levels
        return {a for a in levels if not self._any_above(a, levels - {a})}

    def remove_levels(self, dead: Iterable[int]) -> None:
        dead_slots = []
        for lid in dead:
            if lid == GROUND:
                raise ContractError("the ground level cannot be removed")
            slot = self.slot_of.pop(lid, None)
            if slot is not None:
                dead_slots.append(slot)
        below, above, matrix = self.below, self.above, self.matrix
        for s in dead_slots:
            for t in below[s]:
                above[t].discard(s)
                if matrix:
                    matrix[t][s] = 0
            for t in above[s]:
                below[t].discard(s)
                if matrix:
                    matrix[s][t] = 0
            below[s].clear()
            above[s].clear()
        self.edge_count = sum(len(b) for b in below)
        for s in dead_slots:
            self.id_of[s] = -1
            self._free.append(s)

    def clear(self) -> None:
        self.remove_levels(list(self.slot_of))

    def edges(self) -> list[tuple[int, int]]:
        """Direct edges as (j, i) level-id pairs, meaning i depends on j."""
        id_of = self.id_of
        return sorted(
            (id_of[sj], id_of[si]) for si, bs in enumerate(self.below) for sj in bs
        )

    def check(self, acyclic_limit: int = 200) -> None:
        """Full consistency scan: transposes, matrix mirror, acyclicity."""
        for si, bs in enumerate(self.below):
            for sj in bs:
                if si not in self.above[sj]:
                    raise InvariantViolation(f"edge {sj}->{si} missing from above lists")
                if self.id_of[sj] < 0 or self.id_of[si] < 0:
                    raise InvariantViolation("edge touches a free slot")
        for sj, ab in enumerate(self.above):
            for si in ab:
                if sj not in self.below[si]:
                    raise InvariantViolation(f"edge {sj}->{si} missing from below lists")
        if self.matrix_enabled:
            for sj, row in enumerate(self.matrix):
                for si, bit in enumerate(row):
                    if bool(bit) != (sj in self.below[si]):
                        raise InvariantViolation(f"matrix disagrees at ({sj}, {si})")
        for lid, slot in self.slot_of.items():
            if self.id_of[slot] != lid:
                raise InvariantViolation(f"slot map broken for level {lid}")
        if len(self.slot_of) <= acyclic_limit:
            for lid in self.slot_of:
                if lid in self.dependents_closure(lid):
                    raise InvariantViolation(f"cycle through level {lid}")
