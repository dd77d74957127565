"""Clause arena, watch lists and learned-clause bookkeeping."""

from __future__ import annotations

from typing import Callable, NamedTuple, Optional, Sequence

from posat.errors import ContractError, InvariantViolation

STORED, UNIT, EMPTY, TAUTOLOGY = "stored", "unit", "empty", "tautology"

RESCALE_LIMIT = 1e20


class Clause:
    __slots__ = ("lits", "learned", "lbd", "activity")

    def __init__(self, lits: list[int], learned: bool = False, lbd: int = 0):
        self.lits = lits
        self.learned = learned
        self.lbd = lbd
        self.activity = 0.0

    def __repr__(self):
        kind = "learned" if self.learned else "original"
        return f"Clause({self.lits}, {kind}, lbd={self.lbd})"


class Ingested(NamedTuple):
    kind: str
    value: Optional[int] = None  # clause ref for STORED, literal for UNIT


class ClauseDb:
    """Owns every stored clause (length >= 2) and the watch index.

    ``watches[p]`` lists the refs of clauses whose watched pair (positions
    0 and 1) contains ``p``; it is visited when ``p`` becomes false.
    """

    def __init__(self, num_vars: int, clause_decay: float = 0.999):
        self.num_vars = num_vars
        self.clauses: list[Optional[Clause]] = []
        self.watches: list[list[int]] = [[] for _ in range(2 * num_vars + 2)]
        self.learned: list[int] = []
        self._free: list[int] = []
        self.clause_decay = clause_decay
        self.clause_inc = 1.0

    def __len__(self):
        return len(self.clauses) - len(self._free)

    def __getitem__(self, ref: int) -> Clause:
        return self.clauses[ref]

    def ingest(self, lits: Sequence[int], learned: bool = False) -> Ingested:
        """Normalise and store a clause given as internal literal codes.

        Order is preserved after removing duplicates, so the caller chooses
        the watched pair by putting it first.
        """
        limit = 2 * self.num_vars + 1
        seen = set()
        out = []
        for lit in lits:
            if lit < 2 or lit > limit:
                raise ContractError(f"literal code {lit} out of range")
            if lit in seen:
                continue
            if lit ^ 1 in seen:
                return Ingested(TAUTOLOGY)
            seen.add(lit)
            out.append(lit)
        if not out:
            return Ingested(EMPTY)
        if len(out) == 1:
            return Ingested(UNIT, out[0])
        clause = Clause(out, learned)
        if self._free:
            ref = self._free.pop()
            self.clauses[ref] = clause
        else:
            ref = len(self.clauses)
            self.clauses.append(clause)
        self.watches[out[0]].append(ref)
        self.watches[out[1]].append(ref)
        if learned:
            self.learned.append(ref)
        return Ingested(STORED, ref)

    def bump_clause_activity(self, ref: int) -> None:
        clause = self.clauses[ref]
        clause.activity += self.clause_inc
        if clause.activity > RESCALE_LIMIT:
            for r in self.learned:
                self.clauses[r].activity /= RESCALE_LIMIT
            self.clause_inc /= RESCALE_LIMIT

    def decay_clause_activities(self) -> None:
        self.clause_inc /= self.clause_decay
        if self.clause_inc > RESCALE_LIMIT:
            for r in self.learned:
                self.clauses[r].activity /= RESCALE_LIMIT
            self.clause_inc /= RESCALE_LIMIT

    def reduce_learned(self, keep: Callable[[int], bool] = lambda ref: False) -> int:
        """Delete the worse half of the learned clauses.

        Clauses are ranked by (lbd ascending, activity descending). Within
        the worse half, glue clauses (lbd <= 2) and clauses for which
        ``keep(ref)`` holds (the solver passes its reason test) survive.
        """
        clauses = self.clauses
        ranked = sorted(self.learned, key=lambda r: (clauses[r].lbd, -clauses[r].activity))
        half = len(ranked) // 2
        doomed = {r for r in ranked[len(ranked) - half:] if clauses[r].lbd > 2 and not keep(r)}
        if not doomed:
            return 0
        touched = set()
        for r in doomed:
            lits = clauses[r].lits
            touched.add(lits[0])
            touched.add(lits[1])
        for p in touched:
            ws = self.watches[p]
            ws[:] = [r for r in ws if r not in doomed]
        for r in doomed:
            clauses[r] = None
            self._free.append(r)
        self.learned = [r for r in self.learned if r not in doomed]
        return len(doomed)

    def check_watches(self) -> None:
        """Full scan: each live clause sits in exactly its two watch lists."""
        counts: dict[int, int] = {}
        for p, ws in enumerate(self.watches):
            for r in ws:
                clause = self.clauses[r]
                if clause is None:
                    raise InvariantViolation(f"stale watch of deleted clause {r} on {p}")
                if p not in (clause.lits[0], clause.lits[1]):
                    raise InvariantViolation(f"clause {r} watched on unwatched literal {p}")
                counts[r] = counts.get(r, 0) + 1
        for r, clause in enumerate(self.clauses):
            if clause is None:
                continue
            if len(clause.lits) < 2:
                raise InvariantViolation(f"stored clause {r} shorter than 2")
            if counts.get(r, 0) != 2:
                raise InvariantViolation(f"clause {r} has {counts.get(r, 0)} watch entries")


def compute_lbd(lits: Sequence[int], level_of: Sequence[int]) -> int:
    """Number of distinct assignment levels among ``lits``."""
    levels = set()
    for lit in lits:
        lv = level_of[lit >> 1]
        if lv < 0:
            raise ContractError(f"literal code {lit} is unassigned")
        levels.add(lv)
    return len(levels)
