"""Partial order CDCL search.

Levels are related by the dependency order kept in :class:`DepOrder`.
Propagation records a dependency whenever a literal of one level helped
propagate (or kept a clause correctly watched) at another. On a conflict
the learned clause may be asserted at any maximal level among its non
conflict levels, and only that level's dependents plus the conflict level
are undone. With ``order="total"`` the same machinery runs classical CDCL:
the assertion level is the highest remaining clause level and every later
level is undone.
"""

from __future__ import annotations

import logging
import random
import threading
import time
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

from posat import literals
from posat.clausedb import EMPTY, STORED, UNIT, ClauseDb, compute_lbd
from posat.deporder import DEFAULT_MATRIX_THRESHOLD, DepOrder
from posat.dimacs import RawFormula, Verdict
from posat.errors import ContractError, InvariantViolation
from posat.heuristics import Heuristic, choose_assertion
from posat.stats import SolveStats
from posat.trail import DECISION, GROUND, GROUND_UNIT, Trail
from posat.varorder import VarOrder

log = logging.getLogger(__name__)

TOTAL, PARTIAL = "total", "partial"
RESTART_LBD, RESTART_LUBY, RESTART_NONE = "lbd", "luby", "none"


@dataclass(frozen=True)
class SolverConfig:
    order: str = PARTIAL
    heuristic: Heuristic = Heuristic.CHRONO
    phase_saving: bool = False
    matrix_threshold: int = DEFAULT_MATRIX_THRESHOLD
    restarts: str = RESTART_LBD
    minimize: bool = True
    seed: int = 0
    random_var_freq: float = 0.0
    conflict_budget: Optional[int] = None
    # how least/most-deps decides that a dependency already exists
    deps_existing: str = "closure"
    var_decay: float = 0.95
    clause_decay: float = 0.999
    first_reduce: int = 20000
    reduce_increment: int = 500
    lbd_window: int = 100
    lbd_factor: float = 0.7
    luby_unit: int = 32
    # variables decided first, in this order, before falling back to VSIDS
    decision_order: Optional[tuple[int, ...]] = None
    debug: bool = False

    def __post_init__(self):
        object.__setattr__(self, "heuristic", Heuristic(self.heuristic))
        if self.order not in (TOTAL, PARTIAL):
            raise ContractError(f"unknown order mode {self.order!r}")
        if self.restarts not in (RESTART_LBD, RESTART_LUBY, RESTART_NONE):
            raise ContractError(f"unknown restart strategy {self.restarts!r}")
        if self.deps_existing not in ("closure", "direct"):
            raise ContractError(f"unknown dependency mode {self.deps_existing!r}")
        if self.decision_order is not None:
            object.__setattr__(self, "decision_order", tuple(self.decision_order))

    def with_(self, **changes) -> "SolverConfig":
        return replace(self, **changes)


@dataclass
class ConflictEvent:
    """What happened at one analysed conflict; emitted to a listener."""

    index: int
    kind: str  # "backtrack" or "unit" (learned unit, full restart)
    conflict_level: int
    clause: list[int]  # learned clause, DIMACS literals, asserting literal first
    clause_levels: list[int]  # levels of the non-asserting literals
    candidates: list[int]
    chosen: Optional[int]
    dead: list[int]
    undone: int
    locally_saved: int
    level_sizes: dict[int, int] = field(default_factory=dict)
    edges: list[tuple[int, int]] = field(default_factory=list)
    decisions: dict[int, int] = field(default_factory=dict)
    var_levels: dict[int, int] = field(default_factory=dict)


@dataclass
class RestartEvent:
    index: int
    dead: list[int]
    undone: int
    decisions: dict[int, int] = field(default_factory=dict)


def luby(i: int) -> int:
    """i-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 2**seq


class Solver:
    def __init__(
        self,
        formula: RawFormula,
        config: Optional[SolverConfig] = None,
        listener: Optional[Callable[[object], None]] = None,
    ):
        self.formula = formula
        self.config = config = config or SolverConfig()
        self.listener = listener
        self.num_vars = n = formula.num_vars
        self.trail = Trail(n)
        self.db = ClauseDb(n, config.clause_decay)
        self.dep = DepOrder(config.matrix_threshold)
        self.order = VarOrder(n, config.var_decay)
        self.trail.on_unassign = self.order.insert
        self.stats = SolveStats()
        self.partial = config.order == PARTIAL
        self._rng = random.Random(config.seed)
        self._interrupt = threading.Event()
        self._seen = bytearray(n + 1)
        self._conflict_level = GROUND
        self._undone_backtrack = 0
        self._undone_restart = 0
        self._lbd_recent: deque[int] = deque(maxlen=config.lbd_window)
        self._lbd_sum = 0
        self._restart_conflicts = 0
        self._luby_index = 0
        self._next_reduce = config.first_reduce
        self._reduce_interval = config.first_reduce
        self.unsat = False
        for clause in formula.clauses:
            self.add_clause(clause)

    # ------------------------------------------------------------------ input

    def add_clause(self, clause: Sequence[int]) -> None:
        """Add an original clause (DIMACS literals) before solving."""
        result = self.db.ingest([literals.from_dimacs(l) for l in clause])
        if result.kind == EMPTY:
            self.unsat = True
        elif result.kind == UNIT:
            lit = result.value
            value = self.trail.val[lit]
            if value == -1:
                self.unsat = True
            elif value == 0:
                self.trail.assign(lit, GROUND, GROUND_UNIT)

    @property
    def conflict_level(self) -> int:
        """Level whose propagation hit the last conflict."""
        return self._conflict_level

    def interrupt(self) -> None:
        """Ask a running solve to stop at the next conflict or decision."""
        self._interrupt.set()

    # ------------------------------------------------------------ propagation

    def propagate(self) -> Optional[int]:
        """Unit propagation to fixpoint, recording level dependencies.

        Returns the ref of a falsified clause, or None. The level of the
        dequeued literal is the level whose propagation is running; on a
        conflict it is the conflict level.
        """
        trail = self.trail
        val, level_of = trail.val, trail.level_of
        watches, clauses = self.db.watches, self.db.clauses
        queue = trail.queue
        add_dep = self.dep.add_dep if self.partial else None
        assign = trail.assign
        checks = 0
        dequeued = 0
        conflict = None
        while queue:
            p = queue.popleft()
            dequeued += 1
            lam = level_of[p >> 1]
            false_lit = p ^ 1
            ws = watches[false_lit]
            n = len(ws)
            i = j = 0
            while i < n:
                ref = ws[i]
                i += 1
                checks += 1
                lits = clauses[ref].lits
                if lits[0] == false_lit:
                    lits[0] = lits[1]
                    lits[1] = false_lit
                w = lits[0]
                vw = val[w]
                if vw == 1:
                    ws[j] = ref
                    j += 1
                    if add_dep is not None:
                        lw = level_of[w >> 1]
                        if lw != lam and lw != GROUND:
                            add_dep(lw, lam)
                    continue
                for k in range(2, len(lits)):
                    q = lits[k]
                    if val[q] != -1:
                        lits[1] = q
                        lits[k] = false_lit
                        watches[q].append(ref)
                        break
                else:
                    ws[j] = ref
                    j += 1
                    if vw == 0:
                        assign(w, lam, ref)
                        if add_dep is not None:
                            for q in lits[1:]:
                                lq = level_of[q >> 1]
                                if lq != lam and lq != GROUND:
                                    add_dep(lq, lam)
                    else:
                        conflict = ref
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
            del ws[j:]
            if conflict is not None:
                self._conflict_level = lam
                break
        self.stats.clause_checks += checks
        self.stats.propagations += dequeued
        return conflict

    # --------------------------------------------------------------- analysis

    def analyze(self, conflict: int, lam: int) -> list[int]:
        """First-UIP learned clause (internal codes), asserting literal first.

        Ground literals are dropped. Variable activities are bumped for every
        variable met during resolution.
        """
        trail, db = self.trail, self.db
        level_of, reason = trail.level_of, trail.reason
        clauses = db.clauses
        seen = self._seen
        bump = self.order.bump
        seq = trail.levels[lam].seq
        idx = len(seq) - 1
        learnt = [0]
        path = 0
        p = -1
        ref = conflict
        while True:
            clause = clauses[ref]
            if clause.learned:
                db.bump_clause_activity(ref)
                if clause.lbd > 2:
                    lbd = compute_lbd(clause.lits, level_of)
                    if lbd < clause.lbd:
                        clause.lbd = lbd
            lits = clause.lits
            for q in lits if p < 0 else lits[1:]:
                v = q >> 1
                if not seen[v]:
                    lv = level_of[v]
                    if lv == GROUND:
                        continue
                    seen[v] = 1
                    bump(v)
                    if lv == lam:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[seq[idx] >> 1]:
                idx -= 1
            p = seq[idx]
            idx -= 1
            seen[p >> 1] = 0
            path -= 1
            if path == 0:
                break
            ref = reason[p >> 1]
            if ref < 0:
                raise InvariantViolation(f"resolution reached a non-clause reason at {p}")
        learnt[0] = p ^ 1

        if self.config.minimize and len(learnt) > 2:
            learnt = self._minimize(learnt)
        for q in learnt:
            seen[q >> 1] = 0
        return learnt

    def _minimize(self, learnt: list[int]) -> list[int]:
        # learnt[1:] are still marked in _seen
        level_of, reason = self.trail.level_of, self.trail.reason
        levels = {level_of[q >> 1] for q in learnt[1:]}
        cleared: list[int] = []
        out = [learnt[0]]
        for q in learnt[1:]:
            if reason[q >> 1] < 0 or not self._redundant(q, levels, cleared):
                out.append(q)
        for v in cleared:
            self._seen[v] = 0
        # removed literals must be unmarked too
        for q in learnt[1:]:
            self._seen[q >> 1] = 0
        return out

    def _redundant(self, p: int, levels: set[int], cleared: list[int]) -> bool:
        seen = self._seen
        level_of, reason = self.trail.level_of, self.trail.reason
        clauses = self.db.clauses
        top = len(cleared)
        stack = [p]
        while stack:
            q = stack.pop()
            for r in clauses[reason[q >> 1]].lits[1:]:
                v = r >> 1
                if seen[v] or level_of[v] == GROUND:
                    continue
                if reason[v] >= 0 and level_of[v] in levels:
                    seen[v] = 1
                    stack.append(r)
                    cleared.append(v)
                else:
                    for u in cleared[top:]:
                        seen[u] = 0
                    del cleared[top:]
                    return False
        return True

    # -------------------------------------------------------------- conflicts

    def candidates(self, clause_levels: set[int]) -> set[int]:
        if not clause_levels:
            return set()
        if not self.partial:
            return {max(clause_levels)}
        return self.dep.maximal_of(clause_levels)

    def _level_size(self, lid: int) -> int:
        level = self.trail.levels.get(lid)
        return len(level.seq) if level is not None else 0

    def backtrack(self, a: int, lam: int) -> tuple[set[int], int]:
        """Undo the conflict level and every level depending on ``a``."""
        if self.partial:
            dead = {lam} | self.dep.dependents_closure(a)
        else:
            dead = {l for l in self.trail.levels if l > a}
        undone = self._delete(dead)
        return dead, undone

    def _delete(self, dead: set[int]) -> int:
        undone = self.trail.delete_levels(dead)
        if self.partial:
            self.dep.remove_levels(dead)
        return undone

    def _handle_conflict(self, conflict: int, lam: int) -> None:
        stats, trail, cfg = self.stats, self.trail, self.config
        stats.conflicts += 1
        learnt = self.analyze(conflict, lam)
        level_of = trail.level_of
        clause_levels = {level_of[q >> 1] for q in learnt[1:]}
        lbd = len(clause_levels) + 1
        snapshot = self._snapshot() if self.listener is not None else None

        cands = self.candidates(clause_levels)
        if not cands:
            dead = set(trail.non_ground_levels())
            undone = self._delete(dead)
            self._undone_restart += undone
            stats.undone_total += undone
            trail.assign(learnt[0], GROUND, GROUND_UNIT)
            stats.learned += 1
            self._emit_conflict("unit", lam, learnt, clause_levels, cands, None, dead, undone, 0, snapshot)
            self._after_conflict(lbd)
            return

        if len(cands) > 1:
            stats.conflicts_multi_candidate += 1
            stats.candidate_count_sum_when_multi += len(cands)
        a = choose_assertion(
            cands, cfg.heuristic, clause_levels, lam, self.dep, self._level_size, cfg.deps_existing
        )
        if cfg.debug:
            self._check_candidate(a, lam, clause_levels)

        dead, undone = self.backtrack(a, lam)
        saved = 0
        if self.partial:
            saved = sum(len(lv.seq) for lid, lv in trail.levels.items() if lid > a)
        stats.undone_total += undone
        stats.locally_saved_total += saved
        self._undone_backtrack += undone
        if cfg.debug:
            self._check_asserting(learnt)
            self._check_reasons()
            trail.check_partition()
            if self.partial:
                self.dep.check()
        self.assert_learned(learnt, a, lbd)
        self._emit_conflict("backtrack", lam, learnt, clause_levels, cands, a, dead, undone, saved, snapshot)
        self._after_conflict(lbd)

    def assert_learned(self, learnt: list[int], a: int, lbd: int) -> None:
        """Store the learned clause and propagate its asserting literal at ``a``."""
        level_of = self.trail.level_of
        # The second watch must sit at level a itself: deleting a then
        # unassigns both watches. Any other clause level is below a, so a
        # watch there could outlive a and leave the clause unit unnoticed.
        best = next(k for k in range(1, len(learnt)) if level_of[learnt[k] >> 1] == a)
        learnt[1], learnt[best] = learnt[best], learnt[1]
        result = self.db.ingest(learnt, learned=True)
        if result.kind != STORED:
            raise InvariantViolation(f"learned clause ingested as {result.kind}")
        self.db.clauses[result.value].lbd = lbd
        self.trail.assign(learnt[0], a, result.value)
        if self.partial:
            add_dep = self.dep.add_dep
            for q in learnt[1:]:
                lq = level_of[q >> 1]
                if lq != a:
                    add_dep(lq, a)
        self.stats.learned += 1

    def _after_conflict(self, lbd: int) -> None:
        self.order.decay()
        self.db.decay_clause_activities()
        self._lbd_recent.append(lbd)
        self._lbd_sum += lbd
        self._restart_conflicts += 1

    # --------------------------------------------------------------- restarts

    def _restart_due(self) -> bool:
        cfg = self.config
        if cfg.restarts == RESTART_LBD:
            recent = self._lbd_recent
            if len(recent) < cfg.lbd_window:
                return False
            return sum(recent) / len(recent) * cfg.lbd_factor > self._lbd_sum / self.stats.conflicts
        if cfg.restarts == RESTART_LUBY:
            return self._restart_conflicts >= cfg.luby_unit * luby(self._luby_index)
        return False

    def restart(self) -> int:
        dead = set(self.trail.non_ground_levels())
        decisions = self._decisions() if self.listener is not None else {}
        undone = self._delete(dead)
        self.stats.restarts += 1
        self.stats.undone_total += undone
        self._undone_restart += undone
        self._lbd_recent.clear()
        self._restart_conflicts = 0
        self._luby_index += 1
        if self.listener is not None:
            self.listener(RestartEvent(self.stats.conflicts, sorted(dead), undone, decisions))
        return undone

    def _reduce_db(self) -> None:
        trail, clauses = self.trail, self.db.clauses

        def is_reason(ref):
            v = clauses[ref].lits[0] >> 1
            return trail.reason[v] == ref

        self.stats.deleted += self.db.reduce_learned(is_reason)
        self._reduce_interval += self.config.reduce_increment
        self._next_reduce = self.stats.conflicts + self._reduce_interval

    # -------------------------------------------------------------- decisions

    def decide(self) -> int:
        """Open a new level with the next decision; returns the literal code."""
        trail, order = self.trail, self.order
        val = trail.val
        v = 0
        if self.config.decision_order:
            for u in self.config.decision_order:
                if not val[2 * u]:
                    v = u
                    break
        if not v and self.config.random_var_freq and self._rng.random() < self.config.random_var_freq:
            free = [u for u in range(1, self.num_vars + 1) if not val[2 * u]]
            if free:
                v = self._rng.choice(free)
        while not v:
            if not len(order):
                raise ContractError("decide called with every variable assigned")
            u = order.pop()
            if not val[2 * u]:
                v = u
        positive = trail.saved_phase[v] if self.config.phase_saving else False
        lit = 2 * v + (0 if positive else 1)
        self._open_level(lit)
        return lit

    def decide_literal(self, lit: int) -> int:
        """Open a new level deciding the DIMACS literal ``lit``; returns its level id."""
        return self._open_level(literals.from_dimacs(lit))

    def _open_level(self, code: int) -> int:
        level = self.trail.new_level(code)
        if self.partial:
            level.slot = self.dep.add_level(level.id)
        self.stats.decisions += 1
        return level.id

    # ------------------------------------------------------------------ solve

    def solve(self, timeout: Optional[float] = None) -> Verdict:
        timer = None
        if timeout is not None:
            timer = threading.Timer(timeout, self.interrupt)
            timer.daemon = True
            timer.start()
        start = time.perf_counter()
        try:
            verdict = self._search()
        finally:
            if timer is not None:
                timer.cancel()
            self.stats.wall_time = time.perf_counter() - start
        if self.config.debug:
            self._check_counters()
        return verdict

    def _search(self) -> Verdict:
        if self.unsat:
            return Verdict.unsat()
        cfg, stats, trail = self.config, self.stats, self.trail
        budget = cfg.conflict_budget
        while True:
            conflict = self.propagate()
            if conflict is not None:
                lam = self._conflict_level
                if lam == GROUND:
                    return Verdict.unsat()
                if budget is not None and stats.conflicts >= budget:
                    return Verdict.unknown("budget-exhausted")
                if self._interrupt.is_set():
                    return Verdict.unknown("interrupted")
                self._handle_conflict(conflict, lam)
                continue
            if cfg.debug:
                self.check_fixpoint()
            if trail.num_assigned == self.num_vars:
                return Verdict.sat(self.model())
            if self._interrupt.is_set():
                return Verdict.unknown("interrupted")
            if self._restart_due():
                self.restart()
                continue
            if stats.conflicts >= self._next_reduce:
                self._reduce_db()
            self.decide()

    def model(self) -> list[bool]:
        val = self.trail.val
        return [val[2 * v] == 1 for v in range(1, self.num_vars + 1)]

    # ----------------------------------------------------------- observation

    def _decisions(self) -> dict[int, int]:
        return {
            lid: literals.to_dimacs(lv.decision)
            for lid, lv in self.trail.levels.items()
            if lv.decision is not None
        }

    def _snapshot(self) -> dict:
        trail = self.trail
        return {
            "level_sizes": {lid: len(lv.seq) for lid, lv in trail.levels.items()},
            "edges": self.dep.edges() if self.partial else [],
            "decisions": self._decisions(),
        }

    def _emit_conflict(self, kind, lam, learnt, clause_levels, cands, chosen, dead, undone, saved, snapshot):
        if self.listener is None:
            return
        level_of = self.trail.level_of
        var_levels = {q >> 1: level_of[q >> 1] for q in learnt[1:]}
        var_levels[learnt[0] >> 1] = lam
        self.listener(
            ConflictEvent(
                index=self.stats.conflicts,
                kind=kind,
                conflict_level=lam,
                clause=[literals.to_dimacs(q) for q in learnt],
                clause_levels=sorted(clause_levels),
                candidates=sorted(cands),
                chosen=chosen,
                dead=sorted(dead),
                undone=undone,
                locally_saved=saved,
                level_sizes=snapshot["level_sizes"],
                edges=snapshot["edges"],
                decisions=snapshot["decisions"],
                var_levels=var_levels,
            )
        )

    # ------------------------------------------------------------ debug checks

    def check_fixpoint(self) -> None:
        """Full scan at a propagation fixpoint: nothing falsified, nothing unit."""
        val = self.trail.val
        for ref, clause in enumerate(self.db.clauses):
            if clause is None:
                continue
            free = 0
            for q in clause.lits:
                if val[q] == 1:
                    break
                if val[q] == 0:
                    free += 1
            else:
                if free == 0:
                    raise InvariantViolation(f"clause {ref} falsified at fixpoint")
                if free == 1:
                    raise InvariantViolation(f"clause {ref} unit but not propagated")
        for clause in self.formula.clauses:
            if len(clause) == 1 and val[literals.from_dimacs(clause[0])] != 1:
                raise InvariantViolation(f"unit clause {clause} not satisfied")
        self.db.check_watches()
        self.trail.check_partition()
        if self.partial:
            self.dep.check()

    def _check_reasons(self) -> None:
        trail, clauses = self.trail, self.db.clauses
        for v in range(1, self.num_vars + 1):
            ref = trail.reason[v]
            if ref < 0:
                continue
            lits = clauses[ref].lits
            if lits[0] >> 1 != v or trail.val[lits[0]] != 1:
                raise InvariantViolation(f"reason of {v} does not propagate it")
            for q in lits[1:]:
                if trail.val[q] != -1:
                    raise InvariantViolation(f"antecedent {q} of {v} is not false")

    def _check_asserting(self, learnt: list[int]) -> None:
        val = self.trail.val
        if val[learnt[0]] != 0:
            raise InvariantViolation("asserting literal still assigned after backtrack")
        if any(val[q] != -1 for q in learnt[1:]):
            raise InvariantViolation("learned clause not asserting after backtrack")

    def _check_candidate(self, a: int, lam: int, clause_levels: set[int]) -> None:
        if self.partial:
            hit = (clause_levels - {lam, a}) & self.dep.dependents_closure(a)
            if hit:
                raise InvariantViolation(f"assertion level {a} would delete clause levels {hit}")

    def _check_counters(self) -> None:
        s = self.stats
        if s.undone_total != self._undone_backtrack + self._undone_restart:
            raise InvariantViolation("undone_total disagrees with backtrack + restart undos")


def solve(formula: RawFormula, config: Optional[SolverConfig] = None, **kwargs) -> tuple[Verdict, SolveStats]:
    solver = Solver(formula, config, **kwargs)
    verdict = solver.solve()
    return verdict, solver.stats
