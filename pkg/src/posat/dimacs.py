"""DIMACS CNF ingestion, SAT-competition output and independent model checking."""

from __future__ import annotations

import io
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import IO, Optional, Sequence, Union

from posat.errors import ContractError

log = logging.getLogger(__name__)

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"
EXIT_CODES = {SAT: 10, UNSAT: 20, UNKNOWN: 0}
MAX_LINE = 4096


class DimacsError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class RawFormula:
    """A CNF formula as read from disk.

    Literals are signed DIMACS integers. Duplicate literals and tautologies
    are kept as written; the clause database normalises them.
    """

    num_vars: int
    clauses: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ContractError(f"literal {lit} outside 1..{self.num_vars}")


@dataclass
class Verdict:
    status: str
    model: Optional[list[bool]] = None
    reason: Optional[str] = None

    @classmethod
    def sat(cls, model: Sequence[bool]) -> "Verdict":
        return cls(SAT, list(model))

    @classmethod
    def unsat(cls) -> "Verdict":
        return cls(UNSAT)

    @classmethod
    def unknown(cls, reason: str = "budget-exhausted") -> "Verdict":
        return cls(UNKNOWN, reason=reason)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def model_literals(self) -> list[int]:
        if self.model is None:
            return []
        return [v if b else -v for v, b in enumerate(self.model, start=1)]


def _as_text(source: Union[str, bytes, IO]) -> IO[str]:
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("latin-1"))
    if isinstance(source, io.TextIOBase):
        return source
    # binary file object
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("latin-1")
    return io.StringIO(data)


def parse_cnf(source: Union[str, bytes, IO]) -> RawFormula:
    """Parse DIMACS CNF from a string, bytes or an open (text or binary) file.

    A ``%`` line (SATLIB convention) ends the clause section. A clause count
    that disagrees with the header only logs a warning.
    """
    stream = _as_text(source)
    num_vars = None
    declared = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    lineno = 0
    for lineno, line in enumerate(stream, start=1):
        stripped = line.strip()
        if not stripped or stripped[0] == "c":
            continue
        if stripped[0] == "%":
            break
        if stripped[0] == "p":
            parts = stripped.split()
            if num_vars is not None:
                raise DimacsError("duplicate header", lineno)
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise DimacsError(f"malformed header {stripped!r}", lineno)
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {stripped!r}", lineno) from None
            if num_vars < 0 or declared < 0:
                raise DimacsError(f"malformed header {stripped!r}", lineno)
            continue
        if num_vars is None:
            raise DimacsError("clause data before 'p cnf' header", lineno)
        for token in stripped.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsError(f"non-integer token {token!r}", lineno) from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError(
                    f"literal {lit} exceeds declared {num_vars} variables", lineno
                )
            else:
                current.append(lit)
    if num_vars is None:
        raise DimacsError("missing 'p cnf' header", lineno)
    if current:
        raise DimacsError("last clause is not terminated by 0", lineno)
    if len(clauses) != declared:
        log.warning("header declares %d clauses, found %d", declared, len(clauses))
    return RawFormula(num_vars, clauses)


def format_cnf(formula: RawFormula, comments: Sequence[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p cnf {formula.num_vars} {len(formula.clauses)}")
    for clause in formula.clauses:
        out.append(" ".join(map(str, [*clause, 0])))
    return "\n".join(out) + "\n"


def verify_model(formula: RawFormula, model: Union[Sequence[bool], Mapping[int, bool]]) -> bool:
    """Check a total assignment against every clause by direct scan.

    ``model`` is either a sequence where ``model[v - 1]`` is the value of
    variable ``v``, or a mapping from variable to value.
    """
    if isinstance(model, Mapping):
        missing = [v for v in range(1, formula.num_vars + 1) if v not in model]
        if missing:
            raise ContractError(f"model misses variable {missing[0]}")
        values = [bool(model[v]) for v in range(1, formula.num_vars + 1)]
    else:
        if len(model) < formula.num_vars:
            raise ContractError(f"model misses variable {len(model) + 1}")
        values = [bool(b) for b in model]
    for clause in formula.clauses:
        if not any(values[abs(lit) - 1] == (lit > 0) for lit in clause):
            return False
    return True


def _value_lines(lits: Sequence[int]) -> list[str]:
    lines = []
    line = "v"
    for token in [*map(str, lits), "0"]:
        if len(line) + 1 + len(token) > MAX_LINE:
            lines.append(line)
            line = "v"
        line += " " + token
    lines.append(line)
    return lines


def write_result(verdict: Verdict) -> str:
    if verdict.status == SAT:
        lines = ["s SATISFIABLE", *_value_lines(verdict.model_literals())]
    elif verdict.status == UNSAT:
        lines = ["s UNSATISFIABLE"]
    else:
        lines = ["s UNKNOWN"]
    return "\n".join(lines) + "\n"
