"""Small CNF families for tests and desk-scale benchmarks."""

from __future__ import annotations

import random
from itertools import combinations
from pathlib import Path
from typing import Optional

from posat.dimacs import RawFormula, format_cnf


def random_ksat(num_vars: int, num_clauses: int, k: int = 3, rng: Optional[random.Random] = None) -> RawFormula:
    """Uniform random k-CNF: k distinct variables per clause, random signs."""
    rng = rng or random.Random()
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), k)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return RawFormula(num_vars, clauses)


def pigeonhole(pigeons: int, holes: int) -> RawFormula:
    """Pigeon p sits in hole h iff variable (p - 1) * holes + h is true."""

    def x(p, h):
        return (p - 1) * holes + h

    clauses = [[x(p, h) for h in range(1, holes + 1)] for p in range(1, pigeons + 1)]
    for h in range(1, holes + 1):
        for p, q in combinations(range(1, pigeons + 1), 2):
            clauses.append([-x(p, h), -x(q, h)])
    return RawFormula(pigeons * holes, clauses)


def disjoint_union(left: RawFormula, right: RawFormula) -> RawFormula:
    """Conjunction of two formulas over disjoint variables; right is shifted."""
    shift = left.num_vars
    shifted = [[l + shift if l > 0 else l - shift for l in c] for c in right.clauses]
    return RawFormula(left.num_vars + right.num_vars, [list(c) for c in left.clauses] + shifted)


def interleaved_order(n_left: int, n_right: int, rng: Optional[random.Random] = None) -> tuple[int, ...]:
    """Decision order alternating between the two halves of a disjoint union."""
    rng = rng or random.Random()
    left = list(range(1, n_left + 1))
    right = list(range(n_left + 1, n_left + n_right + 1))
    rng.shuffle(left)
    rng.shuffle(right)
    order = []
    for i in range(max(n_left, n_right)):
        if i < n_left:
            order.append(left[i])
        if i < n_right:
            order.append(right[i])
    return tuple(order)


def write_corpus(directory, seed: int = 0, size: str = "small") -> list[Path]:
    """Write a desk-scale benchmark corpus grouped by family subdirectory.

    Families: random 3-SAT near the threshold, pigeonhole, and unions of
    independent random components (the sparse-dependency case).
    """
    rng = random.Random(seed)
    directory = Path(directory)
    count, n = {"tiny": (2, 30), "small": (4, 60), "medium": (8, 100)}[size]
    families = {"rand3": [], "php": [], "components": []}
    for i in range(count):
        families["rand3"].append((f"rand3-{n}-{i}", random_ksat(n, int(n * 4.26), rng=rng)))
        parts = [random_ksat(n // 4, int(n // 4 * 4.2), rng=rng) for _ in range(4)]
        union = parts[0]
        for part in parts[1:]:
            union = disjoint_union(union, part)
        families["components"].append((f"comp4x{n // 4}-{i}", union))
    for p in range(4, 4 + min(count, 4)):
        families["php"].append((f"php-{p}-{p - 1}", pigeonhole(p, p - 1)))
    written = []
    for family, items in families.items():
        (directory / family).mkdir(parents=True, exist_ok=True)
        for name, formula in items:
            path = directory / family / f"{name}.cnf"
            path.write_text(format_cnf(formula, [f"{family} {name}"]))
            written.append(path)
    return written
