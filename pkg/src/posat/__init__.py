"""Partial order CDCL SAT solving with assertion level choice heuristics."""

from posat.dimacs import RawFormula, Verdict, parse_cnf, verify_model, write_result
from posat.engine import Heuristic, Solver, SolverConfig, solve

__all__ = [
    "Heuristic",
    "RawFormula",
    "Solver",
    "SolverConfig",
    "Verdict",
    "parse_cnf",
    "solve",
    "verify_model",
    "write_result",
]

__version__ = "0.1.0"
