"""Internal literal encoding.

Variable ``v`` (1-based) has positive literal ``2*v`` and negative literal
``2*v + 1``, so negation is ``lit ^ 1`` and the variable is ``lit >> 1``.
"""


def from_dimacs(lit: int) -> int:
    return 2 * lit if lit > 0 else -2 * lit + 1


def to_dimacs(code: int) -> int:
    v = code >> 1
    return -v if code & 1 else v


def var(code: int) -> int:
    return code >> 1


def neg(code: int) -> int:
    return code ^ 1
