class ContractError(ValueError):
    """An operation was called outside its precondition."""


class InvariantViolation(AssertionError):
    """A debug-mode consistency check failed."""
