"""Exception types shared across modules."""


class InvariantViolation(ArithmeticError):
    """A mathematical check failed; this indicates a bug, not bad input."""
