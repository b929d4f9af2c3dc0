"""Exception types shared across the package."""

from __future__ import annotations


class CausalPathsError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CausalPathsError):
    """A line of an input file could not be interpreted."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ValidationError(CausalPathsError):
    """Input values violate a documented precondition."""


class PathExplosionError(CausalPathsError):
    """The number of maximal causal paths exceeds the configured limit.

    Carries the exact number of maximal paths (``count``) so callers can
    decide whether to raise the limit or reduce delta.
    """

    def __init__(self, count: int, limit: int, delta: float):
        super().__init__(
            f"{count} maximal causal paths at delta={delta} exceed the "
            f"limit of {limit}"
        )
        self.count = count
        self.limit = limit
        self.delta = delta


class InternalInvariantError(CausalPathsError):
    """An internal consistency check failed; indicates a bug, not bad input."""
