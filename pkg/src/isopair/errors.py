"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: parse/config errors exit 1, domain
errors (bad parameters, poles inside the box) exit 2, failed identity
checks exit 3, solver non-convergence exit 4.
"""
from __future__ import annotations


class IsopairError(Exception):
    """Base class for all package errors."""


class ParseError(IsopairError):
    """Malformed expression text. Carries the offset of the bad token."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ConfigError(IsopairError):
    """Malformed job configuration or pair file."""


class DomainError(IsopairError):
    """Input is syntactically fine but outside the construction's domain."""


class ConstraintError(DomainError):
    """A named parameter constraint is violated."""

    def __init__(self, name: str, detail: str = ""):
        self.constraint = name
        message = f"parameter constraint violated: {name}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class PoleError(DomainError):
    """An expression was evaluated at a zero of its denominator."""

    def __init__(self, point):
        self.point = point
        super().__init__(f"expression has a pole at {tuple(str(c) for c in point)}")


class SolverError(IsopairError):
    """The numeric eigensolver failed to reach the required residual."""
