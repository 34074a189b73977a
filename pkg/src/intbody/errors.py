"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class IntBodyError(Exception):
    """Base class for every error raised by the package."""


class DomainError(IntBodyError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SchemaError(IntBodyError, ValueError):
    """Malformed body / density description (JSON or piece list)."""


class UnsupportedError(IntBodyError, NotImplementedError):
    """Valid input that the implementation deliberately does not handle."""


class AccuracyError(IntBodyError, ArithmeticError):
    """A numerical tolerance could not be met.

    ``estimate`` carries the achieved error estimate and ``where`` the
    worst location (grid point, panel, ...) when one is known.
    """

    def __init__(self, message: str, estimate: float | None = None, where=None):
        super().__init__(message)
        self.estimate = estimate
        self.where = where


class VerdictError(IntBodyError):
    """A computation succeeded but its outcome forbids the requested object."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotStarBodyError(VerdictError):
    """A generating density is negative somewhere, so it has no generator."""


class DistributionalError(VerdictError, UnsupportedError):
    """A density carries Dirac atoms where a function is required."""
