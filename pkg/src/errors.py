"""Exception hierarchy shared by the qtoric engine and CLI.

Every error builds on a standard base so callers that only know about
``ValueError``/``RuntimeError`` keep working. The CLI maps the classes below to
its exit codes.
"""
from __future__ import annotations


class QToricError(Exception):
    """Common base for all qtoric failures."""


class InputError(QToricError, ValueError):
    """Malformed model document, flag value or configuration."""


class StabilityError(QToricError, ValueError):
    """The presentation violates W^ss = W^s or has an empty semistable locus."""

    def __init__(self, message: str, witness: tuple[int, ...] | None = None) -> None:
        super().__init__(message)
        self.witness = witness


class PreconditionError(QToricError, ValueError):
    """An operation was called outside its documented precondition."""


class ConvexityError(PreconditionError):
    """A twisting character pairs to a non-integral or negative value."""

    def __init__(self, message: str, beta: tuple, eta: tuple[int, ...]) -> None:
        super().__init__(message)
        self.beta = beta
        self.eta = eta


class SemipositivityError(PreconditionError):
    """Mirror-map extraction requested for a triple that is not semi-positive."""


class ConsistencyError(QToricError, RuntimeError):
    """An internal invariant of the engine failed; always an implementation bug."""
