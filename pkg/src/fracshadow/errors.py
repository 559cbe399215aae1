"""Exception hierarchy shared across the package.

Everything raised on purpose derives from :class:`FracshadowError`, so
callers (the service layer in particular) can map failures to responses
without enumerating modules.
"""

from __future__ import annotations

__all__ = [
    "FracshadowError",
    "ExpressionError",
    "ParseError",
    "UnknownIdentifierError",
    "EvalDomainError",
    "NonDifferentiableError",
    "DomainError",
]


class FracshadowError(Exception):
    """Base class for all errors raised by this package."""


class ExpressionError(FracshadowError):
    """Problem with an expression source string.

    Parameters
    ----------
    message:
        Human-readable description.
    position:
        0-based offset into the source string where the problem starts.
    """

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ParseError(ExpressionError):
    """The source string is not a well-formed expression."""


class UnknownIdentifierError(ExpressionError):
    """An identifier is neither the variable ``t`` nor a known function."""


class EvalDomainError(FracshadowError):
    """An expression was evaluated outside its mathematical domain.

    Raised for things like ``ln(-1)``, ``sqrt(-2)``, division by zero,
    or any non-finite intermediate.  Carries the offending coordinate so
    quadrature engines can report where inside the interval evaluation
    broke down.
    """

    def __init__(self, message: str, coordinate: float | None = None) -> None:
        if coordinate is not None:
            message = f"{message} at t = {coordinate!r}"
        super().__init__(message)
        self.coordinate = coordinate


class NonDifferentiableError(FracshadowError):
    """Symbolic differentiation hit a node with no derivative rule."""


class DomainError(FracshadowError):
    """A numeric routine was called with arguments outside its contract.

    Covers bad operator parameters (``alpha`` out of range, empty
    intervals, tau outside a scale's support) and range failures such as
    gamma overflow.
    """
