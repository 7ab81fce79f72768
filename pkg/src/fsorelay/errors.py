"""Exception types raised by the analytic and simulation routines."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class PoleError(DomainError):
    """A series coefficient or denominator sits on (or too close to) a pole."""


class SeriesReliabilityError(ArithmeticError):
    """A truncated power series cannot be trusted at the requested argument.

    Raised either when the series has not converged at the chosen truncation
    or when cancellation between terms destroys the double-precision result.
    """


class BracketError(ValueError):
    """A root-finding target is not crossed inside the search bracket."""
