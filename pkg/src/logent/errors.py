"""Exception types shared across the package."""


class LogentError(Exception):
    """Base class for all package errors."""


class NormalizationError(LogentError, ValueError):
    """Entries do not sum to one within tolerance."""


class DimensionMismatchError(LogentError, ValueError):
    """Operands live in spaces of different dimension."""


class DomainError(LogentError, ValueError):
    """Input outside the mathematical domain of the operation."""


class NoSolutionError(LogentError, ValueError):
    """The constraint set is empty for the requested parameters."""


class InadmissibleStateError(LogentError, ValueError):
    """State carries information above one where admissibility is required."""


class DegenerateConstraintError(LogentError, ValueError):
    """The observable is constant, so the multiplier system is singular."""


class GridError(LogentError, ValueError):
    """Grid parameters are inconsistent or insufficient for the request."""
