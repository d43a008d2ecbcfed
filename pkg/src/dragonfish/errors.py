"""Exception types shared across the package."""


class DragonfishError(Exception):
    """Base class for all package errors."""


class DomainError(DragonfishError, ValueError):
    """An argument is outside its legal domain (bad square, missing piece, ...)."""


class DataError(DragonfishError, ValueError):
    """A data file (theta vector, PSQT tables, checkpoint, record) failed to parse."""


class SequencingError(DragonfishError):
    """An operation was requested out of turn (wrong side, finished game, busy engine)."""


class ContractViolation(DragonfishError):
    """A caller-guaranteed precondition was found violated in debug validation mode."""


class NumericError(DragonfishError):
    """Optimizer state became numerically unusable (non-finite / non-PD covariance)."""
