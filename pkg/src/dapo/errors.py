"""Exception types shared across the package."""


class DapoError(Exception):
    """Base class for all package errors."""


class ConfigError(DapoError):
    """Invalid configuration value (bad window/stride, ratio, dimension...)."""


class DataError(DapoError):
    """Malformed or inconsistent input data."""


class CannotPerturbError(DapoError):
    """A negative generator has no valid output for this dialogue."""


class CannotSplitError(DapoError):
    """Too few source groups to produce a train/dev split."""


class EmptyTableError(DataError):
    """No n-gram occurred in any dialogue, so no frequency table exists."""


class UndefinedCorrelationError(DataError):
    """Correlation is undefined (constant vector or too few points)."""


class TrainingError(DapoError):
    """Training diverged or hit a non-finite intermediate value."""
