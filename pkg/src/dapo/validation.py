"""Small input-validation helpers shared by the estimators."""

from __future__ import annotations

from sklearn.exceptions import NotFittedError

from .errors import ConfigError, DataError


def check_fitted(estimator, *attrs: str) -> None:
    """Raise :class:`NotFittedError` unless all fitted attributes exist."""
    missing = [a for a in attrs if not hasattr(estimator, a)]
    if missing:
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet "
            f"(missing {', '.join(missing)}); call fit first"
        )


def check_power_of_two(value: int, name: str) -> None:
    if value < 2 or value & (value - 1) != 0:
        raise ConfigError(f"{name} must be a power of two >= 2, got {value}")


def check_unit_interval(values, name: str) -> None:
    """Validate that every value lies in [0, 1], naming the first offender."""
    for i, v in enumerate(values):
        if not 0.0 <= v <= 1.0:
            raise DataError(f"{name}[{i}] = {v!r} outside [0, 1]")
