"""Exception types and small input validators shared across the package."""

from __future__ import annotations

import math


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class ConfigError(ValueError):
    """A scenario file failed validation; the message carries the field path."""


class HedgeMismatchError(ValueError):
    """LP position and IG contract terms do not line up for a hedge."""


class StepCollapseError(DomainError):
    """A finite-difference bump pushed an input outside its valid domain."""


def require_positive(name: str, value: float) -> float:
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return float(value)


def require_non_negative(name: str, value: float) -> float:
    if not (math.isfinite(value) and value >= 0.0):
        raise DomainError(f"{name} must be >= 0 and finite, got {value!r}")
    return float(value)


def require_finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return float(value)
