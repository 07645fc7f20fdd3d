"""Input validation helpers shared by every module."""

from __future__ import annotations

import numbers

import numpy as np


class ValidationError(ValueError):
    """Bad input: wrong domain, wrong parity, inconsistent sizes."""


class ResourceCapError(RuntimeError):
    """A request exceeds a configured size cap (search length, sieve bound)."""


def check_int(value, name: str, minimum: int | None = None, maximum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, numbers.Real) and float(value).is_integer():
            value = int(value)
        else:
            raise ValidationError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ValidationError(f"{name} must be <= {maximum}, got {value}")
    return value


def check_positive(value, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be a finite positive number, got {value!r}")
    return value


def as_1d(values, name: str, dtype=None) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{name} must be nonempty")
    return arr


def coefficients_of(seq) -> np.ndarray:
    """Integer coefficient vector of a SignSequence, BinarySequence or raw array."""
    from .sequences import BinarySequence, SignSequence

    if isinstance(seq, SignSequence):
        return seq.coeffs
    if isinstance(seq, BinarySequence):
        return seq.bits
    return as_1d(seq, "sequence")
