"""
Validation utilities for interfem

This module provides common validation functions for numerical parameters
and geometric inputs.
"""

import math
from typing import Any, Sequence

import numpy as np

from ..exceptions import ValidationError


def validate_positive(value: Any, name: str) -> float:
    """
    Validate a strictly positive finite real.

    Args:
        value: The value to validate
        name: Parameter name used in the error message

    Returns:
        The value as float

    Raises:
        ValidationError: If the value is not a positive finite number
    """
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(number) or number <= 0:
        raise ValidationError(f"{name} must be positive and finite, got {value!r}")
    return number


def validate_range(value: Any, name: str, low: float, high: float,
                   low_inclusive: bool = True, high_inclusive: bool = True) -> float:
    """
    Validate that a number lies in an interval.

    Raises:
        ValidationError: If the value is outside the interval
    """
    number = float(value)
    below = number < low if low_inclusive else number <= low
    above = number > high if high_inclusive else number >= high
    if below or above or not math.isfinite(number):
        left = "[" if low_inclusive else "("
        right = "]" if high_inclusive else ")"
        raise ValidationError(f"{name} must lie in {left}{low}, {high}{right}, got {value!r}")
    return number


def validate_order(order: Any) -> int:
    """Validate a finite element basis order."""
    if order not in (1, 2):
        raise ValidationError(f"basis order must be 1 or 2, got {order!r}")
    return int(order)


def validate_point(point: Any, name: str = "point") -> np.ndarray:
    """
    Validate a 2D point.

    Returns:
        The point as a float array of shape (2,)
    """
    arr = np.asarray(point, dtype=float)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must be a finite 2D point, got {point!r}")
    return arr


def validate_ladder(radii: Sequence[float], name: str = "radius ladder") -> np.ndarray:
    """Validate a strictly decreasing sequence of positive radii."""
    arr = np.asarray(radii, dtype=float)
    if arr.ndim != 1 or arr.size == 0 or np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must be a non-empty list of positive radii")
    if np.any(np.diff(arr) >= 0):
        raise ValidationError(f"{name} must be strictly decreasing")
    return arr
