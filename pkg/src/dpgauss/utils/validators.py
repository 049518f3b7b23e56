"""Numeric precondition checks shared by mechanisms and pipelines"""

import math

from ..core.exceptions import ValidationError


def require_positive(value: float, field: str) -> float:
    """
    Check that a parameter is finite and strictly positive

    Args:
        value: Parameter value
        field: Parameter name for error messages

    Returns:
        The value as float

    Raises:
        ValidationError: If the value is not finite or not positive
    """
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{field} must be a positive finite number, got {value}", field)
    return value


def require_in_range(
    value: float,
    field: str,
    low: float,
    high: float,
    low_open: bool = False,
    high_open: bool = False,
) -> float:
    """
    Check that a parameter lies in an interval

    Args:
        value: Parameter value
        field: Parameter name for error messages
        low: Lower end of the interval
        high: Upper end of the interval
        low_open: Exclude the lower end
        high_open: Exclude the upper end

    Returns:
        The value as float

    Raises:
        ValidationError: If the value falls outside the interval
    """
    value = float(value)
    below = value <= low if low_open else value < low
    above = value >= high if high_open else value > high
    if math.isnan(value) or below or above:
        left = "(" if low_open else "["
        right = ")" if high_open else "]"
        raise ValidationError(
            f"{field} must lie in {left}{low}, {high}{right}, got {value}", field
        )
    return value


def require_count(value: int, field: str, minimum: int = 1) -> int:
    """Check that a count is an integer no smaller than minimum"""
    if isinstance(value, bool) or int(value) != value:
        raise ValidationError(f"{field} must be an integer, got {value}", field)
    value = int(value)
    if value < minimum:
        raise ValidationError(f"{field} must be at least {minimum}, got {value}", field)
    return value
