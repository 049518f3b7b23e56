"""
Formatters - canonical number and structure formatting for reports
"""

import math
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np


def format_number(value: Any) -> str:
    """
    Format a number canonically for series files.

    Integers print without a decimal point, floats use the shortest
    round-tripping representation, non-finite values print as nan/inf/-inf.

    Examples:
        >>> format_number(2000)
        '2000'
        >>> format_number(0.5)
        '0.5'
    """
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy arrays, enums, fractions and non-finite floats to JSON-safe values"""
    if obj is None or isinstance(obj, (str, bool)):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, Fraction):
        return to_jsonable(float(obj))
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isfinite(value):
            return value
        return format_number(value)
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"Cannot serialize {type(obj).__name__}")
