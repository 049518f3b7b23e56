"""
Utils package - shared helpers for logging, errors, validation and formatting
"""

from .formatters import format_number, to_jsonable
from .validators import require_count, require_in_range, require_positive

__all__ = [
    "format_number",
    "to_jsonable",
    "require_positive",
    "require_in_range",
    "require_count",
]
