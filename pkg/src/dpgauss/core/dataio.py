"""
Dataset files: plain text, one point per line, comma-separated decimals,
'.' decimal separator, no header, UTF-8.
"""

import csv
import logging
import math
import re
from pathlib import Path

import numpy as np

from .exceptions import DataFormatError
from .models import Dataset

logger = logging.getLogger(__name__)

DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


def parse_decimal(field: str) -> float:
    """
    One plain decimal field; Python-only spellings like "1_000", "nan" or "inf" are refused.

    Raises:
        ValueError: If the field is not a plain decimal
    """
    text = field.strip()
    if not DECIMAL.fullmatch(text):
        raise ValueError(f"not a decimal number: {field!r}")
    return float(text)


def load_dataset(path: Path) -> Dataset:
    """
    Load and validate a dataset file.

    Raises:
        DataFormatError: On ragged rows, unparsable or non-finite fields, or an empty file
    """
    path = Path(path)
    rows: list[list[float]] = []
    width = None

    with open(path, "r", encoding="utf-8", newline="") as handle:
        for line_number, record in enumerate(csv.reader(handle), start=1):
            if not record or all(not field.strip() for field in record):
                continue
            try:
                values = [parse_decimal(field) for field in record]
            except ValueError as e:
                raise DataFormatError(f"{path}:{line_number}: unparsable field ({e})", line_number) from e
            if not all(math.isfinite(v) for v in values):
                raise DataFormatError(f"{path}:{line_number}: non-finite value", line_number)
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise DataFormatError(
                    f"{path}:{line_number}: expected {width} fields, found {len(values)}", line_number
                )
            rows.append(values)

    if not rows:
        raise DataFormatError(f"{path}: no data rows", 0)

    logger.info(f"Loaded {len(rows)} points of dimension {width} from {path}")
    return Dataset(np.array(rows))


def save_dataset(data: Dataset, path: Path) -> Path:
    """Write a dataset in the same format, shortest round-trip decimals"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        for row in data.points:
            writer.writerow([repr(float(v)) for v in row])
    return path
