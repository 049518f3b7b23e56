"""
Export Service - write experiment reports, timing records and sweep series
"""

import csv
import json
import logging
import time
from pathlib import Path
from typing import Iterable, List, Optional

import psutil

from ..core.exceptions import AppException, ValidationError
from ..utils.formatters import format_number
from .report_service import ExperimentReport

REPORT_FILE = "report.json"
TIMING_FILE = "timing.json"
SERIES_FILE = "series.csv"
SERIES_HEADER = ["axis_value", "quantile", "metric", "value"]


class Stopwatch:
    """Wall-clock and resident-memory figures for timing.json"""

    def __init__(self):
        self._start = time.perf_counter()

    def snapshot(self) -> dict:
        rss = psutil.Process().memory_info().rss
        return {
            "wall_clock_seconds": round(time.perf_counter() - self._start, 6),
            "resident_memory_bytes": int(rss),
        }


class ExportService:
    """Service writing run artifacts with error handling and logging"""

    def __init__(self, out_dir: Path, logger: Optional[logging.Logger] = None):
        """
        Initialize export service with dependencies.

        Args:
            out_dir: Directory for report files
            logger: Logger instance for operation logging
        """
        self.out_dir = Path(out_dir)
        self.logger = logger or logging.getLogger(__name__)

        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            self.logger.debug(f"Output directory initialized: {self.out_dir}")
        except OSError as e:
            self.logger.error(f"Failed to create output directory: {e}")
            raise AppException(
                f"Cannot create output directory: {self.out_dir}",
                "EXPORT_DIR_ERROR",
                {"path": str(self.out_dir), "error": str(e)},
            ) from e

    def write_report(self, report: ExperimentReport, filename: str = REPORT_FILE) -> Path:
        """
        Write one experiment report as sorted-key JSON.

        Raises:
            AppException: If the file cannot be written
        """
        return self._write_text(filename, report.to_json() + "\n")

    def write_reports(self, reports: List[ExperimentReport], filename: str = REPORT_FILE) -> Path:
        """Write the reports of a sweep as one JSON document"""
        payload = {"reports": [report.to_dict() for report in reports]}
        return self._write_text(filename, json.dumps(payload, indent=2, sort_keys=True) + "\n")

    def write_timing(self, timing: dict, filename: str = TIMING_FILE) -> Path:
        """Write wall-clock and memory figures"""
        return self._write_text(filename, json.dumps(timing, indent=2, sort_keys=True) + "\n")

    def write_series(self, rows: Iterable[tuple], filename: str = SERIES_FILE) -> Path:
        """
        Write a sweep series: axis_value, quantile, metric, value.

        Raises:
            AppException: If the file cannot be written
        """
        if not self._is_valid_filename(filename):
            raise ValidationError("Invalid filename", "filename")
        filepath = self.out_dir / filename
        try:
            with open(filepath, "w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(SERIES_HEADER)
                for axis_value, quantile, metric, value in rows:
                    writer.writerow([format_number(axis_value), quantile, metric, format_number(value)])
        except OSError as e:
            self.logger.error(f"Failed to write series: {e}")
            raise AppException(
                "Failed to write series file", "EXPORT_ERROR", {"filename": filename, "error": str(e)}
            ) from e

        self.logger.info(f"Exported series to: {filepath}")
        return filepath

    def _write_text(self, filename: str, content: str) -> Path:
        if not self._is_valid_filename(filename):
            raise ValidationError("Invalid filename", "filename")
        filepath = self.out_dir / filename
        try:
            with open(filepath, "w", encoding="utf-8", newline="\n") as f:
                f.write(content)
        except OSError as e:
            self.logger.error(f"Failed to write {filename}: {e}")
            raise AppException(
                f"Failed to write {filename}", "EXPORT_ERROR", {"filename": filename, "error": str(e)}
            ) from e

        self.logger.info(f"Exported {filename} to: {filepath}")
        return filepath

    def _is_valid_filename(self, filename: str) -> bool:
        """
        Validate filename for security.

        Args:
            filename: Filename to validate

        Returns:
            True if valid, False otherwise
        """
        if not filename:
            return False

        # Check for path traversal attempts
        if ".." in filename or "/" in filename or "\\" in filename:
            self.logger.warning(f"Invalid filename detected: {filename}")
            return False

        if len(filename) > 255:
            return False

        return True
