"""Services layer - experiment runner, report aggregation and export"""

from .exporter import ExportService, Stopwatch
from .report_service import ExperimentReport, SeedRun, config_hash, library_version
from .runner import run, run_seed, series_rows, sweep

__all__ = [
    "ExportService",
    "Stopwatch",
    "ExperimentReport",
    "SeedRun",
    "config_hash",
    "library_version",
    "run",
    "run_seed",
    "sweep",
    "series_rows",
]
