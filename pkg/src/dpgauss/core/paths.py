"""
Centralized Path Management

All default file locations (logs, reports) come from here so the CLI and the
services agree on where run artifacts land.

When running from a checkout, ROOT = project root (contains pyproject.toml).
When installed, the data root falls back to ~/.dpgauss.
"""

import os
from pathlib import Path


def _find_project_root() -> Path | None:
    """Walk up from this file to find project root (contains pyproject.toml)."""
    current = Path(__file__).resolve().parent
    for parent in [current] + list(current.parents):
        if (parent / "pyproject.toml").exists():
            return parent
    return None


ROOT = _find_project_root()


def _resolve_data_root() -> Path:
    """Resolve writable data root for run artifacts."""
    override = os.getenv("DPGAUSS_DATA_DIR")
    if override:
        return Path(override).expanduser()

    if ROOT is None:
        return Path.home() / ".dpgauss"

    return ROOT / "data"


# Data directories
DATA = _resolve_data_root()
LOGS = DATA / "logs"
REPORTS = DATA / "reports"

# Bundled example experiment configs
CONFIGS = Path(__file__).resolve().parents[1] / "config"
