"""
Experiment reports: per-seed results, metric quantiles and provenance
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Union

import numpy as np
from packaging.version import Version

from .. import __version__
from ..audit.reporters import AuditReport
from ..core.constants import REPORT_SCHEMA
from ..core.models import EstimationReport
from ..utils.formatters import to_jsonable

QUANTILES = {"q10": 0.1, "median": 0.5, "q90": 0.9}


def library_version() -> str:
    """Normalized package version"""
    return str(Version(__version__))


def config_hash(canonical_json: str) -> str:
    """SHA-256 of the canonical JSON config echo"""
    return hashlib.sha256(canonical_json.encode("utf-8")).hexdigest()


@dataclass
class SeedRun:
    """Result of one pipeline run at one seed"""

    seed: int
    result: Union[EstimationReport, AuditReport]

    @property
    def halted(self) -> bool:
        return isinstance(self.result, EstimationReport) and self.result.halted

    @property
    def violated(self) -> bool:
        return isinstance(self.result, AuditReport) and self.result.violated

    @property
    def metrics(self) -> Dict[str, float]:
        """Finite scalar metrics of the run"""
        if isinstance(self.result, AuditReport):
            source = self.result.observed
        else:
            source = self.result.errors
        metrics = {}
        for name, value in source.items():
            if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
                continue
            if math.isfinite(float(value)):
                metrics[name] = float(value)
        return metrics

    def to_dict(self) -> Dict[str, Any]:
        return {"seed": self.seed, **self.result.to_dict()}


@dataclass
class ExperimentReport:
    """All seeds of one configuration with aggregate quantiles and provenance"""

    config: Dict[str, Any]
    config_hash: str
    runs: List[SeedRun] = field(default_factory=list)
    version: str = field(default_factory=library_version)

    @property
    def halt_count(self) -> int:
        return sum(run.halted for run in self.runs)

    @property
    def all_halted(self) -> bool:
        return bool(self.runs) and self.halt_count == len(self.runs)

    @property
    def violation_count(self) -> int:
        return sum(run.violated for run in self.runs)

    def metric_values(self, metric: str) -> np.ndarray:
        """Values of one metric over the runs that report it, in seed order"""
        return np.array([run.metrics[metric] for run in self.runs if metric in run.metrics])

    def aggregates(self) -> Dict[str, Dict[str, float]]:
        """
        q10 / median / q90 of every scalar metric.

        Returns:
            {metric: {quantile name: value}}, metrics sorted by name
        """
        names = sorted({name for run in self.runs for name in run.metrics})
        table = {}
        for name in names:
            values = self.metric_values(name)
            table[name] = {label: float(np.quantile(values, q)) for label, q in QUANTILES.items()}
        return table

    def to_dict(self) -> Dict[str, Any]:
        """Convert report to a JSON-ready dictionary"""
        return to_jsonable(
            {
                "schema": REPORT_SCHEMA,
                "version": self.version,
                "config_hash": self.config_hash,
                "config": self.config,
                "runs": [run.to_dict() for run in self.runs],
                "aggregates": self.aggregates(),
                "halt_count": self.halt_count,
                "violation_count": self.violation_count,
            }
        )

    def to_json(self) -> str:
        """
        Export report as JSON string.

        Returns:
            JSON with sorted keys; identical configs and seeds give identical text
        """
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary(self) -> str:
        """Human-readable summary of the experiment"""
        lines = [
            f"Pipeline: {self.config.get('pipeline')}  seeds: {len(self.runs)}  "
            f"halted: {self.halt_count}  violated: {self.violation_count}",
        ]
        for name, quantiles in self.aggregates().items():
            shown = "  ".join(f"{label}={value:.4g}" for label, value in quantiles.items())
            lines.append(f"  {name}: {shown}")
        return "\n".join(lines)
