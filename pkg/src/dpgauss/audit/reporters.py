"""
Audit report records and formatting.

Audits can only falsify a privacy claim, so verdicts read "consistent"
rather than "private".
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict

from ..utils.formatters import format_number, to_jsonable


class Verdict(Enum):
    """Outcome of a statistical privacy audit"""

    CONSISTENT = "consistent"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


@dataclass
class AuditReport:
    """Observed statistics of one audit against its (ε, δ) target"""

    mechanism: str
    trials: int
    epsilon: float
    delta: float
    verdict: Verdict
    observed: Dict[str, Any] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return self.verdict is Verdict.VIOLATED

    def to_dict(self) -> Dict[str, Any]:
        """Convert report to a JSON-ready dictionary"""
        return to_jsonable(
            {
                "mechanism": self.mechanism,
                "trials": self.trials,
                "epsilon": self.epsilon,
                "delta": self.delta,
                "verdict": self.verdict.value,
                "observed": self.observed,
                "details": self.details,
            }
        )

    def to_json(self) -> str:
        """
        Export report as JSON string.

        Returns:
            JSON formatted report with sorted keys
        """
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary(self) -> str:
        """One-line human summary"""
        shown = ", ".join(
            f"{key}={format_number(value)}"
            for key, value in sorted(self.observed.items())
            if isinstance(value, (int, float)) and not isinstance(value, bool)
        )
        return (
            f"{self.mechanism}: {self.verdict.value} at (ε={format_number(self.epsilon)}, "
            f"δ={format_number(self.delta)}) over {self.trials} trials [{shown}]"
        )
