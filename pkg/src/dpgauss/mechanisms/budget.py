"""
Privacy budgets and the spend ledger.

Budgets are held as exact rationals so that split(k) followed by basic
composition reproduces the original (ε, δ) bit for bit.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Union

from ..core.exceptions import ValidationError

logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]


def _exact(value: Number) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class PrivacyBudget:
    """(ε, δ) pair; δ = 0 is pure DP"""

    epsilon_exact: Fraction
    delta_exact: Fraction = Fraction(0)

    def __init__(self, epsilon: Number, delta: Number = 0):
        object.__setattr__(self, "epsilon_exact", _exact(epsilon))
        object.__setattr__(self, "delta_exact", _exact(delta))
        self.validate()

    def validate(self) -> None:
        if self.epsilon_exact <= 0:
            raise ValidationError(f"epsilon must be positive, got {float(self.epsilon_exact)}", "epsilon")
        if not 0 <= self.delta_exact < 1:
            raise ValidationError(f"delta must lie in [0, 1), got {float(self.delta_exact)}", "delta")

    @property
    def epsilon(self) -> float:
        return float(self.epsilon_exact)

    @property
    def delta(self) -> float:
        return float(self.delta_exact)

    @property
    def is_pure(self) -> bool:
        return self.delta_exact == 0

    def split(self, parts: int) -> list["PrivacyBudget"]:
        """k budgets (ε/k, δ/k) whose basic composition is exactly this budget"""
        if parts < 1:
            raise ValidationError(f"Cannot split a budget into {parts} parts", "parts")
        share = PrivacyBudget(self.epsilon_exact / parts, self.delta_exact / parts)
        return [share] * parts

    def scale(self, factor: Number) -> "PrivacyBudget":
        """Budget (c·ε, c·δ)"""
        factor = _exact(factor)
        return PrivacyBudget(self.epsilon_exact * factor, self.delta_exact * factor)

    @staticmethod
    def compose(budgets: Iterable["PrivacyBudget"]) -> "PrivacyBudget":
        """Basic composition: (Σ εᵢ, Σ δᵢ)"""
        budgets = list(budgets)
        if not budgets:
            raise ValidationError("Nothing to compose", "budgets")
        return PrivacyBudget(
            sum((b.epsilon_exact for b in budgets), Fraction(0)),
            sum((b.delta_exact for b in budgets), Fraction(0)),
        )

    def to_dict(self) -> dict[str, float]:
        return {"epsilon": self.epsilon, "delta": self.delta}


@dataclass(frozen=True)
class LedgerEntry:
    """One mechanism invocation charged against the budget"""

    mechanism: str
    epsilon: Fraction
    delta: Fraction
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "mechanism": self.mechanism,
            "epsilon": float(self.epsilon),
            "delta": float(self.delta),
            "note": self.note,
        }


@dataclass
class BudgetLedger:
    """
    Append-only record of every privacy spend in a pipeline run.

    Single-writer: callers serialize access when sharing a ledger.
    """

    entries: list[LedgerEntry] = field(default_factory=list)

    def spend(self, mechanism: str, budget: PrivacyBudget, note: str = "") -> None:
        """Record a sequential (basic composition) charge"""
        self.entries.append(LedgerEntry(mechanism, budget.epsilon_exact, budget.delta_exact, note))
        logger.debug(f"Spent (ε={budget.epsilon:.6g}, δ={budget.delta:.3g}) on {mechanism}")

    def spend_parallel(self, mechanism: str, budget: PrivacyBudget, partitions: int) -> None:
        """Record one charge for a mechanism run on disjoint partitions"""
        self.spend(mechanism, budget, note=f"parallel over {partitions} partitions")

    def total(self) -> tuple[Fraction, Fraction]:
        """Exact (Σ ε, Σ δ) over all entries"""
        return (
            sum((e.epsilon for e in self.entries), Fraction(0)),
            sum((e.delta for e in self.entries), Fraction(0)),
        )

    def matches(self, budget: PrivacyBudget) -> bool:
        """True iff the total spend equals the budget exactly"""
        return self.total() == (budget.epsilon_exact, budget.delta_exact)

    def __len__(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict[str, Any]:
        epsilon, delta = self.total()
        return {
            "entries": [entry.to_dict() for entry in self.entries],
            "total": {"epsilon": float(epsilon), "delta": float(delta)},
        }
