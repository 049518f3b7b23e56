"""
Private selection: the exponential mechanism and thresholded selection.

dp_select spends (ε/2, 0) on choosing a candidate and (ε/2, δ) on a
truncated-Laplace gate. Because the gate noise is never positive, any
candidate it lets through truly scores at least κ on the data.
"""

import logging
import math
from typing import Callable, Optional, Sequence, TypeVar, Union

import numpy as np

from ..core.exceptions import ValidationError
from ..core.models import REJECT, Dataset, Rejected
from ..utils.validators import require_positive
from .budget import BudgetLedger, PrivacyBudget
from .laplace import TruncatedLaplaceParams, truncated_laplace_sample

logger = logging.getLogger(__name__)

T = TypeVar("T")


def exponential_mechanism(
    scores: Sequence[float],
    sensitivity: float,
    epsilon: float,
    rng: np.random.Generator,
) -> int:
    """
    Index i drawn with probability ∝ exp(ε·scoreᵢ/(2Δ)).

    Uses max-subtraction before exponentiating and a single uniform draw
    against the cumulative weights, so ties resolve by index.
    """
    require_positive(sensitivity, "sensitivity")
    require_positive(epsilon, "epsilon")
    scores = np.asarray(scores, dtype=float)
    if scores.size == 0:
        raise ValidationError("Exponential mechanism needs at least one candidate", "candidates")
    if not np.all(np.isfinite(scores)):
        raise ValidationError("Candidate scores must be finite", "scores")

    logits = epsilon * scores / (2.0 * sensitivity)
    weights = np.exp(logits - logits.max())
    cumulative = np.cumsum(weights)
    draw = rng.random() * cumulative[-1]
    index = int(np.searchsorted(cumulative, draw, side="right"))
    return min(index, scores.size - 1)


def dp_select(
    candidates: Sequence[T],
    score: Callable[[T, Dataset], float],
    sensitivity: float,
    kappa: float,
    budget: PrivacyBudget,
    data: Dataset,
    rng: np.random.Generator,
    ledger: Optional[BudgetLedger] = None,
) -> Union[T, Rejected]:
    """
    Select a candidate with score at least κ, or REJECT.

    Args:
        candidates: Finite nonempty candidate list
        score: Score function with the given sensitivity in the data
        sensitivity: Δ, bound on |score(c, Y) − score(c, Y')| for neighbours
        kappa: Acceptance threshold
        budget: (ε, δ), δ > 0
        data: Private dataset
        rng: Random stream
        ledger: Optional ledger charged (ε/2, 0) and (ε/2, δ)

    Returns:
        A candidate c with score(c, data) ≥ κ, or REJECT
    """
    candidates = list(candidates)
    if not candidates:
        raise ValidationError("dp_select needs at least one candidate", "candidates")
    require_positive(sensitivity, "sensitivity")
    if not 0 < budget.delta < 1:
        raise ValidationError(f"dp_select needs δ in (0, 1), got {budget.delta}", "delta")

    half = budget.epsilon / 2.0
    scores = [float(score(candidate, data)) for candidate in candidates]
    chosen = exponential_mechanism(scores, sensitivity, half, rng)

    gate = TruncatedLaplaceParams(
        mu=-sensitivity * (1.0 + 2.0 * math.log(1.0 / budget.delta) / budget.epsilon),
        b=2.0 * sensitivity / budget.epsilon,
    )
    noise = truncated_laplace_sample(gate, rng)

    if ledger is not None:
        ledger.spend("exponential_mechanism", PrivacyBudget(budget.epsilon_exact / 2, 0))
        ledger.spend("truncated_laplace_gate", PrivacyBudget(budget.epsilon_exact / 2, budget.delta_exact))

    if scores[chosen] + noise >= kappa:
        logger.debug(f"Selected candidate #{chosen} (score {scores[chosen]:.4g}, threshold {kappa:.4g})")
        return candidates[chosen]
    logger.info(f"Selection rejected: best draw scored {scores[chosen]:.4g} against threshold {kappa:.4g}")
    return REJECT
