"""Private witness checking: re-certify the solver's weights at a noisy bound"""

import logging
import math
from typing import Optional, Union

import numpy as np

from ..core.constants import C_DELTA, SUBGAUSSIAN_ORDER
from ..core.exceptions import ValidationError
from ..core.models import REJECT, Dataset, Rejected
from ..mechanisms.budget import BudgetLedger, PrivacyBudget
from ..mechanisms.laplace import (TruncatedLaplaceParams,
                                  truncated_laplace_sample)
from .certificates import (Certificate, certify_subgaussian,
                           check_hypercontractive)
from .solver import WitnessKind, WitnessSolution

logger = logging.getLogger(__name__)


def check_sensitivity(C: float, L: int, n: int, k: int = SUBGAUSSIAN_ORDER, c_delta: float = C_DELTA) -> float:
    """Δ = c_Δ·C·k·√(L/n)"""
    return c_delta * C * k * math.sqrt(L / n)


def run_witness_check(
    data: Dataset,
    solution: WitnessSolution,
    C: float,
    L: int,
    budget: PrivacyBudget,
    beta: float,
    rng: np.random.Generator,
    kind: WitnessKind = WitnessKind.MEAN,
    k: int = SUBGAUSSIAN_ORDER,
    c_delta: float = C_DELTA,
    ledger: Optional[BudgetLedger] = None,
) -> tuple[Union[float, Rejected], Optional[Certificate]]:
    """
    Draw γ ~ tLap at sensitivity Δ, set C′ = C + γ ≤ C and certify at C′.

    The mean pipeline certifies subgaussianity of order k; the covariance
    pipeline checks degree-2 hypercontractivity. The noise uses the truncated
    Laplace calibration μ = −Δ(1 + ln(1/δ)/ε), b = Δ/ε.

    Returns:
        (C′, certificate), or (REJECT, certificate) when the check fails
        (certificate is None when C′ is not positive)
    """
    if not solution.feasible:
        raise ValidationError("Witness check needs a feasible solution", "solution")

    sensitivity = check_sensitivity(C, L, data.n, k, c_delta)
    params = TruncatedLaplaceParams.for_sensitivity(sensitivity, budget.epsilon, budget.delta)
    gamma = truncated_laplace_sample(params, rng)
    c_prime = C + gamma
    if ledger is not None:
        ledger.spend("witness_check", budget)

    if c_prime <= 0:
        logger.warning(f"Witness check rejected: noisy bound C′={c_prime:.4g} is not positive")
        return REJECT, None

    if kind is WitnessKind.MEAN:
        certificate = certify_subgaussian(solution.weights, data, c_prime, k)
    else:
        certificate = check_hypercontractive(solution.weights, data, c_prime)

    if not certificate.passed:
        logger.warning(
            f"Witness check rejected: top eigenvalue {certificate.top_eigenvalue:.4g} "
            f"exceeds threshold {certificate.threshold:.4g} at C′={c_prime:.4g}"
        )
        return REJECT, certificate
    logger.info(f"Witness check passed at C′={c_prime:.4g} (Δ={sensitivity:.3g})")
    return c_prime, certificate


def witness_check(
    data: Dataset,
    solution: WitnessSolution,
    C: float,
    L: int,
    budget: PrivacyBudget,
    beta: float,
    rng: np.random.Generator,
    kind: WitnessKind = WitnessKind.MEAN,
    k: int = SUBGAUSSIAN_ORDER,
    c_delta: float = C_DELTA,
    ledger: Optional[BudgetLedger] = None,
) -> Union[float, Rejected]:
    """C′ ∈ (0, C] at which the weights certify, or REJECT; (ε, δ)-DP"""
    value, _ = run_witness_check(data, solution, C, L, budget, beta, rng, kind, k, c_delta, ledger)
    return value
