"""
Approximate-DP robust mean and covariance estimation.

Both pipelines split (ε, δ) three ways:

1. select a stable outlier count τ privately
2. solve the witness program at rate τ/n and privately re-check it at C′
3. release the witness moments through a Gaussian mechanism

A REJECT at stage 1 or 2 halts the run; the report records the stage and
the ledger holds only what was actually spent.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.constants import (C_DELTA, C_L, C_MU, C_SIGMA, DEFAULT_BETA,
                              SOLVER_TOL, SUBGAUSSIAN_ORDER)
from ..core.exceptions import ValidationError
from ..core.linalg import rel_frobenius
from ..core.models import REJECT, Dataset, EstimationReport, GaussianParams
from ..core.sampling import pair_difference
from ..mechanisms.budget import BudgetLedger, PrivacyBudget
from ..mechanisms.gaussian import (gaussian_mechanism, gaussian_sampling_mechanism,
                                   gaussian_sigma, max_admissible_k)
from ..utils.validators import require_in_range, require_positive
from .solver import WitnessKind
from .stability import PotentialTable, select_outlier_rate, selection_rounds
from .witness_check import run_witness_check

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RobustSettings:
    """Tunable constants of the robust pipelines"""

    c_l: float = C_L
    c_delta: float = C_DELTA
    c_mu: float = C_MU
    c_sigma: float = C_SIGMA
    beta: float = DEFAULT_BETA
    tol: float = SOLVER_TOL
    order: int = SUBGAUSSIAN_ORDER

    def __post_init__(self):
        for name in ("c_l", "c_delta", "c_mu", "c_sigma", "tol"):
            require_positive(getattr(self, name), name)
        require_in_range(self.beta, "beta", 0.0, 1.0, low_open=True, high_open=True)


def _check_budget(budget: PrivacyBudget) -> None:
    if budget.is_pure:
        raise ValidationError("Robust pipelines need δ > 0", "delta")


def _witness_stages(
    data: Dataset,
    eta: float,
    budget: PrivacyBudget,
    C: float,
    rng: np.random.Generator,
    kind: WitnessKind,
    settings: RobustSettings,
    report: EstimationReport,
):
    """Run selection, solve and witness check; returns (solution, C′, L) or None on a halt"""
    select_budget, check_budget, _ = budget.split(3)
    select_rng, check_rng = rng.spawn(2)
    table = PotentialTable(data, C, settings.tol, kind)

    outcome = select_outlier_rate(
        data, eta, select_budget, settings.beta, C, select_rng,
        tol=settings.tol, kind=kind, c_l=settings.c_l, table=table, ledger=report.ledger,
    )
    report.artifacts["selection"] = outcome.to_dict()
    if outcome.rejected:
        report.halt_stage = "selection"
        return None

    solution = table.solution(outcome.tau)
    report.artifacts["witness"] = solution.to_dict()
    c_prime, certificate = run_witness_check(
        data, solution, C, outcome.L, check_budget, settings.beta, check_rng,
        kind=kind, k=settings.order, c_delta=settings.c_delta, ledger=report.ledger,
    )
    report.artifacts["witness_check"] = {
        "C_prime": None if c_prime is REJECT else c_prime,
        "certificate": None if certificate is None else certificate.to_dict(),
    }
    if c_prime is REJECT:
        report.halt_stage = "witness_check"
        return None
    return solution, c_prime, outcome.L


def robust_mean(
    data: Dataset,
    eta: float,
    budget: PrivacyBudget,
    C: float,
    rng: np.random.Generator,
    settings: Optional[RobustSettings] = None,
    truth: Optional[GaussianParams] = None,
) -> EstimationReport:
    """
    (ε, δ)-DP mean under an η-fraction of arbitrary outliers.

    The witness mean μ̃ = Σ pᵢYᵢ is released with the Gaussian mechanism at
    ℓ₂-sensitivity c_μ·C′·√(L/n) and budget (ε/3, δ/3).
    """
    settings = settings or RobustSettings()
    _check_budget(budget)
    require_in_range(eta, "eta", 0.0, 0.5, low_open=True, high_open=True)
    require_positive(C, "C")
    noise_budget = budget.split(3)[2]
    stage_rng, noise_rng = rng.spawn(2)

    report = EstimationReport(pipeline="approx_mean", ledger=BudgetLedger())
    result = _witness_stages(data, eta, budget, C, stage_rng, WitnessKind.MEAN, settings, report)
    if result is None:
        logger.warning(f"approx_mean halted at {report.halt_stage}")
        return report
    solution, c_prime, L = result

    sensitivity = settings.c_mu * c_prime * math.sqrt(L / data.n)
    report.mean = gaussian_mechanism(solution.mean, sensitivity, noise_budget, noise_rng)
    report.ledger.spend("gaussian_mechanism", noise_budget)
    report.artifacts["noise"] = {"sensitivity": sensitivity, "sigma": gaussian_sigma(sensitivity, noise_budget)}

    if truth is not None:
        report.errors["mean_l2"] = float(np.linalg.norm(report.mean - truth.mean))
        report.errors["witness_mean_l2"] = float(np.linalg.norm(solution.mean - truth.mean))
    logger.info(f"approx_mean finished: d={data.dim}, n={data.n}, C′={c_prime:.4g}")
    return report


def max_sample_count(
    n: int,
    budget: PrivacyBudget,
    C: float,
    settings: Optional[RobustSettings] = None,
) -> int:
    """
    Largest k for which Gaussian sampling at (ε/3, δ/3) admits the witness
    sensitivity c_Σ·C·√(L/n); uses C ≥ C′ so it is known before any spend.
    """
    settings = settings or RobustSettings()
    select_budget, _, noise_budget = budget.split(3)
    L = selection_rounds(n, select_budget, settings.beta, settings.c_l)
    required = settings.c_sigma * C * math.sqrt(L / n)
    return max_admissible_k(noise_budget, required)


def robust_covariance(
    data: Dataset,
    eta: float,
    budget: PrivacyBudget,
    C: float,
    sample_count_k: Optional[int],
    rng: np.random.Generator,
    settings: Optional[RobustSettings] = None,
    truth: Optional[GaussianParams] = None,
    center_by_pairs: bool = False,
) -> EstimationReport:
    """
    (ε, δ)-DP covariance under an η-fraction of arbitrary outliers.

    The witness second moment Σ̃ = Σ pᵢYᵢYᵢᵀ is released by the Gaussian
    sampling mechanism with k samples at (ε/3, δ/3). With k = None the
    largest admissible k is used.

    Raises:
        ValidationError: If k exceeds the largest admissible k (named in the message)
    """
    settings = settings or RobustSettings()
    _check_budget(budget)
    require_in_range(eta, "eta", 0.0, 0.5, low_open=True, high_open=True)
    require_positive(C, "C")
    if center_by_pairs:
        data = pair_difference(data)

    k_max = max_sample_count(data.n, budget, C, settings)
    if k_max < 1:
        raise ValidationError(
            f"No sample count is admissible at n = {data.n}: the witness sensitivity exceeds "
            f"what Gaussian sampling tolerates at this budget",
            "k",
        )
    k = k_max if sample_count_k is None else sample_count_k
    if k < 1 or k > k_max:
        raise ValidationError(f"Sample count k = {k} is not admissible; the largest admissible k is {k_max}", "k")

    noise_budget = budget.split(3)[2]
    stage_rng, noise_rng = rng.spawn(2)
    report = EstimationReport(pipeline="approx_cov", ledger=BudgetLedger())
    report.artifacts["k"] = k
    report.artifacts["k_max"] = k_max

    result = _witness_stages(data, eta, budget, C, stage_rng, WitnessKind.COVARIANCE, settings, report)
    if result is None:
        logger.warning(f"approx_cov halted at {report.halt_stage}")
        return report
    solution, c_prime, L = result

    report.covariance = gaussian_sampling_mechanism(solution.second_moment, k, noise_rng)
    report.ledger.spend("gaussian_sampling_mechanism", noise_budget)
    report.artifacts["noise"] = {"sensitivity": settings.c_sigma * c_prime * math.sqrt(L / data.n)}

    if truth is not None:
        report.errors["covariance_rel_frobenius"] = rel_frobenius(report.covariance, truth.covariance)
        report.errors["witness_rel_frobenius"] = rel_frobenius(solution.second_moment, truth.covariance)
        report.errors["sampling_rel_frobenius"] = rel_frobenius(report.covariance, solution.second_moment)
    logger.info(f"approx_cov finished: d={data.dim}, n={data.n}, k={k}, C′={c_prime:.4g}")
    return report
