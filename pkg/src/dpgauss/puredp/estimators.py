"""
Pure-DP estimators for Gaussian covariance, mean and both together.

Each pipeline halves its budget between preconditioning and the final
oracle call. When κ ≤ 20 no preconditioning is needed and the final step
receives the whole budget, so every ledger totals exactly ε.
"""

import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np

from ..core.constants import (COVARIANCE_ERROR_DIVISOR, DEFAULT_BETA,
                              GAUSSIAN_FAILURE_PROBABILITY, MEAN_SCALE,
                              RECURSION_TARGET_KAPPA, ROBUST_SQRT_ETA_FACTOR,
                              WEAK_ALPHA, WEAK_ALPHA_ROBUST, WEAK_RESCALE)
from ..core.exceptions import ValidationError
from ..core.interfaces import PureMeanOracle
from ..core.linalg import mahalanobis, rel_frobenius
from ..core.metrics import tv_bounds
from ..core.models import Dataset, EstimationReport, GaussianParams, PsdMatrix
from ..core.sampling import pair_difference
from ..mechanisms.budget import BudgetLedger, PrivacyBudget
from ..utils.validators import require_in_range, require_positive
from .matrix_mean import matrix_mean
from .preconditioning import (PreconditionerChain, recursive_precondition,
                              round_count)

logger = logging.getLogger(__name__)


def _covariance(
    data: Dataset,
    kappa: float,
    alpha: float,
    budget: PrivacyBudget,
    oracle: PureMeanOracle,
    rng: np.random.Generator,
    ledger: BudgetLedger,
    weak_alpha: float,
    beta: float,
    rescale: float,
) -> tuple[PsdMatrix, PreconditionerChain]:
    precondition_rng, estimate_rng = rng.spawn(2)

    if kappa <= RECURSION_TARGET_KAPPA:
        chain = PreconditionerChain.identity(data.dim, kappa)
        estimate = matrix_mean(
            data, RECURSION_TARGET_KAPPA, alpha / COVARIANCE_ERROR_DIVISOR, beta, budget.epsilon, oracle, estimate_rng
        )
        ledger.spend("matrix_mean", budget)
        return estimate, chain

    if data.n < 2:
        raise ValidationError("Covariance estimation needs at least two points", "n")
    half = data.n // 2
    first, second = data.subset(0, half), data.subset(half, data.n)
    step = budget.scale(Fraction(1, 2))

    chain = recursive_precondition(
        first, kappa, step.epsilon, oracle, precondition_rng, alpha=weak_alpha, rescale=rescale
    )
    ledger.spend_parallel("recursive_precondition", step, round_count(kappa))

    inner = matrix_mean(
        chain.apply(second),
        RECURSION_TARGET_KAPPA,
        alpha / COVARIANCE_ERROR_DIVISOR,
        beta,
        step.epsilon,
        oracle,
        estimate_rng,
    )
    ledger.spend("matrix_mean", step)
    return PsdMatrix(chain.undo_covariance(inner.entries)), chain


def _mean(
    data: Dataset,
    kappa: float,
    radius: float,
    alpha: float,
    budget: PrivacyBudget,
    oracle: PureMeanOracle,
    rng: np.random.Generator,
    ledger: BudgetLedger,
    weak_alpha: float,
    beta: float,
    rescale: float,
) -> tuple[np.ndarray, PreconditionerChain]:
    precondition_rng, estimate_rng = rng.spawn(2)
    scale = math.sqrt(MEAN_SCALE)

    if kappa <= RECURSION_TARGET_KAPPA:
        chain = PreconditionerChain.identity(data.dim, kappa)
        target, oracle_budget = data, budget
    else:
        block = data.n // 3
        if block < 1:
            raise ValidationError(f"Mean estimation needs at least three points, got {data.n}", "n")
        if data.n % 3:
            logger.warning(f"Mean estimation uses 3·{block} points; dropping the last {data.n % 3}")
        differences = pair_difference(data.subset(0, 2 * block))
        step = budget.scale(Fraction(1, 2))
        chain = recursive_precondition(
            differences, kappa, step.epsilon, oracle, precondition_rng, alpha=weak_alpha, rescale=rescale
        )
        ledger.spend_parallel("recursive_precondition", step, round_count(kappa))
        target, oracle_budget = chain.apply(data.subset(2 * block, 3 * block)), step

    scaled = Dataset(target.points / scale)
    estimate = oracle.estimate(scaled, radius, alpha / scale, beta, oracle_budget.epsilon, estimate_rng)
    ledger.spend("mean_oracle", oracle_budget)
    return chain.undo_mean(scale * np.asarray(estimate, dtype=float)), chain


def _check_inputs(kappa: float, alpha: float, epsilon: float) -> PrivacyBudget:
    if kappa < 1:
        raise ValidationError(f"kappa must be at least 1, got {kappa}", "kappa")
    require_in_range(alpha, "alpha", 0.0, 1.0, low_open=True)
    require_positive(epsilon, "epsilon")
    return PrivacyBudget(epsilon)


def estimate_covariance(
    data: Dataset,
    kappa: float,
    alpha: float,
    epsilon: float,
    oracle: PureMeanOracle,
    rng: np.random.Generator,
    truth: Optional[GaussianParams] = None,
    beta: float = DEFAULT_BETA,
    rescale: float = WEAK_RESCALE,
) -> EstimationReport:
    """
    ε-DP covariance with ‖Σ^{-1/2}Σ̂Σ^{-1/2} − I‖_F ≤ α under the oracle contract.

    The first half of the data builds the preconditioner at ε/2, the second
    half feeds matrix_mean at error α/20 and ε/2, and the estimate is mapped
    back through A⁻¹ · A⁻ᵀ.
    """
    budget = _check_inputs(kappa, alpha, epsilon)
    ledger = BudgetLedger()
    covariance, chain = _covariance(data, kappa, alpha, budget, oracle, rng, ledger, WEAK_ALPHA, beta, rescale)

    report = EstimationReport(
        pipeline="pure_cov",
        ledger=ledger,
        covariance=covariance,
        artifacts={"rounds": len(chain.rounds), "oracle": oracle.name},
    )
    if truth is not None:
        report.errors["covariance_rel_frobenius"] = rel_frobenius(covariance, truth.covariance)
    logger.info(f"pure_cov finished: d={data.dim}, n={data.n}, rounds={len(chain.rounds)}")
    return report


def estimate_mean(
    data: Dataset,
    kappa: float,
    radius: float,
    alpha: float,
    epsilon: float,
    oracle: PureMeanOracle,
    rng: np.random.Generator,
    truth: Optional[GaussianParams] = None,
    beta: float = DEFAULT_BETA,
    rescale: float = WEAK_RESCALE,
) -> EstimationReport:
    """
    ε-DP mean with ‖Σ^{-1/2}(μ − μ̂)‖₂ ≤ α under the oracle contract.

    Layout: points 1..2m are pair-differenced into mean-free samples for the
    preconditioner (ε/2); points 2m+1..3m go to the oracle as A·X/√20 with
    error α/√20 (ε/2); μ̂ = √20·A⁻¹μ̃.
    """
    budget = _check_inputs(kappa, alpha, epsilon)
    require_positive(radius, "radius")
    ledger = BudgetLedger()
    mean, chain = _mean(data, kappa, radius, alpha, budget, oracle, rng, ledger, WEAK_ALPHA, beta, rescale)

    report = EstimationReport(
        pipeline="pure_mean",
        ledger=ledger,
        mean=mean,
        artifacts={"rounds": len(chain.rounds), "oracle": oracle.name},
    )
    if truth is not None:
        report.errors["mean_mahalanobis"] = mahalanobis(truth.mean - mean, truth.covariance)
    logger.info(f"pure_mean finished: d={data.dim}, n={data.n}, rounds={len(chain.rounds)}")
    return report


def estimate_gaussian(
    data: Dataset,
    kappa: float,
    radius: float,
    alpha: float,
    epsilon: float,
    oracle: PureMeanOracle,
    rng: np.random.Generator,
    robust: bool = False,
    eta: float = 0.0,
    truth: Optional[GaussianParams] = None,
    beta: float = DEFAULT_BETA,
    rescale: float = WEAK_RESCALE,
) -> EstimationReport:
    """
    ε-DP mean and covariance from disjoint halves at ε/2 each.

    The robust variant runs the weak preconditioner at accuracy 0.0099 and
    reports the target error α + 5√η. Both parameter bounds hold together
    with probability at least 0.8.
    """
    budget = _check_inputs(kappa, alpha, epsilon)
    require_positive(radius, "radius")
    require_in_range(eta, "eta", 0.0, 0.5, high_open=True)
    if data.n < 2:
        raise ValidationError("Gaussian estimation needs at least two points", "n")

    weak_alpha = WEAK_ALPHA_ROBUST if robust else WEAK_ALPHA
    half = budget.scale(Fraction(1, 2))
    mean_rng, cov_rng = rng.spawn(2)
    split = data.n // 2
    ledger = BudgetLedger()

    mean, mean_chain = _mean(
        data.subset(0, split), kappa, radius, alpha, half, oracle, mean_rng, ledger, weak_alpha, beta, rescale
    )
    covariance, cov_chain = _covariance(
        data.subset(split, data.n), kappa, alpha, half, oracle, cov_rng, ledger, weak_alpha, beta, rescale
    )

    target = alpha + ROBUST_SQRT_ETA_FACTOR * math.sqrt(eta) if robust else alpha
    report = EstimationReport(
        pipeline="pure_gaussian",
        ledger=ledger,
        mean=mean,
        covariance=covariance,
        failure_probability=GAUSSIAN_FAILURE_PROBABILITY,
        artifacts={
            "robust": robust,
            "target_error": target,
            "mean_rounds": len(mean_chain.rounds),
            "covariance_rounds": len(cov_chain.rounds),
            "oracle": oracle.name,
        },
    )
    if truth is not None:
        report.errors["mean_mahalanobis"] = mahalanobis(truth.mean - mean, truth.covariance)
        report.errors["covariance_rel_frobenius"] = rel_frobenius(covariance, truth.covariance)
        report.tv_bracket = tv_bounds(truth.covariance, covariance)
    logger.info(f"pure_gaussian finished: d={data.dim}, n={data.n}, robust={robust}")
    return report
