"""
Monte-Carlo audit of the Gaussian sampling mechanism through its exact
privacy-loss variable Z.
"""

import logging
import math

import numpy as np

from ..core.constants import AUDIT_MIN_TRIALS
from ..core.exceptions import ValidationError
from ..core.linalg import MatrixLike, as_psd
from ..mechanisms.gaussian import (expected_privacy_loss, privacy_loss_batch,
                                   privacy_loss_bound)
from ..utils.validators import require_count, require_positive
from .analyzer import PrivacyAuditor
from .reporters import AuditReport
from .statistics import (clopper_pearson_lower, clopper_pearson_upper,
                         tail_verdict)

logger = logging.getLogger(__name__)

CHUNK_ELEMENTS = 2_000_000


def audit_gaussian_sampling(
    sigma1: MatrixLike,
    sigma2: MatrixLike,
    k: int,
    epsilon: float,
    delta: float,
    trials: int,
    rng: np.random.Generator,
) -> AuditReport:
    """
    Estimate Pr[Z > ε] and E[Z] for k-sample batches drawn from N(0, Σ₁).

    The verdict comes from a one-sided 99% Clopper-Pearson interval on the
    tail frequency; the mean check E[Z] ≤ ε/2 + 3·SE is reported alongside.

    Raises:
        ValidationError: If trials < 1000
        NumericalError: If either covariance is singular
    """
    require_count(trials, "trials", minimum=AUDIT_MIN_TRIALS)
    require_count(k, "k")
    require_positive(epsilon, "epsilon")
    if not 0 < delta < 1:
        raise ValidationError(f"delta must lie in (0, 1), got {delta}", "delta")

    sigma1, sigma2 = as_psd(sigma1), as_psd(sigma2)
    root = sigma1.sqrt()
    chunk = max(1, CHUNK_ELEMENTS // (k * sigma1.dim))

    losses = np.empty(trials)
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        batches = rng.standard_normal((size, k, sigma1.dim)) @ root
        losses[done:done + size] = privacy_loss_batch(sigma1, sigma2, batches)
        done += size

    tail = int(np.count_nonzero(losses > epsilon))
    mean = float(losses.mean())
    standard_error = float(losses.std(ddof=1) / math.sqrt(trials))
    verdict = tail_verdict(tail, trials, delta)

    report = AuditReport(
        mechanism="gaussian_sampling",
        trials=trials,
        epsilon=epsilon,
        delta=delta,
        verdict=verdict,
        observed={
            "mean_loss": mean,
            "standard_error": standard_error,
            "tail_count": tail,
            "tail_frequency": tail / trials,
            "lower_confidence": clopper_pearson_lower(tail, trials),
            "upper_confidence": clopper_pearson_upper(tail, trials),
            "expected_loss": expected_privacy_loss(sigma1, sigma2, k),
            "loss_bound": privacy_loss_bound(sigma1, sigma2, k),
        },
        details={
            "k": k,
            "dim": sigma1.dim,
            "mean_within_half_epsilon": mean <= epsilon / 2.0 + 3.0 * standard_error,
        },
    )
    logger.info(report.summary())
    return report


class GaussianSamplingAuditor(PrivacyAuditor):
    """Audits Gaussian sampling between two fixed neighbouring covariances"""

    mechanism = "gaussian_sampling"

    def __init__(self, sigma1: MatrixLike, sigma2: MatrixLike, k: int, epsilon: float, delta: float, trials: int):
        self.sigma1 = as_psd(sigma1)
        self.sigma2 = as_psd(sigma2)
        self.k = k
        self.epsilon = epsilon
        self.delta = delta
        self.trials = trials

    def run(self, rng: np.random.Generator) -> AuditReport:
        return audit_gaussian_sampling(self.sigma1, self.sigma2, self.k, self.epsilon, self.delta, self.trials, rng)
