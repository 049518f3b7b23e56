"""
Laplace and truncated Laplace noise.

tLap(μ, b) is Lap(μ, b) conditioned on being negative, so every draw is ≤ 0
and a statistic plus tLap noise never exceeds the statistic itself.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..core.exceptions import ValidationError
from ..utils.validators import require_positive

logger = logging.getLogger(__name__)


def laplace_mechanism(value, sensitivity_l1: float, epsilon: float, rng: np.random.Generator) -> np.ndarray:
    """
    value + i.i.d. Lap(0, Δ/ε) per coordinate; ε-DP for ℓ₁-sensitivity Δ.

    Raises:
        ValidationError: If Δ or ε is not positive
    """
    require_positive(sensitivity_l1, "sensitivity_l1")
    require_positive(epsilon, "epsilon")
    value = np.asarray(value, dtype=float)
    scale = sensitivity_l1 / epsilon
    return value + rng.laplace(0.0, scale, size=value.shape)


@dataclass(frozen=True)
class TruncatedLaplaceParams:
    """Location μ < 0 and scale b > 0 of tLap(μ, b)"""

    mu: float
    b: float

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not self.mu < 0:
            raise ValidationError(f"Truncated Laplace location must be negative, got {self.mu}", "mu")
        if not self.b > 0:
            raise ValidationError(f"Truncated Laplace scale must be positive, got {self.b}", "b")

    @classmethod
    def for_sensitivity(cls, sensitivity: float, epsilon: float, delta: float) -> "TruncatedLaplaceParams":
        """μ = −Δ(1 + ln(1/δ)/ε), b = Δ/ε; adding a draw is (ε, δ)-DP"""
        require_positive(sensitivity, "sensitivity")
        require_positive(epsilon, "epsilon")
        if not 0 < delta < 1:
            raise ValidationError(f"delta must lie in (0, 1), got {delta}", "delta")
        return cls(-sensitivity * (1.0 + math.log(1.0 / delta) / epsilon), sensitivity / epsilon)

    @property
    def normalizer(self) -> float:
        """2 − e^{μ/b}, the CDF denominator"""
        return 2.0 - math.exp(self.mu / self.b)


def trunc_laplace_cdf(y: float, params: TruncatedLaplaceParams) -> float:
    """Pr[X < y] for X ~ tLap(μ, b)"""
    mu, b = params.mu, params.b
    if y >= 0:
        return 1.0
    if y < mu:
        return math.exp((y - mu) / b) / params.normalizer
    return (2.0 - math.exp((mu - y) / b)) / params.normalizer


def truncated_laplace_sample(params: TruncatedLaplaceParams, rng: np.random.Generator) -> float:
    """One draw by inverting the closed-form CDF"""
    mu, b = params.mu, params.b
    normalizer = params.normalizer
    u = float(rng.random())
    if u < 1.0 / normalizer:
        y = mu + b * math.log(max(u * normalizer, np.finfo(float).tiny))
    else:
        y = mu - b * math.log(2.0 - u * normalizer)
    return min(y, 0.0)
