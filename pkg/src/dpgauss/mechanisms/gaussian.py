"""
Gaussian mechanism and the Gaussian sampling mechanism.

The sampling mechanism releases (1/k)Σ gᵢgᵢᵀ with gᵢ ~ N(0, Σ). Its privacy
loss between neighbouring covariances has a closed form in the spectrum of
A = Σ₁^{1/2}Σ₂⁻¹Σ₁^{1/2}, which the audit module evaluates directly.
"""

import logging
import math

import numpy as np

from ..core.exceptions import ValidationError
from ..core.linalg import MatrixLike, as_psd
from ..core.models import PsdMatrix
from ..utils.validators import require_count, require_in_range, require_positive
from .budget import PrivacyBudget

logger = logging.getLogger(__name__)


def gaussian_sigma(sensitivity_l2: float, budget: PrivacyBudget) -> float:
    """
    Noise scale √(2 ln(1.25/δ))·Δ/ε.

    Raises:
        ValidationError: Unless ε ∈ (0, 1), δ ∈ (0, 1) and Δ > 0
    """
    require_positive(sensitivity_l2, "sensitivity_l2")
    require_in_range(budget.epsilon, "epsilon", 0.0, 1.0, low_open=True, high_open=True)
    require_in_range(budget.delta, "delta", 0.0, 1.0, low_open=True, high_open=True)
    return math.sqrt(2.0 * math.log(1.25 / budget.delta)) * sensitivity_l2 / budget.epsilon


def gaussian_mechanism(
    value,
    sensitivity_l2: float,
    budget: PrivacyBudget,
    rng: np.random.Generator,
) -> np.ndarray:
    """value + σ·Z with Z standard normal per coordinate"""
    sigma = gaussian_sigma(sensitivity_l2, budget)
    value = np.asarray(value, dtype=float)
    return value + sigma * rng.standard_normal(value.shape)


# ----- Gaussian sampling -----


def _log_inverse_delta(budget: PrivacyBudget) -> float:
    if not 0 < budget.delta < 1:
        raise ValidationError(f"Gaussian sampling needs δ in (0, 1), got {budget.delta}", "delta")
    return math.log(1.0 / budget.delta)


def admissible_sensitivity(budget: PrivacyBudget, k: int) -> float:
    """Largest relative-Frobenius sensitivity for which k samples stay (ε, δ)-DP"""
    require_count(k, "k")
    log_term = _log_inverse_delta(budget)
    eps = budget.epsilon
    return min(eps / math.sqrt(8.0 * k * log_term), eps / (8.0 * log_term))


def max_admissible_k(budget: PrivacyBudget, sensitivity: float) -> int:
    """
    Largest k with admissible_sensitivity(budget, k) ≥ sensitivity; 0 if none.
    """
    require_positive(sensitivity, "sensitivity")
    log_term = _log_inverse_delta(budget)
    eps = budget.epsilon
    if eps / (8.0 * log_term) < sensitivity:
        return 0
    k = int(math.floor(eps**2 / (8.0 * log_term * sensitivity**2)))
    # floor can land one off the boundary through rounding
    while k > 0 and admissible_sensitivity(budget, k) < sensitivity:
        k -= 1
    while admissible_sensitivity(budget, k + 1) >= sensitivity:
        k += 1
    return k


def gaussian_sampling_mechanism(sigma: MatrixLike, k: int, rng: np.random.Generator) -> PsdMatrix:
    """
    (1/k) Σᵢ gᵢgᵢᵀ for k independent gᵢ ~ N(0, Σ).

    Privacy is a property of the caller: the producer of Σ must have
    relative-Frobenius sensitivity within admissible_sensitivity(budget, k).
    """
    require_count(k, "k")
    sigma = as_psd(sigma)
    samples = rng.standard_normal((k, sigma.dim)) @ sigma.sqrt()
    return PsdMatrix(samples.T @ samples / k)


# ----- privacy loss -----


def _loss_spectrum(sigma1: PsdMatrix, sigma2: PsdMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of A = Σ₁^{1/2}Σ₂⁻¹Σ₁^{1/2}"""
    if sigma1.dim != sigma2.dim:
        raise ValidationError(f"Dimension mismatch: {sigma1.dim} vs {sigma2.dim}", "dim")
    sigma1.require_definite("sigma1")
    sigma2.require_definite("sigma2")
    root = sigma1.sqrt()
    matrix = root @ sigma2.inverse() @ root
    return np.linalg.eigh((matrix + matrix.T) / 2.0)


def privacy_loss_batch(sigma1: MatrixLike, sigma2: MatrixLike, sample_sets: np.ndarray) -> np.ndarray:
    """
    Z for each of many sample sets at once.

    Args:
        sigma1: Covariance the samples were drawn from
        sigma2: Neighbouring covariance
        sample_sets: Array of shape (trials, k, d)

    Returns:
        Array of shape (trials,)
    """
    sigma1, sigma2 = as_psd(sigma1), as_psd(sigma2)
    values, vectors = _loss_spectrum(sigma1, sigma2)
    sample_sets = np.asarray(sample_sets, dtype=float)
    if sample_sets.ndim != 3 or sample_sets.shape[2] != sigma1.dim:
        raise ValidationError(f"Expected samples of shape (trials, k, {sigma1.dim}), got {sample_sets.shape}", "samples")
    h = sample_sets @ sigma1.inv_sqrt() @ vectors
    per_sample = (values - 1.0) * h**2 - np.log(values)
    return 0.5 * per_sample.sum(axis=(1, 2))


def privacy_loss_z(sigma1: MatrixLike, sigma2: MatrixLike, samples) -> float:
    """
    Exact log density ratio Σᵢ log(f_{Σ₁}(gᵢ)/f_{Σ₂}(gᵢ)) of the sampling mechanism.

    Raises:
        NumericalError: If either covariance is singular
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples.reshape(1, -1)
    return float(privacy_loss_batch(sigma1, sigma2, samples[np.newaxis])[0])


def expected_privacy_loss(sigma1: MatrixLike, sigma2: MatrixLike, k: int) -> float:
    """E[Z] = (k/2) Σⱼ (λⱼ − 1 − log λⱼ) under samples from N(0, Σ₁)"""
    values, _ = _loss_spectrum(as_psd(sigma1), as_psd(sigma2))
    return 0.5 * k * float(np.sum(values - 1.0 - np.log(values)))


def privacy_loss_bound(sigma1: MatrixLike, sigma2: MatrixLike, k: int) -> float:
    """Cauchy-Schwarz bound (k/2)‖A − I‖_F‖I − A⁻¹‖_F on E[Z]"""
    values, _ = _loss_spectrum(as_psd(sigma1), as_psd(sigma2))
    return 0.5 * k * float(np.linalg.norm(values - 1.0) * np.linalg.norm(1.0 - 1.0 / values))
