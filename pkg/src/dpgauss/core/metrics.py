"""Estimation error metrics and total-variation brackets between Gaussians"""

import numpy as np

from .linalg import MatrixLike, as_psd, mahalanobis, rel_frobenius, whitened
from .models import GaussianParams

TV_LOWER_FACTOR = 0.01
TV_UPPER_FACTOR = 1.5


def tv_bounds(sigma1: MatrixLike, sigma2: MatrixLike) -> tuple[float, float]:
    """
    Bracket TV(N(0, Σ₁), N(0, Σ₂)).

    With λᵢ the eigenvalues of Σ₁^{-1/2}Σ₂Σ₁^{-1/2} − I (same spectrum as
    Σ₁⁻¹Σ₂ − I) and m = min{1, ‖λ‖₂}, returns (0.01·m, min(1, 1.5·m)).

    Raises:
        NumericalError: If either covariance is singular
    """
    sigma1, sigma2 = as_psd(sigma1), as_psd(sigma2)
    sigma2.require_definite("sigma2")
    deviation = whitened(sigma2, sigma1) - np.eye(sigma1.dim)
    spectrum = np.linalg.eigvalsh(deviation)
    m = min(1.0, float(np.sqrt(np.sum(spectrum**2))))
    return TV_LOWER_FACTOR * m, min(1.0, TV_UPPER_FACTOR * m)


def parameter_errors(truth: GaussianParams, estimate: GaussianParams) -> tuple[float, float]:
    """
    (‖Σ^{-1/2}(μ − μ̂)‖₂, ‖Σ^{-1/2}Σ̂Σ^{-1/2} − I‖_F) against the true Σ.
    """
    mean_err = mahalanobis(truth.mean - estimate.mean, truth.covariance)
    cov_err = rel_frobenius(estimate.covariance, truth.covariance)
    return mean_err, cov_err
