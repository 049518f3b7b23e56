"""
Moment certificates for weighted samples.

Both checks reduce to an eigenvalue problem over symmetric d×d matrices,
written in svec coordinates (diagonal entries as-is, off-diagonal entries
scaled by √2) so that inner products match the Frobenius inner product.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from ..core.constants import EIGEN_CAP, SUBGAUSSIAN_ORDER
from ..core.exceptions import (CapacityError, UnsupportedOrderError,
                               ValidationError)
from ..core.models import Dataset, PsdMatrix
from .entropy import WeightVector

logger = logging.getLogger(__name__)

CERTIFICATE_TOL = 1e-9


@dataclass(frozen=True)
class Certificate:
    """Outcome of a moment check: passed iff top_eigenvalue ≤ threshold"""

    passed: bool
    top_eigenvalue: float
    threshold: float

    @property
    def slack(self) -> float:
        return self.threshold - self.top_eigenvalue

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "top_eigenvalue": self.top_eigenvalue,
            "threshold": self.threshold,
            "slack": self.slack,
        }


def svec_outer(points: np.ndarray) -> np.ndarray:
    """Rows svec(xᵢxᵢᵀ), shape (n, d(d+1)/2)"""
    dim = points.shape[1]
    rows, cols = np.triu_indices(dim)
    scale = np.where(rows == cols, 1.0, np.sqrt(2.0))
    return points[:, rows] * points[:, cols] * scale


def svec_identity(dim: int) -> np.ndarray:
    rows, cols = np.triu_indices(dim)
    return (rows == cols).astype(float)


def weighted_moments(points: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(Σ pᵢYᵢ, Σ pᵢ(Yᵢ − μ)(Yᵢ − μ)ᵀ)"""
    mean = p @ points
    centered = points - mean
    covariance = (centered * p[:, np.newaxis]).T @ centered
    return mean, (covariance + covariance.T) / 2.0


def whitened_centered(points: np.ndarray, p: np.ndarray) -> np.ndarray:
    """
    Π⁻¹(Yᵢ − μ̃) with Π² the weighted centered covariance

    Raises:
        NumericalError: If the weighted covariance is singular
    """
    _, covariance = weighted_moments(points, p)
    second = PsdMatrix(covariance)
    second.require_definite("weighted covariance")
    mean = p @ points
    return (points - mean) @ second.inv_sqrt()


def _check_capacity(dim: int) -> None:
    if dim > EIGEN_CAP:
        raise CapacityError(
            f"Moment certificates solve d²-sized eigenproblems; d = {dim} exceeds the cap {EIGEN_CAP}",
            EIGEN_CAP,
        )


def _probabilities(weights: WeightVector, data: Dataset) -> np.ndarray:
    if weights.n != data.n:
        raise ValidationError(f"{weights.n} weights for {data.n} points", "weights")
    return weights.normalized()


def certify_subgaussian(weights: WeightVector, data: Dataset, C: float, k: int = SUBGAUSSIAN_ORDER) -> Certificate:
    """
    Degree-4 certificate that E⟨x − μ̃, v⟩⁴ ≤ (2C)²(E⟨x − μ̃, v⟩²)² for all v.

    After weighted centering and whitening, with M₄ the fourth-moment matrix
    of svec(zzᵀ) and F the symmetric identity form
    (svec(I)svec(I)ᵀ + 2I)/3, the check passes iff M₄ − (2C)²F is negative
    semidefinite. F is the fourth-moment form of a standard Gaussian divided
    by 3, so Gaussian samples pass for C ≥ √3/2 up to sampling error.

    Raises:
        UnsupportedOrderError: For k ≠ 2
        CapacityError: If d exceeds the eigenproblem cap
        NumericalError: If the weighted covariance is singular
    """
    if k != SUBGAUSSIAN_ORDER:
        raise UnsupportedOrderError(f"Only order {SUBGAUSSIAN_ORDER} certificates are implemented, got {k}", k)
    _check_capacity(data.dim)

    p = _probabilities(weights, data)
    z = whitened_centered(data.points, p)
    features = svec_outer(z)
    moment = (features * p[:, np.newaxis]).T @ features

    identity = svec_identity(data.dim)
    form = (np.outer(identity, identity) + 2.0 * np.eye(identity.size)) / 3.0
    size = identity.size
    top = float(eigh(moment, form, eigvals_only=True, subset_by_index=[size - 1, size - 1])[0])

    threshold = (2.0 * C) ** 2
    passed = top <= threshold * (1.0 + CERTIFICATE_TOL)
    logger.debug(f"Subgaussian certificate: ratio {top:.4g} vs (2C)² = {threshold:.4g}")
    return Certificate(passed, top, threshold)


def hypercontractive_features(points: np.ndarray, p: np.ndarray) -> np.ndarray:
    """svec(x̄ᵢx̄ᵢᵀ − I) for whitened, centered x̄ᵢ"""
    z = whitened_centered(points, p)
    return svec_outer(z) - svec_identity(points.shape[1])


def check_hypercontractive(weights: WeightVector, data: Dataset, C: float) -> Certificate:
    """
    Degree-2 hypercontractivity in centred form.

    Passes iff Σ pᵢ(x̄ᵢᵀQx̄ᵢ − tr Q)² ≤ C‖Q‖_F² for every symmetric Q, i.e.
    iff λ_max(Σ pᵢφᵢφᵢᵀ) ≤ C with φᵢ = svec(x̄ᵢx̄ᵢᵀ − I). Gaussian samples
    give a top eigenvalue near 2.

    Raises:
        CapacityError: If d exceeds the eigenproblem cap
        NumericalError: If the weighted covariance is singular
    """
    _check_capacity(data.dim)
    p = _probabilities(weights, data)
    features = hypercontractive_features(data.points, p)
    moment = (features * p[:, np.newaxis]).T @ features
    top = float(np.linalg.eigvalsh((moment + moment.T) / 2.0)[-1])
    passed = top <= C * (1.0 + CERTIFICATE_TOL)
    logger.debug(f"Hypercontractivity check: {top:.4g} vs C = {C:.4g}")
    return Certificate(passed, top, float(C))
