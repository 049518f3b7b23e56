"""
PSD matrix utilities built on the symmetric eigendecomposition.

All square roots and inverse square roots go through PsdMatrix.power, so
whitening is unambiguous for near-singular inputs.
"""

from typing import Optional, Union

import numpy as np
from scipy.stats import ortho_group

from .exceptions import ValidationError
from .models import PsdMatrix

MatrixLike = Union[PsdMatrix, np.ndarray]


def as_psd(matrix: MatrixLike) -> PsdMatrix:
    """Coerce an array to PsdMatrix (no-op for PsdMatrix)"""
    if isinstance(matrix, PsdMatrix):
        return matrix
    return PsdMatrix(np.asarray(matrix, dtype=float))


def whitened(a: MatrixLike, b: MatrixLike) -> np.ndarray:
    """Return b^{-1/2} a b^{-1/2}"""
    a, b = as_psd(a), as_psd(b)
    _check_same_dim(a, b)
    b.require_definite("reference matrix")
    root = b.inv_sqrt()
    result = root @ a.entries @ root
    return (result + result.T) / 2.0


def rel_frobenius(a: MatrixLike, b: MatrixLike) -> float:
    """
    Relative Frobenius deviation ‖b^{-1/2} a b^{-1/2} − I‖_F.

    Args:
        a: Estimate
        b: Reference, strictly positive definite

    Returns:
        Nonnegative deviation, zero iff a == b

    Raises:
        NumericalError: If b is singular (names the offending eigenvalue)
    """
    deviation = whitened(a, b) - np.eye(as_psd(b).dim)
    return float(np.linalg.norm(deviation, "fro"))


def mahalanobis(x, sigma: MatrixLike) -> float:
    """‖Σ^{-1/2} x‖₂ for strictly positive definite Σ"""
    sigma = as_psd(sigma)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != sigma.dim:
        raise ValidationError(f"Vector has dimension {x.shape[0]}, expected {sigma.dim}", "x")
    sigma.require_definite("covariance")
    return float(np.linalg.norm(sigma.inv_sqrt() @ x))


def random_psd(dim: int, kappa: float, rng: np.random.Generator) -> PsdMatrix:
    """
    Random covariance with spectrum in [1, κ], both ends attained.

    Interior eigenvalues are log-uniform; the eigenbasis is a Haar-random rotation.
    """
    if kappa < 1:
        raise ValidationError(f"kappa must be at least 1, got {kappa}", "kappa")
    if dim == 1:
        return PsdMatrix(np.array([[kappa]]))
    spectrum = np.exp(rng.uniform(0.0, np.log(kappa), size=dim))
    spectrum[0], spectrum[-1] = 1.0, kappa
    rotation = ortho_group.rvs(dim=dim, random_state=rng)
    return PsdMatrix((rotation * spectrum) @ rotation.T)


def perturb_at_distance(
    sigma: MatrixLike,
    distance: float,
    direction: Optional[np.ndarray] = None,
) -> PsdMatrix:
    """
    Return Σ₂ = Σ^{1/2}(I + distance·U)Σ^{1/2} with ‖U‖_F = 1.

    The whitened deviation ‖Σ^{-1/2}Σ₂Σ^{-1/2} − I‖_F equals `distance`
    exactly. The default direction is rank one along the top eigenvector.
    """
    sigma = as_psd(sigma)
    if direction is None:
        top = sigma.eigenvectors[:, -1]
        direction = np.outer(top, top)
    direction = np.asarray(direction, dtype=float)
    direction = (direction + direction.T) / 2.0
    norm = np.linalg.norm(direction, "fro")
    if norm == 0:
        raise ValidationError("Perturbation direction must be nonzero", "direction")
    bump = np.eye(sigma.dim) + distance * direction / norm
    root = sigma.sqrt()
    return PsdMatrix(root @ bump @ root)


def _check_same_dim(a: PsdMatrix, b: PsdMatrix) -> None:
    if a.dim != b.dim:
        raise ValidationError(f"Dimension mismatch: {a.dim} vs {b.dim}", "dim")
