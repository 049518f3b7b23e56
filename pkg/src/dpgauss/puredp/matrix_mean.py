"""Covariance estimation as private mean estimation of flattened outer products"""

import logging
import math

import numpy as np

from ..core.exceptions import ValidationError
from ..core.interfaces import PureMeanOracle
from ..core.models import Dataset, PsdMatrix
from ..utils.validators import require_positive

logger = logging.getLogger(__name__)

_SQRT3 = math.sqrt(3.0)


def outer_product_samples(data: Dataset, kappa: float) -> Dataset:
    """Yᵢ = vec(XᵢXᵢᵀ)/(√3κ); Cov(Y) ⪯ I when Σ ⪯ κI"""
    points = data.points
    outer = np.einsum("ni,nj->nij", points, points).reshape(data.n, data.dim * data.dim)
    return Dataset(outer / (_SQRT3 * kappa))


def matrix_mean(
    data: Dataset,
    kappa: float,
    alpha: float,
    beta: float,
    epsilon: float,
    oracle: PureMeanOracle,
    rng: np.random.Generator,
) -> PsdMatrix:
    """
    ε-DP estimate of E[XXᵀ] with ‖Σ̂ − Σ‖_F ≤ ακ given a contract-satisfying oracle.

    The oracle runs on the flattened outer products with radius √(d/3) and
    error α/√3; its answer is reshaped, rescaled by √3κ, symmetrized and
    projected onto the PSD cone.
    """
    if kappa < 1:
        raise ValidationError(f"kappa must be at least 1, got {kappa}", "kappa")
    require_positive(alpha, "alpha")

    samples = outer_product_samples(data, kappa)
    radius = math.sqrt(data.dim / 3.0)
    flat = oracle.estimate(samples, radius, alpha / _SQRT3, beta, epsilon, rng)

    matrix = np.asarray(flat, dtype=float).reshape(data.dim, data.dim) * (_SQRT3 * kappa)
    estimate = PsdMatrix.project(matrix)
    logger.debug(f"matrix_mean: d={data.dim}, n={data.n}, κ={kappa:.4g}, trace={estimate.trace:.4g}")
    return estimate
