"""
Seeded random streams, Gaussian sampling and corruption models.

Every stochastic operation takes its numpy Generator explicitly; streams are
counter-based (Philox) and split with SeedSequence spawning, so a run is
replayable from its seed and independent stages never share a stream.
"""

import logging
from typing import Optional, Union

import numpy as np

from .exceptions import ValidationError
from .linalg import MatrixLike, as_psd
from .models import Adversary, CorruptionSpec, Dataset, GaussianParams, PsdMatrix

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence]


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Counter-based generator for a seed or SeedSequence"""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def split_rng(rng: np.random.Generator, count: int) -> list[np.random.Generator]:
    """Independent child streams; the parent stream is advanced deterministically"""
    return rng.spawn(count)


def sample_gaussian(params: GaussianParams, n: int, rng: np.random.Generator) -> Dataset:
    """
    Draw n i.i.d. points from N(μ, Σ) using the symmetric square root of Σ.

    Args:
        params: Mean and covariance
        n: Number of draws (n ≥ 1)
        rng: Random stream

    Returns:
        Dataset of n points, deterministic given the stream state
    """
    if n < 1:
        raise ValidationError(f"n must be at least 1, got {n}", "n")
    root = params.covariance.sqrt()
    noise = rng.standard_normal((n, params.dim))
    return Dataset(params.mean + noise @ root)


def empirical_covariance(data: Dataset, center: Optional[np.ndarray] = None) -> PsdMatrix:
    """
    (1/n) Σ (Xᵢ − c)(Xᵢ − c)ᵀ; about the origin when no center is given.
    """
    points = data.points
    if center is not None:
        center = np.asarray(center, dtype=float).reshape(-1)
        if center.shape[0] != data.dim:
            raise ValidationError(f"Center has dimension {center.shape[0]}, expected {data.dim}", "center")
        points = points - center
    second = points.T @ points / data.n
    return PsdMatrix((second + second.T) / 2.0)


def corrupt(data: Dataset, spec: CorruptionSpec, rng: np.random.Generator) -> Dataset:
    """
    Replace exactly ⌊η·n⌋ rows according to the adversary.

    replace_with_point writes the given point into each chosen row;
    shift_cluster moves each chosen row by `offset` plus Gaussian jitter of
    size `scale`. Row order is preserved and replaced indices are recorded.
    """
    count = spec.count(data.n)
    if count == 0:
        return data
    if count > data.n:
        raise ValidationError(f"Cannot corrupt {count} rows of {data.n}", "eta")

    indices = np.sort(rng.choice(data.n, size=count, replace=False))
    points = data.points.copy()

    if spec.adversary is Adversary.REPLACE_WITH_POINT:
        point = _vector(spec.point, data.dim, "point")
        points[indices] = point
    elif spec.adversary is Adversary.SHIFT_CLUSTER:
        offset = _vector(spec.offset, data.dim, "offset")
        jitter = spec.scale * rng.standard_normal((count, data.dim))
        points[indices] = points[indices] + offset + jitter

    logger.debug(f"Corrupted {count} of {data.n} rows with {spec.adversary.value}")
    return Dataset(points, corrupted_indices=tuple(indices.tolist()))


def pair_difference(data: Dataset) -> Dataset:
    """
    Mean-free samples Yᵢ = (X_{2i} − X_{2i−1})/√2 from consecutive pairs.

    A trailing unpaired point is dropped.
    """
    pairs = data.n // 2
    if pairs < 1:
        raise ValidationError("Pair differencing needs at least two points", "n")
    points = data.points[: 2 * pairs]
    return Dataset((points[1::2] - points[0::2]) / np.sqrt(2.0))


def moment_matched_sample(sigma: MatrixLike, repeats: int = 1) -> Dataset:
    """
    2d·repeats points ±√d·Σ^{1/2}eᵢ whose second moment about the origin is exactly Σ.
    """
    sigma = as_psd(sigma)
    dim = sigma.dim
    root = sigma.sqrt()
    block = np.sqrt(dim) * np.vstack([root, -root])
    return Dataset(np.tile(block, (repeats, 1)))


def _vector(values, dim: int, field: str) -> np.ndarray:
    vector = np.asarray(values, dtype=float).reshape(-1)
    if vector.shape[0] != dim:
        raise ValidationError(f"{field} has dimension {vector.shape[0]}, expected {dim}", field)
    return vector
