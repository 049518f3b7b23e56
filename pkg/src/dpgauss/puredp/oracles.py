"""
Pure-DP mean oracles.

The pipelines treat mean estimation as a black box behind PureMeanOracle.
Three implementations ship:

- NonPrivateTrimmedMean: utility only, for isolating preconditioner logic
- ClipLaplaceMean: clip-and-noise, ε-DP, worse dimension dependence
- InjectedErrorOracle: empirical mean plus an error of norm exactly α
"""

import logging
from typing import Callable, Optional, Union

import numpy as np
from scipy.stats import trim_mean

from ..core.constants import CLIP_MARGIN, TRIM_FRACTION
from ..core.exceptions import ValidationError
from ..core.interfaces import PureMeanOracle
from ..core.models import Dataset
from ..mechanisms.laplace import laplace_mechanism
from ..utils.validators import require_positive

logger = logging.getLogger(__name__)

DirectionFn = Callable[[Dataset, np.random.Generator], np.ndarray]


class NonPrivateTrimmedMean(PureMeanOracle):
    """Coordinate-wise trimmed mean; satisfies the utility contract only"""

    name = "trimmed"
    is_private = False

    def __init__(self, proportion: float = TRIM_FRACTION):
        if not 0 <= proportion < 0.5:
            raise ValidationError(f"Trim proportion must lie in [0, 0.5), got {proportion}", "proportion")
        self.proportion = proportion

    def estimate(self, data, radius, alpha, beta, epsilon, rng) -> np.ndarray:
        return np.asarray(trim_mean(data.points, self.proportion, axis=0), dtype=float)


class ClipLaplaceMean(PureMeanOracle):
    """
    Clip to the ball of radius r = R + 10√d, average, add Laplace noise.

    The clipped mean has ℓ₁-sensitivity 2r√d/n, so the output is ε-DP.
    """

    name = "clip_laplace"
    is_private = True

    def __init__(self, margin: float = CLIP_MARGIN):
        self.margin = margin

    def clip_radius(self, radius: float, dim: int) -> float:
        return radius + self.margin * np.sqrt(dim)

    def estimate(self, data, radius, alpha, beta, epsilon, rng) -> np.ndarray:
        require_positive(radius, "radius")
        require_positive(epsilon, "epsilon")
        r = self.clip_radius(radius, data.dim)
        norms = np.linalg.norm(data.points, axis=1)
        factors = np.minimum(1.0, r / np.maximum(norms, np.finfo(float).tiny))
        clipped_mean = (data.points * factors[:, np.newaxis]).mean(axis=0)
        sensitivity = 2.0 * r * np.sqrt(data.dim) / data.n
        return laplace_mechanism(clipped_mean, sensitivity, epsilon, rng)


class InjectedErrorOracle(PureMeanOracle):
    """
    Empirical mean plus a perturbation of ℓ₂ norm exactly `scale`·α.

    direction may be a fixed vector, a callable (data, rng) -> vector, or
    None for a uniformly random direction. Not private.
    """

    name = "injected"
    is_private = False

    def __init__(
        self,
        direction: Union[np.ndarray, DirectionFn, None] = None,
        scale: float = 1.0,
    ):
        if scale < 0:
            raise ValidationError("Injected error scale cannot be negative", "scale")
        self.direction = direction
        self.scale = scale

    def _unit(self, data: Dataset, rng: np.random.Generator) -> np.ndarray:
        if callable(self.direction):
            vector = self.direction(data, rng)
        elif self.direction is None:
            vector = rng.standard_normal(data.dim)
        else:
            vector = self.direction
        vector = np.asarray(vector, dtype=float).reshape(-1)
        if vector.shape[0] != data.dim:
            raise ValidationError(f"Error direction has dimension {vector.shape[0]}, expected {data.dim}", "direction")
        norm = np.linalg.norm(vector)
        if norm == 0:
            return np.zeros(data.dim)
        return vector / norm

    def estimate(self, data, radius, alpha, beta, epsilon, rng) -> np.ndarray:
        return data.mean() + self.scale * alpha * self._unit(data, rng)


_ORACLES: dict[str, type[PureMeanOracle]] = {
    NonPrivateTrimmedMean.name: NonPrivateTrimmedMean,
    ClipLaplaceMean.name: ClipLaplaceMean,
    InjectedErrorOracle.name: InjectedErrorOracle,
}


def make_oracle(kind: str, **options) -> PureMeanOracle:
    """
    Build an oracle by registry name

    Raises:
        ValidationError: For an unknown name
    """
    try:
        cls = _ORACLES[kind]
    except KeyError:
        raise ValidationError(
            f"Unknown oracle '{kind}', expected one of {sorted(_ORACLES)}", "oracle"
        ) from None
    oracle = cls(**options)
    if not oracle.is_private:
        logger.warning(f"Oracle '{kind}' is not differentially private")
    return oracle


def available_oracles() -> list[str]:
    return sorted(_ORACLES)
