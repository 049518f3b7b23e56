"""
Weight vectors and the entropy potential.

Weights live in the box [0, 1/n]^n with total mass in [1 − η, 1]. The
potential of a weight vector is −Ent(w)/log n, where
Ent(x) = Σ xᵢ log(1/xᵢ) + xᵢ with 0·log(1/0) = 0.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from ..core.exceptions import ValidationError

MASS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Relaxed inlier indicator: 0 ≤ wᵢ ≤ 1/n, Σ w ∈ [1 − η, 1]"""

    w: np.ndarray
    eta: float = 0.0

    def __post_init__(self):
        w = np.array(self.w, dtype=float).reshape(-1)
        if w.size == 0:
            raise ValidationError("Weight vector cannot be empty", "w")
        if not 0.0 <= self.eta < 1.0:
            raise ValidationError(f"eta must lie in [0, 1), got {self.eta}", "eta")
        cap = 1.0 / w.size
        if np.any(w < -MASS_TOL * cap) or np.any(w > cap * (1.0 + MASS_TOL)):
            raise ValidationError(f"Weights must lie in [0, 1/n] with n = {w.size}", "w")
        w = np.clip(w, 0.0, cap)
        mass = float(w.sum())
        if mass < 1.0 - self.eta - MASS_TOL:
            raise ValidationError(f"Weight mass {mass:.6g} is below the floor {1.0 - self.eta:.6g}", "w")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @classmethod
    def uniform(cls, n: int, eta: float = 0.0) -> "WeightVector":
        return cls(np.full(n, 1.0 / n), eta)

    @property
    def n(self) -> int:
        return self.w.size

    @property
    def mass(self) -> float:
        return float(self.w.sum())

    def normalized(self) -> np.ndarray:
        """Probability vector p = w/‖w‖₁"""
        return renormalize(self.w)

    def zero_out(self, index: int) -> "WeightVector":
        """Zero wᵢ and raise η by 1/n; the result stays in the polytope"""
        w = self.w.copy()
        w[index] = 0.0
        return WeightVector(w, min(self.eta + 1.0 / self.n, 1.0 - MASS_TOL))


def unnormalized_entropy(x) -> float:
    """
    Ent(x) = Σ xᵢ log(1/xᵢ) + xᵢ

    Raises:
        ValidationError: On a negative entry
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValidationError("Entropy is defined for nonnegative vectors only", "x")
    return float(np.sum(entr(x) + x))


def potential(w) -> float:
    """
    −Ent(w)/log n; lies in [−1 − 1/log n, −(1−η)(1 + 1/log n)] on the polytope.

    Raises:
        ValidationError: If n ≤ 1
    """
    values = w.w if isinstance(w, WeightVector) else np.asarray(w, dtype=float)
    n = values.size
    if n <= 1:
        raise ValidationError(f"Potential needs n >= 2, got {n}", "n")
    return -unnormalized_entropy(values) / math.log(n)


def renormalize(x) -> np.ndarray:
    """x/‖x‖₁"""
    x = np.asarray(x, dtype=float)
    total = float(np.abs(x).sum())
    if total == 0:
        raise ValidationError("Cannot renormalize the zero vector", "x")
    return x / total
