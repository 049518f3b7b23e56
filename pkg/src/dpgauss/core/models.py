"""
Domain models with validation.
Uses frozen dataclasses with __post_init__ validation; arrays are copied and
made read-only at construction so values stay immutable once built.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any, Optional

import numpy as np

from .constants import EIGEN_FLOOR, PSD_TOL
from .exceptions import NumericalError, ValidationError

if TYPE_CHECKING:
    from ..mechanisms.budget import BudgetLedger


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class Rejected(Enum):
    """Sentinel returned by mechanisms that decline to answer"""

    REJECT = "reject"

    def __repr__(self) -> str:
        return "REJECT"


REJECT = Rejected.REJECT


@dataclass(frozen=True, eq=False)
class PsdMatrix:
    """Symmetric positive-semidefinite matrix with a cached eigendecomposition"""

    entries: np.ndarray
    eigenvalues: np.ndarray = field(init=False, repr=False)
    eigenvectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        matrix = np.array(self.entries, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
            raise ValidationError(f"Expected a non-empty square matrix, got shape {matrix.shape}", "entries")
        if not np.all(np.isfinite(matrix)):
            raise ValidationError("Matrix entries must be finite", "entries")

        matrix = (matrix + matrix.T) / 2.0
        values, vectors = np.linalg.eigh(matrix)
        dim = matrix.shape[0]
        tolerance = PSD_TOL * max(float(np.trace(matrix)) / dim, 0.0)

        if values[0] < -tolerance:
            raise ValidationError(
                f"Matrix is not positive semidefinite: minimum eigenvalue {values[0]:.6g}", "entries"
            )
        if values[-1] < EIGEN_FLOOR:
            raise ValidationError(
                f"Matrix is numerically zero: largest eigenvalue {values[-1]:.6g} below floor {EIGEN_FLOOR:g}",
                "entries",
            )
        if values[0] < 0:
            values = np.clip(values, 0.0, None)
            matrix = (vectors * values) @ vectors.T
            matrix = (matrix + matrix.T) / 2.0

        object.__setattr__(self, "entries", _frozen(matrix))
        object.__setattr__(self, "eigenvalues", _frozen(values))
        object.__setattr__(self, "eigenvectors", _frozen(vectors))

    # ----- constructors -----

    @classmethod
    def identity(cls, dim: int) -> "PsdMatrix":
        """Identity matrix of size dim"""
        return cls(np.eye(dim))

    @classmethod
    def diagonal(cls, values) -> "PsdMatrix":
        """Diagonal matrix from a vector of nonnegative values"""
        return cls(np.diag(np.asarray(values, dtype=float)))

    @classmethod
    def project(cls, matrix: np.ndarray) -> "PsdMatrix":
        """Exact PSD projection: symmetrize and clamp negative eigenvalues to zero"""
        matrix = np.asarray(matrix, dtype=float)
        matrix = (matrix + matrix.T) / 2.0
        values, vectors = np.linalg.eigh(matrix)
        clamped = np.clip(values, 0.0, None)
        return cls((vectors * clamped) @ vectors.T)

    # ----- spectral queries -----

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def require_definite(self, name: str = "matrix") -> None:
        """
        Ensure every eigenvalue sits above the numeric floor

        Raises:
            NumericalError: Naming the offending eigenvalue
        """
        index = int(np.argmin(self.eigenvalues))
        smallest = float(self.eigenvalues[index])
        if smallest < EIGEN_FLOOR:
            raise NumericalError(
                f"{name} is singular: eigenvalue #{index} = {smallest:.6g} is below floor {EIGEN_FLOOR:g}",
                smallest,
            )

    def power(self, exponent: float) -> np.ndarray:
        """Matrix power through the eigendecomposition; negative powers need a definite matrix"""
        if exponent < 0:
            self.require_definite()
        values = np.clip(self.eigenvalues, 0.0, None) ** exponent
        result = (self.eigenvectors * values) @ self.eigenvectors.T
        return (result + result.T) / 2.0

    def sqrt(self) -> np.ndarray:
        return self.power(0.5)

    def inv_sqrt(self) -> np.ndarray:
        return self.power(-0.5)

    def inverse(self) -> np.ndarray:
        return self.power(-1.0)

    def whiten(self, points: np.ndarray) -> np.ndarray:
        """Apply Σ^{-1/2} to a vector or to every row of a matrix"""
        return np.asarray(points, dtype=float) @ self.inv_sqrt()

    def congruence(self, transform: np.ndarray) -> "PsdMatrix":
        """Return T M Tᵀ"""
        transform = np.asarray(transform, dtype=float)
        return PsdMatrix(transform @ self.entries @ transform.T)

    def to_list(self) -> list[list[float]]:
        return self.entries.tolist()


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ordered multiset of n points in R^d"""

    points: np.ndarray
    corrupted_indices: tuple[int, ...] = ()

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise ValidationError(f"Dataset needs at least one point, got shape {points.shape}", "points")
        if not np.all(np.isfinite(points)):
            raise ValidationError("Dataset entries must be finite", "points")
        object.__setattr__(self, "points", _frozen(points))
        object.__setattr__(self, "corrupted_indices", tuple(int(i) for i in self.corrupted_indices))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n

    def mean(self) -> np.ndarray:
        return self.points.mean(axis=0)

    def replace_row(self, index: int, point) -> "Dataset":
        """Return the neighboring dataset with row `index` replaced"""
        if not 0 <= index < self.n:
            raise ValidationError(f"Row index {index} out of range for n = {self.n}", "index")
        point = np.asarray(point, dtype=float).reshape(-1)
        if point.shape[0] != self.dim:
            raise ValidationError(f"Replacement has dimension {point.shape[0]}, expected {self.dim}", "point")
        points = self.points.copy()
        points[index] = point
        return Dataset(points)

    def is_neighbor(self, other: "Dataset") -> bool:
        """True iff same n and d and exactly one row differs"""
        if self.points.shape != other.points.shape:
            return False
        differing = np.any(self.points != other.points, axis=1)
        return int(differing.sum()) == 1

    def subset(self, start: int, stop: int) -> "Dataset":
        return Dataset(self.points[start:stop])

    def partition(self, parts: int) -> list["Dataset"]:
        """Split into `parts` disjoint contiguous blocks of near-equal size"""
        if parts < 1 or parts > self.n:
            raise ValidationError(f"Cannot split {self.n} points into {parts} parts", "parts")
        return [Dataset(block) for block in np.array_split(self.points, parts)]

    def transform(self, matrix: np.ndarray) -> "Dataset":
        """Apply a linear map x -> M x to every point"""
        return Dataset(self.points @ np.asarray(matrix, dtype=float).T)


@dataclass(frozen=True, eq=False)
class GaussianParams:
    """Mean and covariance of a Gaussian"""

    mean: np.ndarray
    covariance: PsdMatrix

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        if mean.shape[0] != self.covariance.dim:
            raise ValidationError(
                f"Mean has dimension {mean.shape[0]} but covariance is {self.covariance.dim}x{self.covariance.dim}",
                "mean",
            )
        object.__setattr__(self, "mean", _frozen(mean))

    @property
    def dim(self) -> int:
        return self.covariance.dim


class Adversary(Enum):
    """Corruption adversaries"""

    NONE = "none"
    REPLACE_WITH_POINT = "replace_with_point"
    SHIFT_CLUSTER = "shift_cluster"


@dataclass(frozen=True)
class CorruptionSpec:
    """η-corruption: ⌊ηn⌋ rows replaced by the chosen adversary"""

    eta: float = 0.0
    adversary: Adversary = Adversary.NONE
    point: Optional[tuple[float, ...]] = None
    offset: Optional[tuple[float, ...]] = None
    scale: float = 0.0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not 0.0 <= self.eta < 0.5:
            raise ValidationError(f"eta must lie in [0, 1/2), got {self.eta}", "eta")
        if self.adversary is Adversary.REPLACE_WITH_POINT and self.point is None:
            raise ValidationError("replace_with_point needs a point", "point")
        if self.adversary is Adversary.SHIFT_CLUSTER and self.offset is None:
            raise ValidationError("shift_cluster needs an offset", "offset")
        if self.scale < 0:
            raise ValidationError("Cluster scale cannot be negative", "scale")

    def count(self, n: int) -> int:
        """Number of replaced rows, ⌊η·n⌋"""
        if self.adversary is Adversary.NONE:
            return 0
        return int(math.floor(self.eta * n + 1e-9))


@dataclass
class EstimationReport:
    """Estimate, error metrics, budget spent and provenance of one pipeline run"""

    pipeline: str
    ledger: "BudgetLedger"
    mean: Optional[np.ndarray] = None
    covariance: Optional[PsdMatrix] = None
    errors: dict[str, float] = field(default_factory=dict)
    tv_bracket: Optional[tuple[float, float]] = None
    halt_stage: Optional[str] = None
    failure_probability: Optional[float] = None
    artifacts: dict[str, Any] = field(default_factory=dict)

    @property
    def halted(self) -> bool:
        return self.halt_stage is not None

    def to_dict(self) -> dict[str, Any]:
        """Convert report to a JSON-ready dictionary"""
        from ..utils.formatters import to_jsonable

        return to_jsonable(
            {
                "pipeline": self.pipeline,
                "halt_stage": self.halt_stage,
                "mean": self.mean,
                "covariance": None if self.covariance is None else self.covariance.entries,
                "errors": self.errors,
                "tv_bracket": self.tv_bracket,
                "failure_probability": self.failure_probability,
                "ledger": self.ledger.to_dict(),
                "artifacts": self.artifacts,
            }
        )
