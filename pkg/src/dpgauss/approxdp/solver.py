"""
Witness solver: maximum-entropy weights under a spectral moment constraint.

Weights are parametrized as wᵢ = e^{−sᵢ}/n with sᵢ ≥ 0, which keeps them in
(0, 1/n]. Each iteration does one of two things:

- if the constraint is violated, down-weight the points whose score along
  the top violating direction exceeds C, by the smallest step that brings
  the variance along that direction back to C;
- otherwise shrink s toward zero (uniform weights, maximum entropy) by the
  largest factor that keeps the constraint satisfied.

The mass floor 1 − η bounds how much may be removed; falling below it
declares the program infeasible.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from ..core.constants import SOLVER_ITERATION_FACTOR, SOLVER_TOL
from ..core.exceptions import NonConvergenceError, ValidationError
from ..core.models import Dataset, PsdMatrix
from .certificates import hypercontractive_features
from .entropy import MASS_TOL, WeightVector, potential

logger = logging.getLogger(__name__)

BISECTION_STEPS = 40
THETA_BASE = 50.0


class WitnessKind(Enum):
    """Which moment constraint the witness must satisfy"""

    MEAN = "mean"
    COVARIANCE = "covariance"


@dataclass(frozen=True)
class ConstraintState:
    """Top eigenvalue of the constraint matrix, its eigenvector and per-point scores"""

    value: float
    direction: np.ndarray
    scores: np.ndarray


class WitnessConstraint(ABC):
    """Spectral constraint λ_max(Σ pᵢ φᵢφᵢᵀ) ≤ C over some per-point features φ"""

    kind: WitnessKind

    def __init__(self, points: np.ndarray):
        self.points = points

    @abstractmethod
    def features(self, p: np.ndarray) -> np.ndarray:
        """Per-point feature rows φᵢ under probabilities p"""
        pass

    def evaluate(self, p: np.ndarray) -> ConstraintState:
        phi = self.features(p)
        matrix = (phi * p[:, np.newaxis]).T @ phi
        values, vectors = np.linalg.eigh((matrix + matrix.T) / 2.0)
        direction = vectors[:, -1]
        return ConstraintState(float(values[-1]), direction, (phi @ direction) ** 2)

    def along(self, p: np.ndarray, direction: np.ndarray) -> float:
        """Σ pᵢ⟨φᵢ, u⟩² for a fixed direction u"""
        return float(p @ (self.features(p) @ direction) ** 2)


class MeanConstraint(WitnessConstraint):
    """Weighted covariance bounded by C·I"""

    kind = WitnessKind.MEAN

    def features(self, p):
        return self.points - p @ self.points


class CovarianceConstraint(WitnessConstraint):
    """Centred degree-2 hypercontractivity of the whitened points"""

    kind = WitnessKind.COVARIANCE

    def features(self, p):
        return hypercontractive_features(self.points, p)


def make_constraint(kind: WitnessKind, data: Dataset) -> WitnessConstraint:
    if kind is WitnessKind.MEAN:
        return MeanConstraint(data.points)
    return CovarianceConstraint(data.points)


@dataclass(eq=False)
class WitnessSolution:
    """Weights found by the solver with the moments they induce"""

    weights: WeightVector
    mean: np.ndarray
    second_moment: PsdMatrix
    potential: float
    feasible: bool
    certificate: dict = field(default_factory=dict)
    log_weights: np.ndarray = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "potential": self.potential,
            "mass": self.weights.mass,
            "certificate": self.certificate,
        }


def _weights(log_weights: np.ndarray) -> np.ndarray:
    return np.exp(-log_weights) / log_weights.size


def _smallest_passing(predicate: Callable[[float], bool], upper: float) -> float:
    """Smallest t in [0, upper] with predicate(t), assuming monotone; upper if none"""
    if not predicate(upper):
        return upper
    low, high = 0.0, upper
    for _ in range(BISECTION_STEPS):
        mid = (low + high) / 2.0
        if predicate(mid):
            high = mid
        else:
            low = mid
    return high


def _largest_passing(predicate: Callable[[float], bool], tol: float) -> float:
    """Largest ρ in [0, 1] with predicate(ρ), assuming monotone; 0 if below tol"""
    if predicate(1.0):
        return 1.0
    if not predicate(tol):
        return 0.0
    low, high = tol, 1.0
    for _ in range(BISECTION_STEPS):
        mid = (low + high) / 2.0
        if predicate(mid):
            low = mid
        else:
            high = mid
    return low


def solve_witness(
    constraint: WitnessConstraint,
    eta: float,
    C: float,
    tol: float = SOLVER_TOL,
    start: Optional[np.ndarray] = None,
) -> WitnessSolution:
    """
    Maximize Ent(w) over the weight polytope subject to the constraint.

    Args:
        constraint: Moment constraint over the data
        eta: Outlier rate, mass floor 1 − η
        C: Constraint bound
        tol: Convergence tolerance on the restoration step and the potential
        start: Optional log-weights to warm-start from (must be feasible to help)

    Returns:
        WitnessSolution; infeasible programs have feasible=False and potential +inf

    Raises:
        NonConvergenceError: If still violating after ⌈500·log n⌉ iterations
    """
    n = constraint.points.shape[0]
    if n < 2:
        raise ValidationError(f"Witness solver needs n >= 2, got {n}", "n")
    if not 0.0 <= eta < 1.0:
        raise ValidationError(f"eta must lie in [0, 1), got {eta}", "eta")
    if C <= 0:
        raise ValidationError(f"C must be positive, got {C}", "C")

    floor = 1.0 - eta
    limit = C * (1.0 + tol)
    cap = int(math.ceil(SOLVER_ITERATION_FACTOR * math.log(n)))
    s = np.zeros(n) if start is None else np.maximum(np.asarray(start, dtype=float), 0.0).copy()

    def probabilities(log_weights: np.ndarray) -> np.ndarray:
        w = _weights(log_weights)
        return w / w.sum()

    def satisfied(log_weights: np.ndarray) -> bool:
        return constraint.evaluate(probabilities(log_weights)).value <= limit

    feasible = False
    converged = False
    state = None
    iteration = 0

    for iteration in range(1, cap + 1):
        mass = float(_weights(s).sum())
        if mass < floor - MASS_TOL:
            break
        p = probabilities(s)
        state = constraint.evaluate(p)

        if state.value > limit:
            excess = np.clip(state.scores - C, 0.0, None)
            top = float(excess.max())
            step = excess / top if top > 0 else state.scores / float(state.scores.max())
            direction = state.direction
            upper = THETA_BASE + math.log(max(float(state.scores.max()) / C, 1.0))
            theta = _smallest_passing(
                lambda t: constraint.along(probabilities(s + t * step), direction) <= C,
                upper,
            )
            s = s + theta * step
            logger.debug(f"iter {iteration}: λ={state.value:.4g} > C, down-weight θ={theta:.4g}")
            continue

        feasible = True
        if not s.any():
            converged = True
            break
        before = potential(_weights(s))
        rho = _largest_passing(lambda r: satisfied(s * (1.0 - r)), tol)
        if rho == 0.0:
            converged = True
            break
        s = s * (1.0 - rho)
        gain = before - potential(_weights(s))
        logger.debug(f"iter {iteration}: restore ρ={rho:.4g}, potential gain {gain:.3g}")
        if gain < tol:
            converged = True
            break
    else:
        state = constraint.evaluate(probabilities(s))
        feasible = state.value <= limit and float(_weights(s).sum()) >= floor - MASS_TOL
        if not feasible and float(_weights(s).sum()) >= floor - MASS_TOL:
            raise NonConvergenceError(
                f"Witness solver still violates the constraint (λ={state.value:.6g} > C={C:.6g}) "
                f"after {cap} iterations",
                cap,
            )

    w = _weights(s)
    mass = float(w.sum())
    feasible = feasible and mass >= floor - MASS_TOL
    p = w / mass
    if feasible:
        state = constraint.evaluate(p)
    mean = p @ constraint.points
    second = (constraint.points * p[:, np.newaxis]).T @ constraint.points

    certificate = {
        "lambda_max": None if state is None else state.value,
        "C": C,
        "mass": mass,
        "mass_floor": floor,
        "iterations": iteration,
        "converged": converged,
    }
    weights = WeightVector(w, eta if feasible else min(max(eta, 1.0 - mass), 1.0 - MASS_TOL))
    return WitnessSolution(
        weights=weights,
        mean=mean,
        second_moment=PsdMatrix.project(second),
        potential=potential(w) if feasible else math.inf,
        feasible=feasible,
        certificate=certificate,
        log_weights=s,
    )


def solve_mean_witness(
    data: Dataset,
    eta: float,
    C: float,
    tol: float = SOLVER_TOL,
    start: Optional[np.ndarray] = None,
) -> WitnessSolution:
    """Maximum-entropy weights whose weighted covariance is at most C·I"""
    return solve_witness(MeanConstraint(data.points), eta, C, tol, start)


def solve_cov_witness(
    data: Dataset,
    eta: float,
    C: float,
    tol: float = SOLVER_TOL,
    start: Optional[np.ndarray] = None,
) -> WitnessSolution:
    """
    Maximum-entropy weights under which the whitened points are
    C-hypercontractive at degree 2

    Raises:
        NumericalError: If the weighted covariance becomes singular
    """
    return solve_witness(CovarianceConstraint(data.points), eta, C, tol, start)
