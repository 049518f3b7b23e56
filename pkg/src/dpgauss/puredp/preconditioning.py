"""
Private preconditioning.

One weak round shrinks the large-eigenvalue subspace of the covariance by a
constant factor; the recursive version chains rounds on disjoint partitions
until the condition number bound drops to 20. Each round is symmetric; the
product A = A_L ⋯ A₁ generally is not, so guarantees are stated for AΣAᵀ.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..core.constants import (RECURSION_DECAY, RECURSION_TARGET_KAPPA,
                              ROUND_FAILURE_SCALE, THRESHOLD_TOL, WEAK_ALPHA,
                              WEAK_MIN_KAPPA, WEAK_RESCALE, WEAK_SHRINK)
from ..core.exceptions import ValidationError
from ..core.interfaces import PureMeanOracle
from ..core.models import Dataset
from ..mechanisms.budget import BudgetLedger, PrivacyBudget
from .matrix_mean import matrix_mean

logger = logging.getLogger(__name__)


@dataclass
class PreconditionerChain:
    """Rounds A₁…A_L, their product A = A_L ⋯ A₁ and the per-round bounds κⱼ"""

    dim: int
    initial_kappa: float
    rounds: list[np.ndarray] = field(default_factory=list)
    kappas: list[float] = field(default_factory=list)
    product: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.product is None:
            self.product = np.eye(self.dim)

    @classmethod
    def identity(cls, dim: int, kappa: float) -> "PreconditionerChain":
        return cls(dim=dim, initial_kappa=kappa)

    @property
    def is_identity(self) -> bool:
        return not self.rounds

    @property
    def final_kappa(self) -> float:
        """Bound κ with I ⪯ AΣAᵀ ⪯ κI once every round has succeeded"""
        if not self.rounds:
            return self.initial_kappa
        return RECURSION_DECAY * self.kappas[-1]

    def append(self, matrix: np.ndarray, kappa: float) -> None:
        self.rounds.append(matrix)
        self.kappas.append(kappa)
        self.product = matrix @ self.product

    def apply(self, data: Dataset) -> Dataset:
        """Map every point x to A x"""
        return data.transform(self.product)

    def undo_covariance(self, matrix: np.ndarray) -> np.ndarray:
        """A⁻¹ M A⁻ᵀ through two linear solves"""
        left = np.linalg.solve(self.product, matrix)
        result = np.linalg.solve(self.product, left.T)
        return (result + result.T) / 2.0

    def undo_mean(self, vector: np.ndarray) -> np.ndarray:
        """A⁻¹ v"""
        return np.linalg.solve(self.product, vector)


def round_count(kappa: float) -> int:
    """L = ⌈log(κ/20)/log(100/99)⌉, zero when κ ≤ 20"""
    if kappa <= RECURSION_TARGET_KAPPA:
        return 0
    return int(math.ceil(math.log(kappa / RECURSION_TARGET_KAPPA) / math.log(1.0 / RECURSION_DECAY)))


def weak_precondition(
    data: Dataset,
    kappa: float,
    beta: float,
    epsilon: float,
    oracle: PureMeanOracle,
    rng: np.random.Generator,
    alpha: float = WEAK_ALPHA,
    rescale: float = WEAK_RESCALE,
) -> np.ndarray:
    """
    One private round: A with I ⪯ AΣAᵀ ⪯ 0.99κI when I ⪯ Σ ⪯ κI.

    Estimates Σ to Frobenius error ακ, projects onto the span Π of
    eigenvectors at or above κ/2 and returns c·(0.9Π + (I − Π)).

    Raises:
        ValidationError: If κ < 20; skip preconditioning instead
    """
    if kappa < WEAK_MIN_KAPPA:
        raise ValidationError(
            f"Weak preconditioning needs kappa >= {WEAK_MIN_KAPPA:g}, got {kappa:.6g}; skip preconditioning instead",
            "kappa",
        )

    estimate = matrix_mean(data, kappa, alpha, beta, epsilon, oracle, rng)
    selected = estimate.eigenvalues >= kappa / 2.0 - THRESHOLD_TOL
    basis = estimate.eigenvectors[:, selected]
    projection = basis @ basis.T

    identity = np.eye(data.dim)
    matrix = rescale * (WEAK_SHRINK * projection + (identity - projection))
    logger.debug(f"Weak round at κ={kappa:.4g}: shrinking {int(selected.sum())} of {data.dim} directions")
    return (matrix + matrix.T) / 2.0


def recursive_precondition(
    data: Dataset,
    kappa: float,
    epsilon: float,
    oracle: PureMeanOracle,
    rng: np.random.Generator,
    alpha: float = WEAK_ALPHA,
    rescale: float = WEAK_RESCALE,
    ledger: Optional[BudgetLedger] = None,
) -> PreconditionerChain:
    """
    Chain weak rounds on disjoint partitions until κ drops to 20.

    Round j sees its partition through the product of earlier rounds and runs
    at κⱼ with failure rate 1/(1000L); κ_{j+1} = 0.99κⱼ. Partitions are
    disjoint, so the whole chain costs ε once.

    Raises:
        ValidationError: If there are fewer than L·d points
    """
    if kappa < 1:
        raise ValidationError(f"kappa must be at least 1, got {kappa}", "kappa")

    chain = PreconditionerChain.identity(data.dim, kappa)
    rounds = round_count(kappa)
    if rounds == 0:
        logger.info(f"κ={kappa:.4g} is within {RECURSION_TARGET_KAPPA:g}; no preconditioning")
        return chain

    required = rounds * data.dim
    if data.n < required:
        raise ValidationError(
            f"Recursive preconditioning at κ={kappa:.6g} runs {rounds} rounds and needs "
            f"n >= {required}, got {data.n}",
            "n",
        )

    beta = 1.0 / (ROUND_FAILURE_SCALE * rounds)
    streams = rng.spawn(rounds)
    current = float(kappa)

    for partition, stream in zip(data.partition(rounds), streams):
        if current <= RECURSION_TARGET_KAPPA:
            break
        transformed = chain.apply(partition)
        matrix = weak_precondition(transformed, current, beta, epsilon, oracle, stream, alpha=alpha, rescale=rescale)
        chain.append(matrix, current)
        current *= RECURSION_DECAY

    if ledger is not None:
        ledger.spend_parallel("recursive_precondition", PrivacyBudget(epsilon), rounds)
    logger.info(f"Preconditioned in {len(chain.rounds)} rounds: κ {kappa:.4g} -> {chain.final_kappa:.4g}")
    return chain
