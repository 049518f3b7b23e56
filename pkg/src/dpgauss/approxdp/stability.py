"""
Potential stability, the score function and private outlier-rate selection.

Optimal potentials are tabulated at rates k/n for k = 0, 1, 2, ... and each
rate is warm-started from the previous feasible solution. Because the
feasible set only grows with the rate, the tabulated potential is
non-increasing in k and stability is nondecreasing in γ.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..core.constants import (C_L, DEFAULT_BETA, SCORE_CAP_FACTOR,
                              SCORE_SENSITIVITY, SOLVER_TOL)
from ..core.exceptions import InfeasibleProgramError, ValidationError
from ..core.models import REJECT, Dataset, Rejected
from ..mechanisms.budget import BudgetLedger, PrivacyBudget
from ..mechanisms.selection import dp_select
from .solver import WitnessKind, WitnessSolution, make_constraint, solve_witness

logger = logging.getLogger(__name__)


class PotentialTable:
    """
    Memoized optimal potentials Pot_{k/n}(Y), solved in increasing k.

    Single-writer: entries are appended in order and never rewritten.
    """

    def __init__(
        self,
        data: Dataset,
        C: float,
        tol: float = SOLVER_TOL,
        kind: WitnessKind = WitnessKind.MEAN,
    ):
        self.data = data
        self.C = C
        self.tol = tol
        self.kind = kind
        self._constraint = make_constraint(kind, data)
        self._solutions: list[WitnessSolution] = []

    @property
    def n(self) -> int:
        return self.data.n

    def __len__(self) -> int:
        return len(self._solutions)

    def solution(self, count: int, warm: bool = True) -> WitnessSolution:
        """Solution at rate count/n"""
        if not 0 <= count < self.n:
            raise ValidationError(f"Rate index must lie in [0, {self.n}), got {count}", "count")
        while len(self._solutions) <= count:
            k = len(self._solutions)
            previous = self._solutions[-1] if self._solutions else None
            start = previous.log_weights if warm and previous is not None and previous.feasible else None
            self._solutions.append(solve_witness(self._constraint, k / self.n, self.C, self.tol, start))
        return self._solutions[count]

    def potential(self, count: int) -> float:
        return self.solution(count).potential

    def feasible(self, count: int) -> bool:
        return self.solution(count).feasible

    def cold_solution(self, count: int) -> WitnessSolution:
        """Solve at rate count/n from uniform weights, bypassing the table"""
        return solve_witness(self._constraint, count / self.n, self.C, self.tol)


def _table(data: Dataset, C: float, tol: float, kind: WitnessKind, table: Optional[PotentialTable]) -> PotentialTable:
    if table is None:
        return PotentialTable(data, C, tol, kind)
    if table.data is not data:
        raise ValidationError("Potential table was built for a different dataset", "table")
    return table


def stability(
    data: Dataset,
    tau: int,
    gamma: int,
    C: float,
    tol: float = SOLVER_TOL,
    kind: WitnessKind = WitnessKind.MEAN,
    table: Optional[PotentialTable] = None,
) -> float:
    """
    Stab(τ, γ) = Pot_{(τ−γ)/n} − Pot_{(τ+γ)/n}.

    Raises:
        ValidationError: Unless 0 ≤ γ ≤ τ and τ + γ < n
        InfeasibleProgramError: Naming the endpoint ("lower" or "upper") that is infeasible
    """
    table = _table(data, C, tol, kind, table)
    if gamma < 0 or gamma > tau or tau + gamma >= data.n:
        raise ValidationError(f"Need 0 <= gamma <= tau and tau + gamma < n; got tau={tau}, gamma={gamma}", "gamma")
    if not table.feasible(tau - gamma):
        raise InfeasibleProgramError(f"Program at rate {(tau - gamma)}/{data.n} is infeasible", "lower")
    if not table.feasible(tau + gamma):
        raise InfeasibleProgramError(f"Program at rate {(tau + gamma)}/{data.n} is infeasible", "upper")
    return table.potential(tau - gamma) - table.potential(tau + gamma)


def score(
    data: Dataset,
    tau: int,
    L: int,
    C: float,
    tol: float = SOLVER_TOL,
    kind: WitnessKind = WitnessKind.MEAN,
    table: Optional[PotentialTable] = None,
) -> float:
    """
    0 if the program at τ/n is infeasible, otherwise
    max over γ with a feasible left endpoint of min{γ, 20L − n·Stab(τ, γ)}.

    The scan over γ stops once γ reaches 20L − n·Stab, after which the
    objective cannot grow.
    """
    table = _table(data, C, tol, kind, table)
    n = data.n
    if not 0 <= tau < n:
        raise ValidationError(f"tau must lie in [0, {n}), got {tau}", "tau")
    if not table.feasible(tau):
        return 0.0

    cap = SCORE_CAP_FACTOR * L
    best = 0.0
    for gamma in range(0, min(tau, n - 1 - tau) + 1):
        if not table.feasible(tau - gamma):
            break
        budget = cap - n * (table.potential(tau - gamma) - table.potential(tau + gamma))
        best = max(best, min(float(gamma), budget))
        if gamma >= budget:
            break
    return best


def selection_rounds(n: int, budget: PrivacyBudget, beta: float, c_l: float = C_L) -> int:
    """L = ⌈(c_L/ε)·log(n/(βδ))⌉"""
    return int(math.ceil(c_l / budget.epsilon * math.log(n / (beta * budget.delta))))


def minimal_sample_size(eta: float, budget: PrivacyBudget, beta: float, c_l: float = C_L) -> int:
    """Smallest n with ⌊ηn⌋ ≥ L(n)"""
    if eta <= 0:
        raise ValidationError("Outlier-rate selection needs eta > 0", "eta")

    def enough(n: int) -> bool:
        return math.floor(eta * n + 1e-9) >= selection_rounds(n, budget, beta, c_l)

    high = 2
    while not enough(high):
        high *= 2
    low = high // 2
    while low + 1 < high:
        mid = (low + high) // 2
        if enough(mid):
            high = mid
        else:
            low = mid
    return high


@dataclass(frozen=True)
class SelectionOutcome:
    """Selected outlier count τ (or REJECT) with the stability it certifies"""

    tau: Union[int, Rejected]
    stability_at_tau: Optional[float]
    L: int
    score: Optional[float] = None

    @property
    def rejected(self) -> bool:
        return self.tau is REJECT

    def to_dict(self) -> dict:
        return {
            "tau": "REJECT" if self.rejected else self.tau,
            "stability_at_tau": self.stability_at_tau,
            "L": self.L,
            "score": self.score,
        }


def select_outlier_rate(
    data: Dataset,
    eta: float,
    budget: PrivacyBudget,
    beta: float,
    C: float,
    rng: np.random.Generator,
    tol: float = SOLVER_TOL,
    kind: WitnessKind = WitnessKind.MEAN,
    c_l: float = C_L,
    table: Optional[PotentialTable] = None,
    ledger: Optional[BudgetLedger] = None,
) -> SelectionOutcome:
    """
    (ε, δ)-DP choice of an outlier count τ ∈ {0, …, ⌊ηn⌋} with a stable window.

    Runs dp_select over the counts with the score above, sensitivity 6 and
    threshold L. A returned τ satisfies Stab(τ, L/2) < 20L/n.

    Raises:
        ValidationError: If ⌊ηn⌋ < L; the message names the minimal n
    """
    beta = DEFAULT_BETA if beta is None else beta
    L = selection_rounds(data.n, budget, beta, c_l)
    top = int(math.floor(eta * data.n + 1e-9))
    if top < L:
        required = minimal_sample_size(eta, budget, beta, c_l)
        raise ValidationError(
            f"Outlier-rate selection needs floor(eta·n) >= L = {L}; got {top}. "
            f"Use at least n = {required} points at eta = {eta}",
            "n",
        )

    table = _table(data, C, tol, kind, table)
    scores: dict[int, float] = {}

    def candidate_score(tau: int, dataset: Dataset) -> float:
        scores[tau] = score(dataset, tau, L, C, tol, kind, table)
        return scores[tau]

    tau = dp_select(list(range(top + 1)), candidate_score, SCORE_SENSITIVITY, L, budget, data, rng, ledger)
    if tau is REJECT:
        logger.warning(f"Outlier-rate selection rejected (L={L}, candidates 0..{top})")
        return SelectionOutcome(REJECT, None, L)

    gamma = min(L // 2, tau, data.n - 1 - tau)
    try:
        stab = stability(data, tau, gamma, C, tol, kind, table)
    except InfeasibleProgramError:
        stab = None
    logger.info(f"Selected outlier count τ={tau} of {top} (score {scores[tau]:.4g}, L={L})")
    return SelectionOutcome(tau, stab, L, scores[tau])
