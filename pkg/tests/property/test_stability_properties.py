"""
Property-based tests for stability and the outlier-count score on
neighbouring datasets.
"""

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from dpgauss.approxdp.stability import PotentialTable, score, stability
from dpgauss.core.constants import SCORE_SENSITIVITY
from dpgauss.core.models import Dataset
from dpgauss.core.sampling import make_rng

NEIGHBOUR_N = 16
NEIGHBOUR_C = 3.0
SOLVER_SLACK = 0.5


def spiked_points(seed, n):
    points = make_rng(seed).standard_normal((n, 2))
    points[: max(1, n // 10)] += 12.0
    return points


def neighbours(points, seed):
    """Every single-point replacement with a far point and with a fresh draw"""
    rng = make_rng(seed)
    for index in range(points.shape[0]):
        for replacement in (np.array([20.0, 0.0]), rng.standard_normal(2)):
            other = points.copy()
            other[index] = replacement
            yield index, Dataset(other)


def all_scores(data, L):
    table = PotentialTable(data, NEIGHBOUR_C)
    return [score(data, tau, L, NEIGHBOUR_C, table=table) for tau in range(data.n)]


def assert_score_sensitivity(seed):
    points = make_rng(seed).standard_normal((NEIGHBOUR_N, 2))
    base = all_scores(Dataset(points), L=1)
    for index, other in neighbours(points, seed + 1):
        moved = all_scores(other, L=1)
        for tau, (left, right) in enumerate(zip(base, moved)):
            assert abs(left - right) <= SCORE_SENSITIVITY + SOLVER_SLACK, (index, tau)


@pytest.mark.property
@pytest.mark.timeout(300)
@settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(
    seed=st.integers(min_value=0, max_value=2**16),
    n=st.integers(min_value=12, max_value=30),
)
def test_stability_grows_with_gamma(seed, n):
    """Property: Stab(τ, γ) is nondecreasing in γ while both endpoints are feasible"""
    data = Dataset(spiked_points(seed, n))
    table = PotentialTable(data, 2.0)
    for tau in range(n // 2):
        previous = None
        for gamma in range(0, min(tau, n - 1 - tau) + 1):
            if not (table.feasible(tau - gamma) and table.feasible(tau + gamma)):
                break
            value = stability(data, tau, gamma, 2.0, table=table)
            assert value >= -1e-12
            if previous is not None:
                assert value >= previous - 1e-12
            previous = value


@pytest.mark.property
@pytest.mark.timeout(300)
def test_score_sensitivity_on_one_sample():
    """Property: replacing one of 16 points moves every score by at most 6"""
    assert_score_sensitivity(seed=3)


@pytest.mark.property
@pytest.mark.slow
@pytest.mark.timeout(1800)
@pytest.mark.parametrize("seed", range(20))
def test_score_sensitivity_exhaustive(seed):
    """Property: the sensitivity bound over every neighbour of twenty base samples"""
    assert_score_sensitivity(seed)


@pytest.mark.property
@pytest.mark.slow
@pytest.mark.timeout(600)
@pytest.mark.parametrize("seed", range(5))
def test_stability_telescopes_across_neighbours(seed):
    """Property: Stab_{Y′}(τ, γ − 1) ≤ Stab_Y(τ, γ) + 2/n + 2/(n log n) on feasible endpoints"""
    points = make_rng(seed).standard_normal((NEIGHBOUR_N, 2))
    data = Dataset(points)
    n = NEIGHBOUR_N
    slack = 2.0 / n + 2.0 / (n * math.log(n)) + SOLVER_SLACK / n
    table = PotentialTable(data, NEIGHBOUR_C)

    for _, other in neighbours(points, seed + 1):
        other_table = PotentialTable(other, NEIGHBOUR_C)
        for tau in range(1, n // 2):
            for gamma in range(1, min(tau, n - 1 - tau) + 1):
                ends = (tau - gamma, tau + gamma)
                other_ends = (tau - gamma + 1, tau + gamma - 1)
                if not all(table.feasible(k) for k in ends):
                    continue
                if not all(other_table.feasible(k) for k in other_ends):
                    continue
                moved = stability(other, tau, gamma - 1, NEIGHBOUR_C, table=other_table)
                assert moved <= stability(data, tau, gamma, NEIGHBOUR_C, table=table) + slack
