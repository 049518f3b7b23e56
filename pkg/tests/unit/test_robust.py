"""Unit tests for potential stability, outlier-rate selection, witness checking and the robust pipelines"""

import math

import numpy as np
import pytest

from dpgauss.approxdp.estimators import (RobustSettings, max_sample_count,
                                         robust_covariance, robust_mean)
from dpgauss.approxdp.solver import WitnessKind, solve_mean_witness
from dpgauss.approxdp.stability import (PotentialTable, minimal_sample_size,
                                        score, select_outlier_rate,
                                        selection_rounds, stability)
from dpgauss.approxdp.witness_check import (check_sensitivity,
                                            run_witness_check, witness_check)
from dpgauss.core.exceptions import InfeasibleProgramError, ValidationError
from dpgauss.core.models import REJECT, Dataset, GaussianParams, PsdMatrix
from dpgauss.core.sampling import make_rng
from dpgauss.mechanisms.budget import BudgetLedger, PrivacyBudget


@pytest.fixture
def wide_data():
    """Points whose covariance is far above C = 1"""
    return Dataset(10.0 * make_rng(0).standard_normal((100, 2)))


class TestPotentialTable:
    """Test memoized potentials"""

    def test_solved_in_order(self, gaussian_data):
        """Test asking for count k fills the table up to k"""
        table = PotentialTable(gaussian_data, 10.0)
        table.solution(5)
        assert len(table) == 6

    def test_constant_on_clean_data(self, gaussian_data):
        """Test uniform weights are optimal at every rate"""
        table = PotentialTable(gaussian_data, 10.0)
        assert table.potential(0) == table.potential(30)

    def test_range_check(self, gaussian_data):
        """Test counts at or above n are refused"""
        with pytest.raises(ValidationError):
            PotentialTable(gaussian_data, 10.0).solution(gaussian_data.n)

    def test_table_for_other_dataset(self, gaussian_data, wide_data):
        """Test a table cannot be reused across datasets"""
        with pytest.raises(ValidationError):
            stability(wide_data, 2, 1, 10.0, table=PotentialTable(gaussian_data, 10.0))


class TestStabilityAndScore:
    """Test Stab(τ, γ) and the score"""

    def test_stability_zero_on_clean_data(self, gaussian_data):
        """Test flat potentials give zero stability"""
        assert stability(gaussian_data, 10, 5, 10.0) == 0.0

    def test_stability_range(self, gaussian_data):
        """Test γ must not exceed τ"""
        with pytest.raises(ValidationError):
            stability(gaussian_data, 2, 3, 10.0)

    def test_stability_names_infeasible_endpoint(self, wide_data):
        """Test the lower endpoint is reported"""
        with pytest.raises(InfeasibleProgramError) as info:
            stability(wide_data, 1, 1, 1.0)
        assert info.value.endpoint == "lower"

    def test_score_on_clean_data(self, gaussian_data):
        """Test score = min(τ, n − 1 − τ, 20L) when every program is feasible"""
        table = PotentialTable(gaussian_data, 10.0)
        assert score(gaussian_data, 7, 3, 10.0, table=table) == 7.0
        assert score(gaussian_data, 100, 2, 10.0, table=table) == 40.0

    def test_score_zero_when_infeasible(self, wide_data):
        """Test an infeasible program scores zero"""
        assert score(wide_data, 0, 3, 1.0) == 0.0

    def test_score_range(self, gaussian_data):
        """Test τ outside [0, n) is refused"""
        with pytest.raises(ValidationError):
            score(gaussian_data, gaussian_data.n, 3, 10.0)


class TestSelection:
    """Test private choice of the outlier count"""

    def test_selection_rounds(self):
        """Test L = ⌈(c_L/ε)·log(n/(βδ))⌉"""
        budget = PrivacyBudget(1, 1e-5)
        assert selection_rounds(1000, budget, 0.1, 4.0) == math.ceil(4.0 * math.log(1000 / (0.1 * 1e-5)))

    def test_minimal_sample_size_is_tight(self):
        """Test ⌊ηn⌋ ≥ L holds at the returned n and fails just below it"""
        budget = PrivacyBudget(1, 1e-5)
        n = minimal_sample_size(0.1, budget, 0.1, 1.0)
        assert math.floor(0.1 * n + 1e-9) >= selection_rounds(n, budget, 0.1, 1.0)
        assert math.floor(0.1 * (n - 1) + 1e-9) < selection_rounds(n - 1, budget, 0.1, 1.0)

    def test_minimal_sample_size_needs_eta(self):
        """Test η = 0 has no minimal size"""
        with pytest.raises(ValidationError):
            minimal_sample_size(0.0, PrivacyBudget(1, 1e-5), 0.1)

    def test_too_few_points_names_minimum(self, gaussian_data):
        """Test the error message names the minimal n"""
        with pytest.raises(ValidationError) as info:
            select_outlier_rate(gaussian_data, 0.01, PrivacyBudget(1, 1e-5), 0.1, 10.0, make_rng(0))
        assert "Use at least n =" in str(info.value)

    def test_selects_stable_count(self, gaussian_data, robust_budget):
        """Test an accepted τ lies in range and scores at least L"""
        select_budget = robust_budget.split(3)[0]
        ledger = BudgetLedger()
        outcome = select_outlier_rate(gaussian_data, 0.1, select_budget, 0.1, 10.0, make_rng(0),
                                      c_l=1.0, ledger=ledger)
        assert not outcome.rejected
        assert 0 <= outcome.tau <= 200
        assert outcome.score >= outcome.L
        assert outcome.stability_at_tau == 0.0
        assert ledger.matches(select_budget)

    def test_rejects_under_heavy_gate(self, gaussian_data):
        """Test a tiny δ pushes the gate below every score"""
        budget = PrivacyBudget(1, 1e-12)
        outcome = select_outlier_rate(gaussian_data, 0.2, budget, 0.1, 10.0, make_rng(0), c_l=0.05)
        assert outcome.rejected
        assert outcome.to_dict()["tau"] == "REJECT"


class TestWitnessCheck:
    """Test the private re-certification"""

    def test_sensitivity(self):
        """Test Δ = c_Δ·C·k·√(L/n)"""
        assert check_sensitivity(10.0, 4, 100, 2, 1.0) == pytest.approx(4.0)

    def test_passes_on_clean_data(self, gaussian_data):
        """Test C′ lies in (0, C] and the whole budget is charged"""
        solution = solve_mean_witness(gaussian_data, 0.1, 10.0)
        budget = PrivacyBudget(0.9, 0.1)
        ledger = BudgetLedger()
        value = witness_check(gaussian_data, solution, 10.0, 14, budget, 0.1, make_rng(0),
                              c_delta=0.1, ledger=ledger)
        assert value is not REJECT
        assert 0.0 < value <= 10.0
        assert ledger.matches(budget)

    def test_covariance_kind(self, gaussian_data):
        """Test the covariance pipeline checks hypercontractivity"""
        from dpgauss.approxdp.solver import solve_cov_witness

        solution = solve_cov_witness(gaussian_data, 0.1, 20.0)
        value, certificate = run_witness_check(gaussian_data, solution, 20.0, 14, PrivacyBudget(0.9, 0.1), 0.1,
                                               make_rng(0), kind=WitnessKind.COVARIANCE, c_delta=0.1)
        assert value is not REJECT
        assert certificate.threshold == pytest.approx(value)

    def test_rejects_when_noise_swamps_bound(self, gaussian_data):
        """Test a huge sensitivity drives C′ below zero"""
        solution = solve_mean_witness(gaussian_data, 0.1, 10.0)
        value, certificate = run_witness_check(gaussian_data, solution, 10.0, 14, PrivacyBudget(0.9, 0.1), 0.1,
                                               make_rng(0), c_delta=1000.0)
        assert value is REJECT
        assert certificate is None

    def test_needs_feasible_solution(self, wide_data):
        """Test infeasible witnesses are refused"""
        solution = solve_mean_witness(wide_data, 0.0, 1.0)
        with pytest.raises(ValidationError):
            witness_check(wide_data, solution, 1.0, 3, PrivacyBudget(1, 1e-5), 0.1, make_rng(0))


class TestRobustEstimators:
    """Test the approximate-DP mean and covariance pipelines"""

    def test_settings_validation(self):
        """Test constants must be positive and β ∈ (0, 1)"""
        with pytest.raises(ValidationError):
            RobustSettings(c_l=0.0)
        with pytest.raises(ValidationError):
            RobustSettings(beta=1.0)

    def test_mean_needs_delta(self, gaussian_data):
        """Test pure budgets are refused"""
        with pytest.raises(ValidationError):
            robust_mean(gaussian_data, 0.1, PrivacyBudget(1), 10.0, make_rng(0))

    def test_robust_mean(self, gaussian_data, robust_budget, robust_settings):
        """Test the full pipeline spends exactly the budget and lands near the mean"""
        truth = GaussianParams(np.zeros(2), PsdMatrix.identity(2))
        report = robust_mean(gaussian_data, 0.1, robust_budget, 10.0, make_rng(0),
                             settings=robust_settings, truth=truth)
        assert not report.halted
        assert report.ledger.matches(robust_budget)
        assert [entry.mechanism for entry in report.ledger.entries] == [
            "exponential_mechanism", "truncated_laplace_gate", "witness_check", "gaussian_mechanism",
        ]
        assert report.errors["mean_l2"] < 0.2
        assert 0.0 < report.artifacts["witness_check"]["C_prime"] <= 10.0

    def test_halt_keeps_only_spent_budget(self, gaussian_data):
        """Test a selection REJECT halts with only the selection third charged"""
        budget = PrivacyBudget(1, 1e-12)
        settings = RobustSettings(c_l=0.05)
        report = robust_mean(gaussian_data, 0.2, budget, 10.0, make_rng(0), settings=settings)
        assert report.halted
        assert report.halt_stage == "selection"
        assert report.mean is None
        assert report.ledger.matches(budget.split(3)[0])

    def test_max_sample_count(self, robust_budget, robust_settings):
        """Test k_max grows as the witness sensitivity shrinks"""
        loose = max_sample_count(2000, robust_budget, 20.0, robust_settings)
        tight = max_sample_count(2000, robust_budget, 40.0, robust_settings)
        assert loose > tight >= 1

    def test_covariance_k_above_max(self, gaussian_data, robust_budget, robust_settings):
        """Test an inadmissible k names the largest admissible one"""
        k_max = max_sample_count(gaussian_data.n, robust_budget, 20.0, robust_settings)
        with pytest.raises(ValidationError) as info:
            robust_covariance(gaussian_data, 0.1, robust_budget, 20.0, k_max + 1, make_rng(0),
                              settings=robust_settings)
        assert str(k_max) in str(info.value)

    def test_robust_covariance(self, gaussian_data, robust_budget, robust_settings):
        """Test the covariance pipeline releases through Gaussian sampling"""
        truth = GaussianParams(np.zeros(2), PsdMatrix.identity(2))
        report = robust_covariance(gaussian_data, 0.1, robust_budget, 20.0, 5000, make_rng(0),
                                   settings=robust_settings, truth=truth)
        assert not report.halted
        assert report.ledger.matches(robust_budget)
        assert report.artifacts["k"] == 5000
        assert report.errors["covariance_rel_frobenius"] < 0.3

    def test_centering_by_pairs_halves_n(self, gaussian_data, robust_budget, robust_settings):
        """Test pair differencing runs on n/2 points"""
        report = robust_covariance(gaussian_data, 0.1, robust_budget, 20.0, 1000, make_rng(0),
                                   settings=robust_settings, center_by_pairs=True)
        assert report.artifacts["k_max"] == max_sample_count(gaussian_data.n // 2, robust_budget, 20.0,
                                                             robust_settings)
