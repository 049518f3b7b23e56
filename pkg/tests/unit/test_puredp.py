"""Unit tests for oracles, matrix mean, preconditioning and the pure-DP estimators"""

from fractions import Fraction

import numpy as np
import pytest

from dpgauss.core.exceptions import ValidationError
from dpgauss.core.linalg import random_psd, rel_frobenius
from dpgauss.core.models import Dataset, GaussianParams, PsdMatrix
from dpgauss.core.sampling import (empirical_covariance, make_rng,
                                   moment_matched_sample, sample_gaussian)
from dpgauss.mechanisms.budget import BudgetLedger, PrivacyBudget
from dpgauss.puredp.estimators import (estimate_covariance, estimate_gaussian,
                                       estimate_mean)
from dpgauss.puredp.matrix_mean import matrix_mean, outer_product_samples
from dpgauss.puredp.oracles import (ClipLaplaceMean, InjectedErrorOracle,
                                    NonPrivateTrimmedMean, available_oracles,
                                    make_oracle)
from dpgauss.puredp.preconditioning import (recursive_precondition,
                                            round_count, weak_precondition)


@pytest.fixture
def exact_oracle():
    """Empirical mean with no injected error"""
    return InjectedErrorOracle(scale=0.0)


class TestOracles:
    """Test the shipped mean oracles"""

    def test_registry(self):
        """Test all three oracles are registered"""
        assert available_oracles() == ["clip_laplace", "injected", "trimmed"]
        assert isinstance(make_oracle("trimmed"), NonPrivateTrimmedMean)
        with pytest.raises(ValidationError):
            make_oracle("median")

    def test_injected_error_has_exact_norm(self):
        """Test the perturbation has ℓ₂ norm α"""
        data = Dataset(make_rng(0).standard_normal((100, 3)))
        oracle = InjectedErrorOracle(direction=np.array([0.0, 3.0, 4.0]))
        estimate = oracle.estimate(data, 1.0, 0.2, 0.1, 1.0, make_rng(1))
        assert np.linalg.norm(estimate - data.mean()) == pytest.approx(0.2)

    def test_injected_direction_dimension(self):
        """Test a wrong-sized direction is refused"""
        data = Dataset(np.zeros((4, 2)))
        with pytest.raises(ValidationError):
            InjectedErrorOracle(direction=np.ones(3)).estimate(data, 1.0, 0.1, 0.1, 1.0, make_rng(0))

    def test_trimmed_mean_ignores_outliers(self):
        """Test a few extreme points barely move the trimmed mean"""
        points = np.vstack([np.zeros((95, 1)), np.full((5, 1), 1e6)])
        estimate = NonPrivateTrimmedMean().estimate(Dataset(points), 1.0, 0.1, 0.1, 1.0, make_rng(0))
        assert abs(float(estimate[0])) < 1e-9

    def test_clip_laplace_is_noisy_but_bounded(self):
        """Test the clipped answer lands near the mean for large n"""
        data = Dataset(make_rng(2).standard_normal((200000, 2)))
        oracle = ClipLaplaceMean()
        estimate = oracle.estimate(data, 1.0, 0.1, 0.1, 1.0, make_rng(3))
        assert np.linalg.norm(estimate) < 0.5
        assert oracle.clip_radius(1.0, 4) == pytest.approx(21.0)


class TestMatrixMean:
    """Test covariance as mean of outer products"""

    def test_outer_product_scaling(self):
        """Test vec(xxᵀ)/(√3κ)"""
        samples = outer_product_samples(Dataset(np.array([[1.0, 2.0]])), 1.0)
        assert np.allclose(samples.points * np.sqrt(3.0), [[1.0, 2.0, 2.0, 4.0]])

    def test_exact_oracle_recovers_second_moment(self, exact_oracle):
        """Test an exact mean gives the empirical second moment"""
        data = Dataset(make_rng(0).standard_normal((500, 3)))
        estimate = matrix_mean(data, 5.0, 0.1, 0.1, 1.0, exact_oracle, make_rng(1))
        assert np.allclose(estimate.entries, empirical_covariance(data).entries)

    def test_error_is_scaled_by_kappa(self):
        """Test oracle error α/√3 becomes Frobenius error ακ"""
        data = moment_matched_sample(PsdMatrix.identity(2))
        oracle = InjectedErrorOracle(direction=np.array([1.0, 0.0, 0.0, 0.0]))
        estimate = matrix_mean(data, 4.0, 0.1, 0.1, 1.0, oracle, make_rng(0))
        assert np.linalg.norm(estimate.entries - np.eye(2), "fro") == pytest.approx(0.4)

    def test_rejects_small_kappa(self, exact_oracle):
        """Test κ < 1"""
        with pytest.raises(ValidationError):
            matrix_mean(Dataset(np.ones((3, 1))), 0.5, 0.1, 0.1, 1.0, exact_oracle, make_rng(0))


class TestPreconditioning:
    """Test weak and recursive preconditioning with exact moments"""

    def test_round_count(self):
        """Test L = ⌈log(κ/20)/log(100/99)⌉"""
        assert round_count(20.0) == 0
        assert round_count(5.0) == 0
        assert round_count(20.1) == 1
        assert round_count(100.0) == int(np.ceil(np.log(5.0) / np.log(1.0 / 0.99)))

    def test_weak_round_contracts_condition_number(self, exact_oracle):
        """Test I ⪯ AΣAᵀ ⪯ 0.99κI for one round"""
        kappa = 40.0
        sigma = random_psd(4, kappa, make_rng(5))
        matrix = weak_precondition(moment_matched_sample(sigma), kappa, 0.01, 1.0, exact_oracle, make_rng(0))
        assert np.allclose(matrix, matrix.T)
        conditioned = PsdMatrix(matrix @ sigma.entries @ matrix.T)
        assert conditioned.min_eigenvalue >= 1.0 - 1e-9
        assert conditioned.max_eigenvalue <= 0.99 * kappa + 1e-9

    def test_weak_round_refuses_small_kappa(self, exact_oracle):
        """Test κ < 20 should skip preconditioning"""
        with pytest.raises(ValidationError):
            weak_precondition(moment_matched_sample(PsdMatrix.identity(2)), 10.0, 0.01, 1.0, exact_oracle,
                              make_rng(0))

    def test_recursive_chain_reaches_target(self, exact_oracle):
        """Test the product preconditioner brings κ down to the final bound"""
        kappa = 30.0
        sigma = random_psd(3, kappa, make_rng(6))
        rounds = round_count(kappa)
        data = moment_matched_sample(sigma, repeats=rounds)
        ledger = BudgetLedger()
        chain = recursive_precondition(data, kappa, 1.0, exact_oracle, make_rng(0), ledger=ledger)

        assert len(chain.rounds) == rounds
        conditioned = sigma.congruence(chain.product)
        assert conditioned.min_eigenvalue >= 1.0 - 1e-9
        assert conditioned.max_eigenvalue <= chain.final_kappa + 1e-9
        assert chain.final_kappa <= 20.0
        assert ledger.matches(PrivacyBudget(1))

    def test_recursive_needs_enough_points(self, exact_oracle):
        """Test n < L·d names the requirement"""
        data = moment_matched_sample(PsdMatrix.identity(3))
        with pytest.raises(ValidationError) as info:
            recursive_precondition(data, 100.0, 1.0, exact_oracle, make_rng(0))
        assert "needs n >=" in str(info.value)

    def test_no_rounds_below_target(self, exact_oracle):
        """Test κ ≤ 20 returns the identity chain"""
        chain = recursive_precondition(Dataset(np.ones((2, 2))), 10.0, 1.0, exact_oracle, make_rng(0))
        assert chain.is_identity
        assert np.array_equal(chain.product, np.eye(2))

    def test_undo_inverts_apply(self, exact_oracle):
        """Test A⁻¹ (A M Aᵀ) A⁻ᵀ = M and A⁻¹ A v = v"""
        sigma = random_psd(3, 30.0, make_rng(8))
        data = moment_matched_sample(sigma, repeats=round_count(30.0))
        chain = recursive_precondition(data, 30.0, 1.0, exact_oracle, make_rng(0))
        moved = chain.product @ sigma.entries @ chain.product.T
        assert np.allclose(chain.undo_covariance(moved), sigma.entries)
        vector = np.array([1.0, -2.0, 0.5])
        assert np.allclose(chain.undo_mean(chain.product @ vector), vector)


class TestPureEstimators:
    """Test the covariance, mean and Gaussian pipelines"""

    def test_covariance_without_preconditioning(self, gaussian_data, exact_oracle):
        """Test κ ≤ 20 spends the whole budget on matrix_mean"""
        report = estimate_covariance(gaussian_data, 4.0, 0.5, 1.0, exact_oracle, make_rng(0))
        assert np.allclose(report.covariance.entries, empirical_covariance(gaussian_data).entries)
        assert len(report.ledger) == 1
        assert report.ledger.matches(PrivacyBudget(1))
        assert report.artifacts["rounds"] == 0

    def test_covariance_with_preconditioning(self, exact_oracle):
        """Test the estimate maps back to the second half's moment"""
        params = GaussianParams(np.zeros(2), PsdMatrix.diagonal([1.0, 25.0]))
        data = sample_gaussian(params, 2000, make_rng(4))
        report = estimate_covariance(data, 25.0, 0.5, 1.0, exact_oracle, make_rng(0), truth=params)

        second = data.subset(1000, 2000)
        assert np.allclose(report.covariance.entries, empirical_covariance(second).entries)
        assert [entry.epsilon for entry in report.ledger.entries] == [Fraction(1, 2), Fraction(1, 2)]
        assert report.ledger.matches(PrivacyBudget(1))
        assert report.errors["covariance_rel_frobenius"] < 0.5

    def test_covariance_trimmed_oracle_accuracy(self, gaussian_data):
        """Test the default oracle lands within α on well-conditioned data"""
        truth = GaussianParams(np.zeros(2), PsdMatrix.identity(2))
        report = estimate_covariance(gaussian_data, 1.0, 0.5, 1.0, make_oracle("trimmed"), make_rng(0), truth=truth)
        assert report.errors["covariance_rel_frobenius"] < 0.5

    def test_mean_with_injected_error(self, gaussian_data):
        """Test the reported mean is off by exactly α when no preconditioning runs"""
        oracle = InjectedErrorOracle(direction=np.array([1.0, 0.0]))
        report = estimate_mean(gaussian_data, 1.0, 10.0, 0.3, 1.0, oracle, make_rng(0))
        assert np.linalg.norm(report.mean - gaussian_data.mean()) == pytest.approx(0.3)
        assert report.ledger.matches(PrivacyBudget(1))

    def test_mean_with_preconditioning_uses_third_block(self, exact_oracle):
        """Test points 2m+1..3m feed the oracle"""
        params = GaussianParams(np.array([1.0, 2.0]), PsdMatrix.diagonal([1.0, 30.0]))
        data = sample_gaussian(params, 3001, make_rng(9))
        report = estimate_mean(data, 30.0, 10.0, 0.5, 1.0, exact_oracle, make_rng(0), truth=params)
        assert np.allclose(report.mean, data.subset(2000, 3000).mean())
        assert len(report.ledger) == 2
        assert report.ledger.matches(PrivacyBudget(1))
        assert "mean_mahalanobis" in report.errors

    def test_gaussian_splits_budget(self, gaussian_data, exact_oracle):
        """Test mean and covariance halves total ε"""
        truth = GaussianParams(np.zeros(2), PsdMatrix.identity(2))
        report = estimate_gaussian(gaussian_data, 1.0, 10.0, 0.5, 2.0, exact_oracle, make_rng(0), truth=truth)
        assert report.ledger.matches(PrivacyBudget(2))
        assert [entry.mechanism for entry in report.ledger.entries] == ["mean_oracle", "matrix_mean"]
        assert report.failure_probability == pytest.approx(0.2)
        low, high = report.tv_bracket
        assert 0.0 <= low <= high <= 1.0

    def test_robust_gaussian_target(self, gaussian_data, exact_oracle):
        """Test the robust variant reports α + 5√η"""
        report = estimate_gaussian(gaussian_data, 1.0, 10.0, 0.5, 1.0, exact_oracle, make_rng(0),
                                   robust=True, eta=0.04)
        assert report.artifacts["target_error"] == pytest.approx(0.5 + 5.0 * 0.2)

    def test_input_validation(self, gaussian_data, exact_oracle):
        """Test κ, α and ε checks"""
        with pytest.raises(ValidationError):
            estimate_covariance(gaussian_data, 0.5, 0.5, 1.0, exact_oracle, make_rng(0))
        with pytest.raises(ValidationError):
            estimate_covariance(gaussian_data, 1.0, 0.0, 1.0, exact_oracle, make_rng(0))
        with pytest.raises(ValidationError):
            estimate_mean(gaussian_data, 1.0, 10.0, 0.5, -1.0, exact_oracle, make_rng(0))
        with pytest.raises(ValidationError):
            estimate_mean(gaussian_data, 1.0, 0.0, 0.5, 1.0, exact_oracle, make_rng(0))
