"""Unit tests for seeded sampling, corruption and dataset files"""

import numpy as np
import pytest

from dpgauss.core.dataio import load_dataset, save_dataset
from dpgauss.core.exceptions import DataFormatError, ValidationError
from dpgauss.core.models import (Adversary, CorruptionSpec, Dataset,
                                 GaussianParams, PsdMatrix)
from dpgauss.core.sampling import (corrupt, empirical_covariance, make_rng,
                                   moment_matched_sample, pair_difference,
                                   sample_gaussian, split_rng)


class TestStreams:
    """Test reproducibility of the counter-based streams"""

    def test_same_seed_same_draws(self):
        """Test a seed fully determines the stream"""
        assert np.array_equal(make_rng(5).standard_normal(4), make_rng(5).standard_normal(4))

    def test_seed_sequence_accepted(self):
        """Test SeedSequence and int seeds give the same stream"""
        left = make_rng(np.random.SeedSequence(9)).random(3)
        right = make_rng(9).random(3)
        assert np.array_equal(left, right)

    def test_split_streams_differ(self):
        """Test spawned children are distinct"""
        first, second = split_rng(make_rng(0), 2)
        assert not np.array_equal(first.random(4), second.random(4))


class TestSampling:
    """Test Gaussian sampling and moment helpers"""

    def test_sample_gaussian_is_deterministic(self, standard_params):
        """Test identical streams give identical datasets"""
        a = sample_gaussian(standard_params, 50, make_rng(1))
        b = sample_gaussian(standard_params, 50, make_rng(1))
        assert np.array_equal(a.points, b.points)

    def test_sample_gaussian_moments(self):
        """Test empirical moments approach the parameters"""
        params = GaussianParams(np.array([1.0, -2.0]), PsdMatrix.diagonal([4.0, 1.0]))
        data = sample_gaussian(params, 20000, make_rng(2))
        assert np.allclose(data.mean(), params.mean, atol=0.1)
        assert np.allclose(empirical_covariance(data, data.mean()).entries, params.covariance.entries, atol=0.15)

    def test_sample_gaussian_rejects_zero_n(self, standard_params):
        """Test n must be positive"""
        with pytest.raises(ValidationError):
            sample_gaussian(standard_params, 0, make_rng(0))

    def test_empirical_covariance_center_dimension(self):
        """Test a wrong-sized center is refused"""
        with pytest.raises(ValidationError):
            empirical_covariance(Dataset(np.ones((3, 2))), np.zeros(3))

    def test_pair_difference_drops_trailing_point(self):
        """Test (X₂ − X₁)/√2 and the unpaired last point"""
        data = Dataset(np.array([[0.0], [2.0], [1.0], [5.0], [9.0]]))
        differences = pair_difference(data)
        assert differences.n == 2
        assert np.allclose(differences.points.ravel(), [2.0 / np.sqrt(2.0), 4.0 / np.sqrt(2.0)])

    def test_pair_difference_needs_two_points(self):
        """Test a single point cannot be paired"""
        with pytest.raises(ValidationError):
            pair_difference(Dataset(np.ones((1, 2))))

    def test_moment_matched_sample_is_exact(self):
        """Test second moment about the origin equals Σ"""
        sigma = PsdMatrix(np.array([[3.0, 1.0], [1.0, 2.0]]))
        data = moment_matched_sample(sigma, repeats=2)
        assert data.n == 8
        assert np.allclose(empirical_covariance(data).entries, sigma.entries)


class TestCorruption:
    """Test the two adversaries"""

    def test_replace_with_point(self):
        """Test exactly ⌊ηn⌋ rows become the point"""
        data = Dataset(np.zeros((100, 2)))
        spec = CorruptionSpec(0.1, Adversary.REPLACE_WITH_POINT, point=(5.0, 5.0))
        corrupted = corrupt(data, spec, make_rng(0))
        assert len(corrupted.corrupted_indices) == 10
        assert np.allclose(corrupted.points[list(corrupted.corrupted_indices)], 5.0)
        assert int(np.count_nonzero(corrupted.points.any(axis=1))) == 10

    def test_shift_cluster_moves_rows(self):
        """Test shifted rows sit near the offset"""
        data = Dataset(np.zeros((200, 2)))
        spec = CorruptionSpec(0.05, Adversary.SHIFT_CLUSTER, offset=(10.0, 0.0), scale=0.1)
        corrupted = corrupt(data, spec, make_rng(1))
        moved = corrupted.points[list(corrupted.corrupted_indices)]
        assert moved.shape == (10, 2)
        assert np.allclose(moved.mean(axis=0), [10.0, 0.0], atol=0.2)

    def test_no_corruption_returns_input(self):
        """Test eta = 0 is a no-op"""
        data = Dataset(np.zeros((10, 1)))
        assert corrupt(data, CorruptionSpec(), make_rng(0)) is data

    def test_wrong_point_dimension(self):
        """Test the adversary point must match d"""
        data = Dataset(np.zeros((10, 2)))
        spec = CorruptionSpec(0.2, Adversary.REPLACE_WITH_POINT, point=(1.0,))
        with pytest.raises(ValidationError):
            corrupt(data, spec, make_rng(0))


class TestDatasetFiles:
    """Test the comma-separated dataset format"""

    def test_save_then_load(self, tmp_path):
        """Test a saved dataset loads back exactly"""
        data = Dataset(np.array([[0.1, -2.5], [1e-8, 3.0]]))
        path = save_dataset(data, tmp_path / "points.csv")
        assert np.array_equal(load_dataset(path).points, data.points)

    def test_blank_lines_are_skipped(self, tmp_path):
        """Test empty lines between rows are ignored"""
        path = tmp_path / "points.csv"
        path.write_text("1,2\n\n3,4\n", encoding="utf-8")
        assert load_dataset(path).n == 2

    def test_ragged_rows(self, tmp_path):
        """Test rows with differing widths name the line"""
        path = tmp_path / "points.csv"
        path.write_text("1,2\n3\n", encoding="utf-8")
        with pytest.raises(DataFormatError) as info:
            load_dataset(path)
        assert info.value.line == 2

    @pytest.mark.parametrize("field", ["abc", "nan", "inf", "-Infinity", "1_000", "0x10", "1e999", "1,5"])
    def test_unparsable_and_non_finite(self, tmp_path, field):
        """Test fields other than finite plain decimals name their line"""
        path = tmp_path / "points.csv"
        path.write_text(f"1,2\n3,{field}\n", encoding="utf-8")
        with pytest.raises(DataFormatError) as info:
            load_dataset(path)
        assert info.value.line == 2
        assert isinstance(info.value, ValidationError)

    def test_plain_decimal_spellings(self, tmp_path):
        """Test signs, exponents and bare fractions parse"""
        path = tmp_path / "points.csv"
        path.write_text("+1.5, -2e-3\n.5,7.\n", encoding="utf-8")
        assert np.allclose(load_dataset(path).points, [[1.5, -0.002], [0.5, 7.0]])

    def test_empty_file(self, tmp_path):
        """Test a file without rows is rejected"""
        path = tmp_path / "points.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(DataFormatError):
            load_dataset(path)
