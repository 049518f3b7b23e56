"""Unit tests for the experiment runner, report aggregation and export"""

import csv
import json

import numpy as np
import pytest

from dpgauss import __version__
from dpgauss.audit.reporters import AuditReport, Verdict
from dpgauss.services.experiment import ExperimentConfig, Pipeline, Spectrum
from dpgauss.core.exceptions import ValidationError
from dpgauss.core.models import EstimationReport
from dpgauss.core.sampling import make_rng
from dpgauss.mechanisms.budget import BudgetLedger
from dpgauss.services.exporter import SERIES_HEADER, ExportService, Stopwatch
from dpgauss.services.report_service import (ExperimentReport, SeedRun,
                                             config_hash, library_version)
from dpgauss.services.runner import (SeedStreams, corruption_spec, make_truth,
                                     run, run_seed, series_rows, sweep)


@pytest.fixture
def sampling_config():
    """Cheap Gaussian sampling experiment over three seeds"""
    return ExperimentConfig(pipeline=Pipeline.GAUSS_SAMPLING, d=2, kappa=4.0, k=200, epsilon=1.0, delta=1e-5,
                            seeds=(0, 1, 2))


def estimation_run(seed: int, error: float, halted: bool = False) -> SeedRun:
    report = EstimationReport(pipeline="approx_mean", ledger=BudgetLedger())
    if halted:
        report.halt_stage = "selection"
    else:
        report.errors["mean_l2"] = error
    return SeedRun(seed, report)


class TestExperimentReport:
    """Test per-seed aggregation and provenance"""

    def test_quantiles(self):
        """Test q10 / median / q90 over the reporting seeds"""
        report = ExperimentReport({"pipeline": "approx_mean"}, "hash",
                                  [estimation_run(seed, float(seed)) for seed in range(11)])
        aggregates = report.aggregates()["mean_l2"]
        assert aggregates == {"q10": 1.0, "median": 5.0, "q90": 9.0}

    def test_halted_runs_are_counted_not_aggregated(self):
        """Test halted seeds contribute no metric values"""
        runs = [estimation_run(0, 0.5), estimation_run(1, 0.0, halted=True)]
        report = ExperimentReport({}, "hash", runs)
        assert report.halt_count == 1
        assert not report.all_halted
        assert report.metric_values("mean_l2").tolist() == [0.5]

    def test_all_halted(self):
        """Test every seed halting"""
        report = ExperimentReport({}, "hash", [estimation_run(seed, 0.0, halted=True) for seed in range(2)])
        assert report.all_halted
        assert not ExperimentReport({}, "hash").all_halted

    def test_audit_runs(self):
        """Test violated audits and boolean observations"""
        audit = AuditReport("laplace", 1000, 1.0, 0.0, Verdict.VIOLATED,
                            observed={"divergence": 0.3, "flag": True, "missing": None, "inf": float("inf")})
        run_record = SeedRun(0, audit)
        assert run_record.violated
        assert not run_record.halted
        assert run_record.metrics == {"divergence": 0.3}
        assert ExperimentReport({}, "hash", [run_record]).violation_count == 1

    def test_json_provenance(self):
        """Test schema, version and config hash in the JSON"""
        report = ExperimentReport({"n": 5}, config_hash('{"n":5}'), [estimation_run(0, 0.25)])
        payload = json.loads(report.to_json())
        assert payload["version"] == library_version() == __version__
        assert payload["config_hash"] == config_hash('{"n":5}')
        assert len(payload["config_hash"]) == 64
        assert payload["runs"][0]["seed"] == 0
        assert "mean_l2" in report.summary()


class TestExportService:
    """Test file output"""

    def test_write_report(self, out_dir):
        """Test report.json holds the sorted JSON"""
        report = ExperimentReport({"n": 5}, "hash", [estimation_run(0, 0.25)])
        path = ExportService(out_dir).write_report(report)
        assert path.name == "report.json"
        assert json.loads(path.read_text(encoding="utf-8")) == json.loads(report.to_json())

    def test_write_series(self, out_dir):
        """Test the header and canonical number formatting"""
        path = ExportService(out_dir).write_series([(200, "median", "covariance_rel_frobenius", 0.125)])
        with open(path, encoding="utf-8", newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows == [SERIES_HEADER, ["200", "median", "covariance_rel_frobenius", "0.125"]]

    @pytest.mark.parametrize("filename", ["", "../report.json", "a/b.json", "x" * 300])
    def test_invalid_filenames(self, out_dir, filename):
        """Test path traversal and oversized names are refused"""
        with pytest.raises(ValidationError):
            ExportService(out_dir).write_timing({}, filename=filename)

    def test_stopwatch(self):
        """Test timing figures"""
        snapshot = Stopwatch().snapshot()
        assert snapshot["wall_clock_seconds"] >= 0
        assert snapshot["resident_memory_bytes"] > 0


class TestRunnerHelpers:
    """Test truth generation, corruption and seed streams"""

    def test_truth_spectrum(self):
        """Test diagonal spectra span [1, κ] and the mean has norm mean_shift"""
        config = ExperimentConfig(d=3, kappa=9.0, spectrum=Spectrum.DIAGONAL, mean_shift=2.0)
        truth = make_truth(config, make_rng(0))
        assert truth.covariance.min_eigenvalue == pytest.approx(1.0)
        assert truth.covariance.max_eigenvalue == pytest.approx(9.0)
        assert np.linalg.norm(truth.mean) == pytest.approx(2.0)

    def test_corruption_spec(self):
        """Test clean configs and outlier placement along e₁"""
        assert corruption_spec(ExperimentConfig()).eta == 0.0
        spec = corruption_spec(ExperimentConfig(d=3, eta=0.1, outlier_norm=7.0))
        assert spec.offset == (7.0, 0.0, 0.0)

    def test_streams_are_independent(self):
        """Test named streams of one seed differ"""
        streams = SeedStreams.for_seed(0)
        assert not np.array_equal(streams.truth.random(3), streams.data.random(3))


class TestRunner:
    """Test seeded runs and sweeps"""

    def test_run_seed_is_deterministic(self, sampling_config):
        """Test the same seed reproduces the release"""
        first = run_seed(sampling_config, 3)
        second = run_seed(sampling_config, 3)
        assert np.array_equal(first.covariance.entries, second.covariance.entries)

    def test_run_reports_every_seed(self, sampling_config):
        """Test one run per seed in seed order"""
        report = run(sampling_config)
        assert [entry.seed for entry in report.runs] == [0, 1, 2]
        assert report.config_hash == config_hash(sampling_config.canonical_json())
        assert "covariance_rel_frobenius" in report.aggregates()

    def test_run_validates_first(self):
        """Test invalid configs fail before sampling"""
        with pytest.raises(ValidationError):
            run(ExperimentConfig(pipeline=Pipeline.GAUSS_SAMPLING))

    def test_dimension_mismatch_with_data(self, gaussian_data):
        """Test an ingested dataset must match d"""
        config = ExperimentConfig(pipeline=Pipeline.PURE_MEAN, d=3)
        with pytest.raises(ValidationError):
            run(config, data=gaussian_data)

    def test_sweep_and_series(self, sampling_config):
        """Test one report per value and three quantile rows per metric"""
        reports = sweep(sampling_config, "k", ["100", "400"])
        assert [report.config["k"] for report in reports] == [100, 400]
        rows = series_rows("k", reports)
        assert len(rows) == 2 * 3 * len(reports[0].aggregates())
        assert rows[0][0] == 100

    def test_sweep_checks_every_value(self, sampling_config):
        """Test every invalid value is listed"""
        with pytest.raises(ValidationError) as info:
            sweep(sampling_config, "k", ["0", "-1"])
        assert len(info.value.errors) == 2

    def test_sweep_needs_values(self, sampling_config):
        """Test an empty sweep"""
        with pytest.raises(ValidationError):
            sweep(sampling_config, "k", [])
