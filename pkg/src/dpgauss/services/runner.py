"""
Experiment runner: data generation, pipeline dispatch, seeds and sweeps.

Each seed gets its own SeedSequence, spawned into named streams (truth,
data, corruption, mechanism), so changing one stage never perturbs another.
Seeds run concurrently up to `jobs` worker processes; results are merged
in seed order.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..approxdp.estimators import (RobustSettings, robust_covariance,
                                   robust_mean)
from ..approxdp.stability import selection_rounds
from ..audit.divergence import LaplaceAuditor
from ..audit.privacy_loss import GaussianSamplingAuditor
from ..audit.reporters import AuditReport
from ..audit.sensitivity import SolverSensitivityAuditor
from ..core.dataio import load_dataset
from ..core.exceptions import ValidationError
from ..core.linalg import perturb_at_distance, random_psd, rel_frobenius
from ..core.models import (Adversary, CorruptionSpec, Dataset,
                           EstimationReport, GaussianParams, PsdMatrix)
from ..core.sampling import corrupt, make_rng, sample_gaussian
from ..mechanisms.budget import BudgetLedger
from ..mechanisms.gaussian import (admissible_sensitivity,
                                   gaussian_sampling_mechanism)
from ..puredp.estimators import (estimate_covariance, estimate_gaussian,
                                 estimate_mean)
from ..puredp.oracles import make_oracle
from .experiment import ALIASES, ExperimentConfig, Pipeline, Spectrum
from .report_service import ExperimentReport, SeedRun, config_hash

logger = logging.getLogger(__name__)

STREAMS = ("truth", "data", "corruption", "mechanism")
LAPLACE_AUDIT_SENSITIVITY = 1.0


@dataclass
class SeedStreams:
    """Named random streams of one seed"""

    truth: np.random.Generator
    data: np.random.Generator
    corruption: np.random.Generator
    mechanism: np.random.Generator

    @classmethod
    def for_seed(cls, seed: int) -> "SeedStreams":
        children = np.random.SeedSequence(seed).spawn(len(STREAMS))
        return cls(**{name: make_rng(child) for name, child in zip(STREAMS, children)})


def make_truth(config: ExperimentConfig, rng: np.random.Generator) -> GaussianParams:
    """True Gaussian: covariance spectrum in [1, κ], mean of norm mean_shift along the all-ones direction"""
    if config.spectrum is Spectrum.IDENTITY:
        covariance = PsdMatrix.identity(config.d)
    elif config.spectrum is Spectrum.DIAGONAL:
        covariance = PsdMatrix.diagonal(np.geomspace(1.0, config.kappa, config.d))
    else:
        covariance = random_psd(config.d, config.kappa, rng)
    mean = np.full(config.d, config.mean_shift / math.sqrt(config.d))
    return GaussianParams(mean, covariance)


def corruption_spec(config: ExperimentConfig) -> CorruptionSpec:
    """Adversary at level eta; outliers sit at distance outlier_norm along e₁"""
    if config.eta == 0 or config.adversary is Adversary.NONE:
        return CorruptionSpec()
    direction = np.zeros(config.d)
    direction[0] = config.outlier_norm
    if config.adversary is Adversary.REPLACE_WITH_POINT:
        return CorruptionSpec(config.eta, Adversary.REPLACE_WITH_POINT, point=tuple(direction))
    return CorruptionSpec(config.eta, Adversary.SHIFT_CLUSTER, offset=tuple(direction), scale=0.1)


def robust_settings(config: ExperimentConfig) -> RobustSettings:
    return RobustSettings(
        c_l=config.c_l, c_delta=config.c_delta, c_mu=config.c_mu, c_sigma=config.c_sigma, beta=config.beta
    )


def _dataset(
    config: ExperimentConfig,
    truth: GaussianParams,
    streams: SeedStreams,
    data: Optional[Dataset],
) -> Dataset:
    if data is None:
        data = sample_gaussian(truth, config.n, streams.data)
    return corrupt(data, corruption_spec(config), streams.corruption)


def run_seed(
    config: ExperimentConfig,
    seed: int,
    data: Optional[Dataset] = None,
) -> Union[EstimationReport, AuditReport]:
    """
    One pipeline run at one seed.

    With an ingested dataset no truth is known, so no error metrics are
    reported; corruption still applies when eta > 0.
    """
    streams = SeedStreams.for_seed(seed)
    truth = make_truth(config, streams.truth)
    known_truth = truth if data is None else None
    pipeline = config.pipeline
    rng = streams.mechanism

    if pipeline in (Pipeline.PURE_COV, Pipeline.PURE_MEAN, Pipeline.PURE_GAUSSIAN):
        sample = _dataset(config, truth, streams, data)
        oracle = make_oracle(config.oracle.registry_name)
        if pipeline is Pipeline.PURE_COV:
            return estimate_covariance(
                sample, config.kappa, config.alpha, config.epsilon, oracle, rng,
                truth=known_truth, beta=config.beta, rescale=config.rescale,
            )
        if pipeline is Pipeline.PURE_MEAN:
            return estimate_mean(
                sample, config.kappa, config.radius, config.alpha, config.epsilon, oracle, rng,
                truth=known_truth, beta=config.beta, rescale=config.rescale,
            )
        return estimate_gaussian(
            sample, config.kappa, config.radius, config.alpha, config.epsilon, oracle, rng,
            robust=config.robust, eta=config.assumed_eta if config.robust else 0.0,
            truth=known_truth, beta=config.beta, rescale=config.rescale,
        )

    if pipeline is Pipeline.APPROX_MEAN:
        sample = _dataset(config, truth, streams, data)
        report = robust_mean(
            sample, config.assumed_eta, config.budget, config.witness_bound, rng,
            settings=robust_settings(config), truth=known_truth,
        )
        if known_truth is not None:
            report.errors["naive_mean_l2"] = float(np.linalg.norm(sample.mean() - known_truth.mean))
        return report

    if pipeline is Pipeline.APPROX_COV:
        sample = _dataset(config, truth, streams, data)
        report = robust_covariance(
            sample, config.assumed_eta, config.budget, config.witness_bound, config.k, rng,
            settings=robust_settings(config), truth=known_truth, center_by_pairs=config.center_by_pairs,
        )
        if known_truth is not None:
            naive = PsdMatrix(np.atleast_2d(np.cov(sample.points, rowvar=False, bias=True)))
            report.errors["naive_rel_frobenius"] = rel_frobenius(naive, known_truth.covariance)
        return report

    if pipeline is Pipeline.GAUSS_SAMPLING:
        ledger = BudgetLedger()
        released = gaussian_sampling_mechanism(truth.covariance, config.k, rng)
        ledger.spend(
            "gaussian_sampling_mechanism", config.budget,
            note=f"valid for producers with sensitivity ≤ {admissible_sensitivity(config.budget, config.k):.4g}",
        )
        report = EstimationReport(pipeline=pipeline.value, ledger=ledger, covariance=released)
        report.artifacts["k"] = config.k
        report.errors["covariance_rel_frobenius"] = rel_frobenius(released, truth.covariance)
        return report

    if pipeline is Pipeline.AUDIT_GAUSS_SAMPLING:
        distance = config.delta_scale * admissible_sensitivity(config.budget, config.k)
        neighbour = perturb_at_distance(truth.covariance, distance)
        auditor = GaussianSamplingAuditor(
            truth.covariance, neighbour, config.k, config.epsilon, config.delta, config.trials
        )
        report = auditor.run(rng)
        report.details["distance"] = distance
        return report

    if pipeline is Pipeline.AUDIT_LAPLACE:
        return LaplaceAuditor(LAPLACE_AUDIT_SENSITIVITY, config.epsilon, config.trials, config.bins).run(rng)

    if pipeline is Pipeline.AUDIT_SOLVER:
        sample = _dataset(config, truth, streams, data)
        select_budget = config.budget.split(3)[0]
        L = selection_rounds(sample.n, select_budget, config.beta, config.c_l)
        auditor = SolverSensitivityAuditor(
            sample, config.pairs, config.assumed_eta, config.witness_bound, L,
            budget=select_budget, replacement=config.replacement,
        )
        return auditor.run(rng)

    raise ValidationError(f"Unsupported pipeline '{pipeline.value}'", "pipeline")


def _run_seed_job(job: tuple[ExperimentConfig, int, Optional[Dataset]]) -> Union[EstimationReport, AuditReport]:
    config, seed, data = job
    return run_seed(config, seed, data)


def run(
    config: ExperimentConfig,
    jobs: int = 1,
    data: Optional[Dataset] = None,
) -> ExperimentReport:
    """
    Run the pipeline on every seed; deterministic per seed.

    Raises:
        ValidationError: Listing every violated precondition, before any sampling
    """
    config.require_valid()
    if data is None and config.data_path is not None:
        data = load_dataset(config.data_path)
    if data is not None and data.dim != config.d:
        raise ValidationError(f"Dataset has dimension {data.dim} but d = {config.d}", "d")

    logger.info(f"Running {config.pipeline.value} on {len(config.seeds)} seed(s) with {jobs} job(s)")
    work = [(config, seed, data) for seed in config.seeds]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(work))) as executor:
            results = list(executor.map(_run_seed_job, work))
    else:
        results = [_run_seed_job(job) for job in work]

    report = ExperimentReport(
        config=config.to_dict(),
        config_hash=config_hash(config.canonical_json()),
        runs=[SeedRun(seed, result) for seed, result in zip(config.seeds, results)],
    )
    if report.halt_count:
        logger.warning(f"{report.halt_count} of {len(report.runs)} run(s) halted")
    return report


def sweep(
    config: ExperimentConfig,
    axis: str,
    values: list,
    jobs: int = 1,
    data: Optional[Dataset] = None,
) -> list[ExperimentReport]:
    """
    One report per axis value, all on the same seed schedule.

    Raises:
        ValidationError: If the axis is not a numeric field, or any swept config is invalid
    """
    if not values:
        raise ValidationError("Sweep needs at least one value", "values")
    configs = [config.with_value(axis, value) for value in values]
    problems = []
    for value, swept in zip(values, configs):
        problems.extend(f"{axis}={value}: {error}" for error in swept.validate())
    if problems:
        raise ValidationError(f"Invalid sweep over {axis}", axis, problems)
    return [run(swept, jobs=jobs, data=data) for swept in configs]


def series_rows(axis: str, reports: list[ExperimentReport]) -> list[tuple]:
    """(axis value, quantile, metric, value) rows of a sweep"""
    field = ALIASES.get(axis, axis)
    rows = []
    for report in reports:
        value = report.config[field]
        for metric, quantiles in report.aggregates().items():
            for label, number in quantiles.items():
                rows.append((value, label, metric, number))
    return rows
