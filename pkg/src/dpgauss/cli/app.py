"""
Command-line front end.

Exit codes: 0 success, 2 validation or configuration failure, 3 every seed
halted with REJECT, 4 an audit verdict was violated, 1 anything else.
"""

import argparse
import logging
from pathlib import Path
from typing import Optional

from .. import __version__
from ..core.config import Config
from ..core.container import Container
from ..core.exceptions import ConfigurationError, ValidationError
from ..services.experiment import load_config
from ..services.exporter import Stopwatch
from ..services.report_service import ExperimentReport
from ..services.runner import run, series_rows, sweep
from ..utils.error_handler import (EXIT_AUDIT_VIOLATED, EXIT_HALTED, EXIT_OK,
                                   EXIT_VALIDATION)

# flag dest -> config key
FLAG_KEYS = {
    "pipeline": "pipeline",
    "d": "d",
    "n": "n",
    "kappa": "kappa",
    "radius": "radius",
    "alpha": "alpha",
    "eta": "eta",
    "eta_bound": "eta_bound",
    "epsilon": "epsilon",
    "delta": "delta",
    "C": "C",
    "k": "k",
    "oracle": "oracle",
    "seed": "seeds",
    "data": "data_path",
    "trials": "trials",
    "pairs": "pairs",
    "bins": "bins",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpgauss",
        description="Differentially private, outlier-robust Gaussian estimation experiments",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="key=value experiment file")
    parser.add_argument("--pipeline", help="pipeline name, e.g. pure_cov or audit_laplace")
    parser.add_argument("--d", help="dimension")
    parser.add_argument("--n", help="sample size")
    parser.add_argument("--kappa", help="condition-number bound")
    parser.add_argument("--R", "--radius", dest="radius", help="mean radius bound")
    parser.add_argument("--alpha", help="target accuracy")
    parser.add_argument("--eta", help="corruption level of generated data")
    parser.add_argument("--eta-bound", dest="eta_bound", help="outlier bound assumed by robust pipelines")
    parser.add_argument("--epsilon", help="privacy parameter ε")
    parser.add_argument("--delta", help="privacy parameter δ")
    parser.add_argument("--C", help="witness moment bound")
    parser.add_argument("--k", help="Gaussian sampling count")
    parser.add_argument("--oracle", help="pure-DP mean oracle")
    parser.add_argument("--robust", action="store_true", default=None, help="robust pure_gaussian variant")
    parser.add_argument("--seed", help="seed list: 1,2,5-9")
    parser.add_argument("--trials", help="audit trials")
    parser.add_argument("--pairs", help="neighbouring pairs for audit_solver")
    parser.add_argument("--bins", help="histogram bins for audit_laplace")
    parser.add_argument("--data", help="dataset file (one comma-separated point per line)")
    parser.add_argument("--jobs", type=int, help="worker processes for seeds")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--sweep", metavar="AXIS", help="numeric config field to sweep")
    parser.add_argument("--values", help="comma-separated sweep values")
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    overrides = {key: getattr(args, dest) for dest, key in FLAG_KEYS.items()}
    if args.robust:
        overrides["robust"] = "true"
    return overrides


def _exit_code(reports: list[ExperimentReport], logger: logging.Logger) -> int:
    if any(report.violation_count for report in reports):
        logger.error("Audit verdict: violated")
        return EXIT_AUDIT_VIOLATED
    if reports and all(report.all_halted for report in reports):
        logger.error("Every run halted with REJECT")
        return EXIT_HALTED
    return EXIT_OK


def run_cli(argv: Optional[list[str]] = None) -> int:
    """
    Parse flags, run the experiment or sweep and write its reports.

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    try:
        config = Config.from_env()
    except ValueError as error:
        logging.getLogger("dpgauss").error(f"Invalid environment configuration: {error}")
        return EXIT_VALIDATION
    problems = config.validate()
    if problems:
        logging.getLogger("dpgauss").error("Invalid environment configuration: " + "; ".join(problems))
        return EXIT_VALIDATION

    container = Container(config, out_dir=args.out)
    logger = container.get("logger")
    error_handler = container.get("error_handler")
    jobs = args.jobs if args.jobs is not None else config.jobs

    try:
        if (args.sweep is None) != (args.values is None):
            raise ConfigurationError("--sweep and --values must be given together", "sweep")
        if jobs < 1:
            raise ValidationError(f"--jobs must be at least 1, got {jobs}", "jobs")

        experiment = load_config(args.config, _overrides(args))
        stopwatch = Stopwatch()
        exporter = container.get("exporter")

        if args.sweep is not None:
            values = [value.strip() for value in args.values.split(",") if value.strip()]
            reports = sweep(experiment, args.sweep, values, jobs=jobs)
            exporter.write_reports(reports)
            exporter.write_series(series_rows(args.sweep, reports))
        else:
            reports = [run(experiment, jobs=jobs)]
            exporter.write_report(reports[0])
            logger.info("\n" + reports[0].summary())

        exporter.write_timing({**stopwatch.snapshot(), "jobs": jobs, "reports": len(reports)})
        return _exit_code(reports, logger)

    except Exception as error:
        return error_handler.handle(error)
