"""Runtime configuration management"""

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from .. import __version__ as PACKAGE_VERSION
from .constants import EIGEN_CAP, SOLVER_TOL
from .paths import LOGS, REPORTS

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


@dataclass
class Config:
    """Runtime configuration"""

    # Paths
    log_dir: Path
    out_dir: Path

    # Application
    app_name: str
    app_version: str

    # Execution
    jobs: int
    solver_tol: float
    eigen_cap: int

    # Logging
    log_level: str
    log_rotation: str
    log_to_file: bool = True

    @classmethod
    def from_env(cls, dotenv_path: Path | None = None) -> "Config":
        """Load configuration from environment variables (and a .env file if present)"""
        load_dotenv(dotenv_path=dotenv_path, override=False)

        return cls(
            log_dir=Path(os.getenv("DPGAUSS_LOG_DIR", LOGS)),
            out_dir=Path(os.getenv("DPGAUSS_OUT_DIR", REPORTS)),
            app_name=os.getenv("DPGAUSS_APP_NAME", "dpgauss"),
            app_version=PACKAGE_VERSION,
            jobs=int(os.getenv("DPGAUSS_JOBS", "1")),
            solver_tol=float(os.getenv("DPGAUSS_SOLVER_TOL", str(SOLVER_TOL))),
            eigen_cap=int(os.getenv("DPGAUSS_EIGEN_CAP", str(EIGEN_CAP))),
            log_level=os.getenv("DPGAUSS_LOG_LEVEL", "INFO").upper(),
            log_rotation=os.getenv("DPGAUSS_LOG_ROTATION", "daily"),
            log_to_file=os.getenv("DPGAUSS_LOG_TO_FILE", "true").lower() == "true",
        )

    def validate(self) -> list[str]:
        """Validate configuration and return list of errors"""
        errors = []

        if self.jobs < 1:
            errors.append(f"Invalid job count: {self.jobs}")

        if not self.solver_tol > 0:
            errors.append(f"Invalid solver tolerance: {self.solver_tol}")

        if self.eigen_cap < 1:
            errors.append(f"Invalid eigenproblem cap: {self.eigen_cap}")

        if self.log_level not in LOG_LEVELS:
            errors.append(f"Invalid log level: {self.log_level}")

        if self.log_rotation not in ["daily", "size"]:
            errors.append(f"Invalid log rotation: {self.log_rotation}")

        return errors
