"""
Experiment configuration: flat key=value files, CLI overrides and
per-pipeline precondition checks.

File format: one `key = value` per line, `#` starts a comment, blank lines
are ignored. Flags given on the command line override file values.
"""

import dataclasses
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from ..core.constants import (C_DELTA, C_L, C_MU, C_SIGMA, DEFAULT_BETA,
                              DEFAULT_COV_C, DEFAULT_MEAN_C, WEAK_MIN_KAPPA,
                              WEAK_RESCALE)
from ..core.exceptions import ConfigurationError, ValidationError
from ..core.models import Adversary
from ..mechanisms.budget import PrivacyBudget
from ..puredp.preconditioning import round_count


class Pipeline(Enum):
    """Runnable pipelines"""

    PURE_COV = "pure_cov"
    PURE_MEAN = "pure_mean"
    PURE_GAUSSIAN = "pure_gaussian"
    APPROX_MEAN = "approx_mean"
    APPROX_COV = "approx_cov"
    GAUSS_SAMPLING = "gauss_sampling"
    AUDIT_GAUSS_SAMPLING = "audit_gauss_sampling"
    AUDIT_LAPLACE = "audit_laplace"
    AUDIT_SOLVER = "audit_solver"

    @property
    def is_pure(self) -> bool:
        return self.value.startswith("pure_")


class OracleKind(Enum):
    """Pure-DP mean oracle substitutes"""

    NON_PRIVATE = "non_private"
    TRIMMED = "trimmed"
    CLIP_LAPLACE = "clip_laplace"
    INJECTED = "injected"

    @property
    def registry_name(self) -> str:
        return "trimmed" if self is OracleKind.NON_PRIVATE else self.value


class Spectrum(Enum):
    """How the true covariance is generated"""

    RANDOM = "random"
    DIAGONAL = "diagonal"
    IDENTITY = "identity"


REPLACEMENTS = ("resample", "extreme", "self")

INT_FIELDS = {"d", "n", "k", "trials", "pairs", "bins"}
FLOAT_FIELDS = {
    "kappa", "radius", "alpha", "eta", "eta_bound", "epsilon", "delta", "C", "beta",
    "delta_scale", "mean_shift", "outlier_norm", "c_l", "c_delta", "c_mu", "c_sigma", "rescale",
}
NUMERIC_FIELDS = INT_FIELDS | FLOAT_FIELDS

# Config-file and flag spellings that differ from the field name
ALIASES = {"R": "radius", "sample_count_k": "k", "c_L": "c_l", "c_Δ": "c_delta", "c_μ": "c_mu", "c_Σ": "c_sigma"}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: pipeline, problem size, privacy budget, seeds and overrides"""

    pipeline: Pipeline = Pipeline.PURE_COV
    d: int = 2
    n: int = 1000
    kappa: float = 1.0
    radius: float = 10.0
    alpha: float = 0.5
    eta: float = 0.0
    eta_bound: Optional[float] = None
    epsilon: float = 1.0
    delta: float = 0.0
    C: Optional[float] = None
    k: Optional[int] = None
    seeds: tuple[int, ...] = (0,)
    oracle: OracleKind = OracleKind.TRIMMED
    robust: bool = False
    beta: float = DEFAULT_BETA
    c_l: float = C_L
    c_delta: float = C_DELTA
    c_mu: float = C_MU
    c_sigma: float = C_SIGMA
    rescale: float = WEAK_RESCALE
    spectrum: Spectrum = Spectrum.RANDOM
    mean_shift: float = 0.0
    adversary: Adversary = Adversary.SHIFT_CLUSTER
    outlier_norm: float = 10.0
    center_by_pairs: bool = False
    trials: int = 1000
    pairs: int = 10
    bins: int = 100
    delta_scale: float = 1.0
    replacement: str = "resample"
    data_path: Optional[Path] = None

    @property
    def budget(self) -> PrivacyBudget:
        return PrivacyBudget(self.epsilon, self.delta)

    @property
    def assumed_eta(self) -> float:
        """Outlier bound handed to the robust pipelines"""
        if self.eta_bound is not None:
            return self.eta_bound
        return self.eta if self.eta > 0 else 0.05

    @property
    def witness_bound(self) -> float:
        if self.C is not None:
            return self.C
        return DEFAULT_COV_C if self.pipeline is Pipeline.APPROX_COV else DEFAULT_MEAN_C

    def with_value(self, name: str, value: Any) -> "ExperimentConfig":
        """Copy with one field replaced; numeric fields are coerced"""
        name = ALIASES.get(name, name)
        if name not in NUMERIC_FIELDS:
            raise ValidationError(f"Sweep axis '{name}' is not a numeric config field", "axis")
        return dataclasses.replace(self, **{name: _coerce(name, value)})

    def validate(self) -> list[str]:
        """
        Every violated precondition of the target pipeline, prefixed with
        the module that imposes it; an empty list means valid.
        """
        from ..approxdp.estimators import RobustSettings, max_sample_count
        from ..approxdp.stability import minimal_sample_size

        errors: list[str] = []

        def check(condition: bool, module: str, message: str) -> None:
            if not condition:
                errors.append(f"{module}: {message}")

        check(self.d >= 1, "core", f"dimension d must be at least 1, got {self.d}")
        check(self.n >= 1, "core", f"n must be at least 1, got {self.n}")
        check(self.kappa >= 1, "core", f"kappa must be at least 1, got {self.kappa}")
        check(0.0 <= self.eta < 0.5, "core", f"eta must lie in [0, 1/2), got {self.eta}")
        check(self.outlier_norm >= 0, "core", f"outlier_norm cannot be negative, got {self.outlier_norm}")
        check(len(self.seeds) >= 1, "cli", "at least one seed is required")
        check(len(set(self.seeds)) == len(self.seeds), "cli", "seeds must be distinct")
        check(0.0 < self.beta < 1.0, "cli", f"beta must lie in (0, 1), got {self.beta}")
        check(self.epsilon > 0, "mechanisms", f"epsilon must be positive, got {self.epsilon}")
        check(0.0 <= self.delta < 1.0, "mechanisms", f"delta must lie in [0, 1), got {self.delta}")
        if errors:
            return errors

        pipeline = self.pipeline
        if pipeline.is_pure:
            check(0.0 < self.alpha <= 1.0, "puredp", f"alpha must lie in (0, 1], got {self.alpha}")
            check(self.radius > 0, "puredp", f"radius R must be positive, got {self.radius}")
            check(self.rescale > 0, "puredp", f"rescale must be positive, got {self.rescale}")
            check(
                self.kappa <= WEAK_MIN_KAPPA or self.rescale > 1.0,
                "puredp",
                f"rescale must exceed 1 for preconditioning to keep I ⪯ AΣAᵀ, got {self.rescale}",
            )
            rounds = round_count(self.kappa)
            available = self.n // 2 if pipeline is Pipeline.PURE_COV else self.n // 3
            if pipeline is Pipeline.PURE_GAUSSIAN:
                available = self.n // 6
            check(
                rounds * self.d <= max(available, 0),
                "puredp",
                f"recursive preconditioning at kappa={self.kappa:g} runs {rounds} rounds and needs "
                f"{rounds}·d = {rounds * self.d} points in its share, got {available}",
            )
            if self.robust:
                check(pipeline is Pipeline.PURE_GAUSSIAN, "puredp", "robust=true applies to pure_gaussian only")
            if pipeline is Pipeline.PURE_GAUSSIAN:
                check(self.n >= 2, "puredp", "Gaussian estimation needs at least two points")

        if pipeline in (Pipeline.APPROX_MEAN, Pipeline.APPROX_COV, Pipeline.AUDIT_SOLVER):
            check(0.0 < self.delta < 1.0, "approxdp", f"robust pipelines need delta in (0, 1), got {self.delta}")
            eta = self.assumed_eta
            check(0.0 < eta < 0.5, "approxdp", f"eta_bound must lie in (0, 1/2), got {eta}")
            check(self.witness_bound > 0, "approxdp", f"C must be positive, got {self.witness_bound}")
            for name in ("c_l", "c_delta", "c_mu", "c_sigma"):
                check(getattr(self, name) > 0, "approxdp", f"{name} must be positive, got {getattr(self, name)}")
            check(eta >= self.eta, "approxdp", f"eta_bound {eta} is below the corruption level eta {self.eta}")
            if not errors and pipeline is not Pipeline.AUDIT_SOLVER:
                select_budget = self.budget.split(3)[0]
                needed = minimal_sample_size(eta, select_budget, self.beta, self.c_l)
                check(
                    self.n >= needed,
                    "approxdp",
                    f"floor(eta·n) must be at least L = ceil((c_L/ε₁)·log(n/(βδ₁))); "
                    f"the minimal sample size is n = {needed}, got {self.n}",
                )
            if not errors and pipeline is Pipeline.APPROX_COV:
                settings = RobustSettings(self.c_l, self.c_delta, self.c_mu, self.c_sigma, self.beta)
                k_max = max_sample_count(self.n // 2 if self.center_by_pairs else self.n,
                                         self.budget, self.witness_bound, settings)
                check(
                    k_max >= 1,
                    "approxdp",
                    "no sample count k is admissible: need c_Σ·C·√(L/n) ≤ ε₃/(8 log(1/δ₃))",
                )
                if self.k is not None and k_max >= 1:
                    check(
                        1 <= self.k <= k_max,
                        "approxdp",
                        f"k = {self.k} exceeds the largest admissible k = {k_max} "
                        f"(k_max = max k with min(ε₃/√(8k log(1/δ₃)), ε₃/(8 log(1/δ₃))) ≥ c_Σ·C·√(L/n))",
                    )
            if pipeline is Pipeline.AUDIT_SOLVER:
                check(self.pairs >= 10, "audit", f"pairs must be at least 10, got {self.pairs}")
                check(self.replacement in REPLACEMENTS, "audit",
                      f"replacement must be one of {REPLACEMENTS}, got '{self.replacement}'")

        if pipeline in (Pipeline.GAUSS_SAMPLING, Pipeline.AUDIT_GAUSS_SAMPLING):
            check(self.k is not None and self.k >= 1, "mechanisms", "Gaussian sampling needs a sample count k >= 1")
            check(0.0 < self.delta < 1.0, "mechanisms", f"Gaussian sampling needs delta in (0, 1), got {self.delta}")

        if pipeline is Pipeline.AUDIT_GAUSS_SAMPLING:
            check(self.trials >= 1000, "audit", f"trials must be at least 1000, got {self.trials}")
            check(self.delta_scale > 0, "audit", f"delta_scale must be positive, got {self.delta_scale}")
            check(self.data_path is None, "audit", "audit_gauss_sampling generates its own covariances; --data is not used")

        if pipeline is Pipeline.AUDIT_LAPLACE:
            check(self.trials >= 1000, "audit", f"trials must be at least 1000, got {self.trials}")
            check(self.bins >= 2, "audit", f"bins must be at least 2, got {self.bins}")

        return errors

    def require_valid(self) -> "ExperimentConfig":
        """
        Raises:
            ValidationError: Listing every violated precondition
        """
        errors = self.validate()
        if errors:
            raise ValidationError(
                f"Invalid {self.pipeline.value} configuration ({len(errors)} problem(s))", "config", errors
            )
        return self

    def to_dict(self) -> dict[str, Any]:
        """Canonical config echo; the config hash is computed over this"""
        echo = {}
        for item in dataclasses.fields(self):
            value = getattr(self, item.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple):
                value = list(value)
            echo[item.name] = value
        return echo

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def parse_seeds(text: str) -> tuple[int, ...]:
    """
    Parse a seed list: comma-separated integers and inclusive ranges a-b.

    Examples:
        >>> parse_seeds("1,2,5-7")
        (1, 2, 5, 6, 7)
    """
    seeds: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                start, stop = part.split("-", 1)
                low, high = int(start), int(stop)
                if high < low:
                    raise ValidationError(f"Seed range '{part}' is descending", "seed")
                seeds.extend(range(low, high + 1))
            else:
                seeds.append(int(part))
        except ValueError:
            raise ValidationError(f"Cannot parse seed '{part}'; seeds are nonnegative integers", "seed") from None
    if not seeds:
        raise ValidationError("Seed list is empty", "seed")
    return tuple(seeds)


def parse_bool(text: str) -> bool:
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValidationError(f"Cannot parse '{text}' as a boolean", "bool")


def _coerce(name: str, raw: Any) -> Any:
    if raw is None:
        return None
    try:
        if name in INT_FIELDS:
            value = float(raw)
            if not value.is_integer():
                raise ValidationError(f"{name} must be an integer, got {raw}", name)
            return int(value)
        if name in FLOAT_FIELDS:
            value = float(raw)
            if math.isnan(value):
                raise ValidationError(f"{name} cannot be nan", name)
            return value
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be numeric, got '{raw}'", name) from None

    if name == "pipeline":
        return _enum(Pipeline, raw, name)
    if name == "oracle":
        return _enum(OracleKind, raw, name)
    if name == "spectrum":
        return _enum(Spectrum, raw, name)
    if name == "adversary":
        return _enum(Adversary, raw, name)
    if name == "seeds":
        return raw if isinstance(raw, tuple) else parse_seeds(raw)
    if name in ("robust", "center_by_pairs"):
        return raw if isinstance(raw, bool) else parse_bool(raw)
    if name == "data_path":
        return Path(raw)
    if name == "replacement":
        return str(raw).strip()
    raise ConfigurationError(f"Unknown config key '{name}'", name)


def _enum(cls: type[Enum], raw: Any, name: str) -> Enum:
    if isinstance(raw, cls):
        return raw
    try:
        return cls(str(raw).strip())
    except ValueError:
        choices = ", ".join(member.value for member in cls)
        raise ValidationError(f"Unknown {name} '{raw}', expected one of: {choices}", name) from None


def read_config_file(path: Path) -> dict[str, str]:
    """
    Read flat key=value pairs.

    Raises:
        ConfigurationError: On a missing file, a line without '=' or a repeated key
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Config file not found: {path}", str(path))

    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            content = line.split("#", 1)[0].strip()
            if not content:
                continue
            if "=" not in content:
                raise ConfigurationError(f"{path}:{line_number}: expected 'key = value'", str(path))
            key, value = (part.strip() for part in content.split("=", 1))
            if key in values:
                raise ConfigurationError(f"{path}:{line_number}: duplicate key '{key}'", key)
            values[key] = value
    return values


def build_config(values: dict[str, Any]) -> ExperimentConfig:
    """
    Build a config from raw values (file entries merged with flag overrides).

    Raises:
        ConfigurationError: On an unknown key
        ValidationError: On a value that does not parse
    """
    known = {item.name for item in dataclasses.fields(ExperimentConfig)}
    kwargs: dict[str, Any] = {}
    for raw_key, raw_value in values.items():
        key = ALIASES.get(raw_key, raw_key)
        if key == "seed":
            key = "seeds"
        if key == "data":
            key = "data_path"
        if key not in known:
            raise ConfigurationError(f"Unknown config key '{raw_key}'", raw_key)
        kwargs[key] = _coerce(key, raw_value)
    return ExperimentConfig(**kwargs)


def load_config(path: Optional[Path], overrides: Optional[dict[str, Any]] = None) -> ExperimentConfig:
    """Config file values with flag overrides applied on top"""
    values: dict[str, Any] = read_config_file(path) if path is not None else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return build_config(values)
