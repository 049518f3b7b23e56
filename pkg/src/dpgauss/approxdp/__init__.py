"""Approximate-DP package - witness solving, stable rate selection and robust estimators"""

from .certificates import (Certificate, certify_subgaussian,
                           check_hypercontractive)
from .entropy import WeightVector, potential, renormalize, unnormalized_entropy
from .estimators import (RobustSettings, max_sample_count, robust_covariance,
                         robust_mean)
from .solver import (WitnessKind, WitnessSolution, solve_cov_witness,
                     solve_mean_witness)
from .stability import (PotentialTable, SelectionOutcome, score,
                        select_outlier_rate, selection_rounds, stability)
from .witness_check import witness_check

__all__ = [
    "WeightVector",
    "unnormalized_entropy",
    "potential",
    "renormalize",
    "WitnessKind",
    "WitnessSolution",
    "solve_mean_witness",
    "solve_cov_witness",
    "Certificate",
    "certify_subgaussian",
    "check_hypercontractive",
    "PotentialTable",
    "SelectionOutcome",
    "stability",
    "score",
    "selection_rounds",
    "select_outlier_rate",
    "witness_check",
    "RobustSettings",
    "max_sample_count",
    "robust_mean",
    "robust_covariance",
]
