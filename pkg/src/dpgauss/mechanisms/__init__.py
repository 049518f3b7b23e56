"""Mechanisms package - randomized privacy primitives and budget accounting"""

from .budget import BudgetLedger, LedgerEntry, PrivacyBudget
from .gaussian import (admissible_sensitivity, expected_privacy_loss,
                       gaussian_mechanism, gaussian_sampling_mechanism,
                       gaussian_sigma, max_admissible_k, privacy_loss_batch,
                       privacy_loss_bound, privacy_loss_z)
from .laplace import (TruncatedLaplaceParams, laplace_mechanism,
                      trunc_laplace_cdf, truncated_laplace_sample)
from .selection import dp_select, exponential_mechanism

__all__ = [
    "PrivacyBudget",
    "BudgetLedger",
    "LedgerEntry",
    "laplace_mechanism",
    "TruncatedLaplaceParams",
    "truncated_laplace_sample",
    "trunc_laplace_cdf",
    "gaussian_sigma",
    "gaussian_mechanism",
    "admissible_sensitivity",
    "max_admissible_k",
    "gaussian_sampling_mechanism",
    "privacy_loss_z",
    "privacy_loss_batch",
    "expected_privacy_loss",
    "privacy_loss_bound",
    "exponential_mechanism",
    "dp_select",
]
