"""Audit package - empirical checks of the mechanisms' (ε, δ) claims"""

from .analyzer import PrivacyAuditor
from .divergence import (HockeyStickEstimate, LaplaceAuditor, audit_laplace,
                         hockey_stick_1d)
from .privacy_loss import GaussianSamplingAuditor, audit_gaussian_sampling
from .reporters import AuditReport, Verdict
from .sensitivity import SolverSensitivityAuditor, audit_solver_sensitivity
from .statistics import (clopper_pearson_lower, clopper_pearson_upper,
                         tail_verdict)

__all__ = [
    "AuditReport",
    "Verdict",
    "PrivacyAuditor",
    "GaussianSamplingAuditor",
    "LaplaceAuditor",
    "SolverSensitivityAuditor",
    "audit_gaussian_sampling",
    "hockey_stick_1d",
    "HockeyStickEstimate",
    "audit_laplace",
    "audit_solver_sensitivity",
    "clopper_pearson_lower",
    "clopper_pearson_upper",
    "tail_verdict",
]
