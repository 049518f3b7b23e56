"""One-sided Clopper-Pearson bounds on a binomial tail frequency"""

from scipy.stats import beta

from ..core.constants import AUDIT_CONFIDENCE
from .reporters import Verdict


def clopper_pearson_lower(successes: int, trials: int, confidence: float = AUDIT_CONFIDENCE) -> float:
    """One-sided lower confidence bound on the success probability"""
    if successes <= 0:
        return 0.0
    return float(beta.ppf(1.0 - confidence, successes, trials - successes + 1))


def clopper_pearson_upper(successes: int, trials: int, confidence: float = AUDIT_CONFIDENCE) -> float:
    """One-sided upper confidence bound on the success probability"""
    if successes >= trials:
        return 1.0
    return float(beta.ppf(confidence, successes + 1, trials - successes))


def tail_verdict(successes: int, trials: int, delta: float, confidence: float = AUDIT_CONFIDENCE) -> Verdict:
    """
    violated when the lower bound exceeds δ, consistent when the upper bound
    is within δ, inconclusive otherwise
    """
    if clopper_pearson_lower(successes, trials, confidence) > delta:
        return Verdict.VIOLATED
    if clopper_pearson_upper(successes, trials, confidence) <= delta:
        return Verdict.CONSISTENT
    return Verdict.INCONCLUSIVE
