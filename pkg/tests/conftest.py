"""
Shared test fixtures for the dpgauss test suite.
Kept lightweight - only common fixtures belong here.
"""

import os
from fractions import Fraction

import numpy as np
import pytest

from dpgauss.approxdp.estimators import RobustSettings
from dpgauss.core.models import GaussianParams, PsdMatrix
from dpgauss.core.sampling import make_rng, sample_gaussian
from dpgauss.mechanisms.budget import PrivacyBudget


@pytest.fixture(autouse=True)
def _skip_slow(request):
    """Monte-Carlo checks only run with DPGAUSS_RUN_SLOW=1"""
    marker = request.node.get_closest_marker("slow")
    if marker and os.getenv("DPGAUSS_RUN_SLOW") != "1":
        pytest.skip("Skipping slow test in fast mode")


@pytest.fixture(autouse=True)
def _quiet_environment(monkeypatch, tmp_path):
    """Keep log files and default outputs inside the test's tmp dir"""
    monkeypatch.setenv("DPGAUSS_LOG_TO_FILE", "false")
    monkeypatch.setenv("DPGAUSS_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("DPGAUSS_OUT_DIR", str(tmp_path / "reports"))


@pytest.fixture
def rng():
    """Seeded Philox stream"""
    return make_rng(1234)


@pytest.fixture
def standard_params():
    """N(0, I₂)"""
    return GaussianParams(np.zeros(2), PsdMatrix.identity(2))


@pytest.fixture
def gaussian_data(standard_params):
    """2000 points from N(0, I₂)"""
    return sample_gaussian(standard_params, 2000, make_rng(7))


@pytest.fixture
def robust_budget():
    """(2.7, 0.3): each third stays inside the Gaussian mechanism's ε < 1 range"""
    return PrivacyBudget(Fraction(27, 10), Fraction(3, 10))


@pytest.fixture
def robust_settings():
    """Desk-scale constants so the robust pipelines accept at a few thousand points"""
    return RobustSettings(c_l=1.0, c_delta=0.1, c_mu=0.001, c_sigma=1e-4)


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "out"
    path.mkdir()
    return path
