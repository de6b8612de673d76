"""tests/conftest.py for bessel_multipliers."""

import os
from pathlib import Path

import numpy as np
import pytest

from bessel_multipliers.tolerance_config import DEFAULT_TOLERANCES


# The acceptance sweeps take a while; run them with BM_RUN_E2E=1.
collect_ignore = [] if os.environ.get("BM_RUN_E2E") == "1" else ["e2e_tests"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def tol():
    return DEFAULT_TOLERANCES


@pytest.fixture
def reference_files():
    return Path(__file__).parent / "integration_tests" / "reference_files"
