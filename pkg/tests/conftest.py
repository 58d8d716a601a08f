import sys

import numpy as np
import pytest

from services.oracle.report import seeded_rng
from shared.utils.logger import setup_logging

# Desk-scale shapes used across the operation suites
SHAPES = [(2, 3), (3, 2, 2), (2, 3, 2, 2)]


@pytest.fixture(autouse=True)
def quiet_logging():
    setup_logging("tests", log_level="CRITICAL", stream=sys.__stderr__)
    yield
    # entry points may have bound a captured stream
    setup_logging("tests", log_level="CRITICAL", stream=sys.__stderr__)


@pytest.fixture
def rng() -> np.random.Generator:
    return seeded_rng(20240611)


def rel_err(expected, actual) -> float:
    expected = np.asarray(expected, dtype=np.float64)
    actual = np.asarray(actual, dtype=np.float64)
    scale = np.max(np.abs(expected)) if expected.size else 0.0
    diff = np.max(np.abs(expected - actual)) if expected.size else 0.0
    return float(diff / scale) if scale > 0 else float(diff)
