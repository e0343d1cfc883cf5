import math

import numpy as np
import pytest

from postselcat import CatParams, MeasurementParams

DEFAULT_PHI = 7 * math.pi / 9


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def strong_meas():
    return MeasurementParams(theta=math.pi / 2, phi=DEFAULT_PHI, gamma=2.0)


@pytest.fixture
def even_cat():
    return CatParams(1.0, 0.0, 0.0)


def random_state(rng, dim, support=None):
    support = support or dim // 2
    v = np.zeros(dim, dtype=complex)
    v[:support] = rng.normal(size=support) + 1j * rng.normal(size=support)
    return v / np.linalg.norm(v)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
