import numpy as np
import pytest

from exotela import ElasticityTensor

UTI_EXAMPLE = np.array([
    [350.0, 200.0, 250.0, 0.0, 0.0, 0.0],
    [200.0, 350.0, 250.0, 0.0, 0.0, 0.0],
    [250.0, 250.0, 300.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 60.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 60.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 120.0],
])

IDTI_EXAMPLE = np.array([
    [350.0, 200.0, 250.0, 0.0, 0.0, 0.0],
    [200.0, 350.0, 250.0, 0.0, 0.0, 0.0],
    [250.0, 250.0, 450.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 150.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 150.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 150.0],
])

# compliance
IYTI_EXAMPLE = np.array([
    [10.0, -2.0, -3.0, 0.0, 0.0, 0.0],
    [-2.0, 10.0, -3.0, 0.0, 0.0, 0.0],
    [-3.0, -3.0, 10.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 13.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 13.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 12.0],
])

_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def uti_example():
    return ElasticityTensor(UTI_EXAMPLE)


@pytest.fixture
def idti_example():
    return ElasticityTensor(IDTI_EXAMPLE)


@pytest.fixture
def iyti_example():
    return ElasticityTensor(IYTI_EXAMPLE)
