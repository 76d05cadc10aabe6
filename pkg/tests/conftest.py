import numpy as np
import pytest

from projstg.linmodel import DesignSpec, generate_dataset, generate_signal


class ConstantNormal:
    """Stands in for a Generator whose normal draws are all ``value``."""

    def __init__(self, value=0.0):
        self.value = value

    def standard_normal(self, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value, dtype=float)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def gaussian_problem(N, D, K, sigma, seed):
    r = np.random.default_rng(seed)
    signal = generate_signal(D, K, r)
    return generate_dataset(DesignSpec("GaussianIID", N, D), signal, sigma, r)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
