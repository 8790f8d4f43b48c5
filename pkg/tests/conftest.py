import numpy as np
import pytest
from hypothesis import settings

from mumkit import tolerances

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20141017)


@pytest.fixture(autouse=True)
def _restore_tolerances():
    yield
    tolerances.reset()


def random_hermitian(rng, d):
    x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (x + x.conj().T) / 2


def random_pure(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_mixed(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    r = g @ g.conj().T
    return r / np.trace(r).real


def pytest_terminal_summary(terminalreporter):
    import sys

    log = sys.modules.get("acceptance_log")
    if log is None or not log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in log.RESULTS:
        terminalreporter.write_line(line)
