import numpy as np
import pytest

from flatlab.sequences import SignSequence

BARKER_13 = "+-+-++--+++++"
BARKER_11 = "+-++-+++---"


@pytest.fixture
def barker13():
    return SignSequence.from_string(BARKER_13)


@pytest.fixture
def barker11():
    return SignSequence.from_string(BARKER_11)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def brute_autocorr(b):
    """Loop oracle: c_k = sum_j b_j b_{j+k}."""
    b = [int(x) for x in b]
    n = len(b)
    return [sum(b[j] * b[j + k] for j in range(n - k)) for k in range(n)]


def horner(coeffs, scale, z):
    acc = 0j
    for a in reversed(list(coeffs)):
        acc = acc * z + a
    return scale * acc


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
