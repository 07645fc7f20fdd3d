import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flatlab._validation import ValidationError
from flatlab.morse import thue_morse
from flatlab.spectral import centered_bits, periodogram, spectral_fourier_check, wiener_correlations


def loop_gamma(x, k):
    N = len(x)
    return sum(x[n + k] * np.conj(x[n]) for n in range(N - k)) / N


def test_all_ones():
    corr = wiener_correlations(np.ones(50), 10)
    assert np.allclose(corr.gamma, [(50 - k) / 50 for k in range(11)])


def test_matches_loop_oracle_complex(rng):
    x = rng.normal(size=40) + 1j * rng.normal(size=40)
    corr = wiener_correlations(x, 7)
    for k in range(8):
        assert corr.gamma[k] == pytest.approx(loop_gamma(x, k))
    assert corr.at(-3) == pytest.approx(np.conj(corr.gamma[3]))
    assert corr.gamma[0].imag == pytest.approx(0, abs=1e-12)


def test_lag_error():
    with pytest.raises(ValidationError):
        wiener_correlations(np.ones(5), 5)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=-5, max_value=5), min_size=2, max_size=80))
def test_cauchy_schwarz(values):
    x = np.array(values)
    corr = wiener_correlations(x, len(values) - 1)
    assert np.all(np.abs(corr.gamma) <= corr.gamma[0] + 1e-9)


def test_thue_morse_lag_one():
    g19 = wiener_correlations(thue_morse(1 << 19).astype(float), 1).gamma[1]
    g20 = wiener_correlations(thue_morse(1 << 20).astype(float), 1).gamma[1]
    assert abs(g20 + 1 / 3) < 0.01 and abs(g19 - g20) < 0.01


def test_random_signs_inside_band():
    rng = np.random.default_rng(20240601)
    N = 1 << 20
    corr = wiener_correlations(rng.choice([-1.0, 1.0], size=N), 64)
    assert np.all(np.abs(corr.gamma[1:]) <= 3 / math.sqrt(N))
    assert corr.converged_flags.all()


def test_fourier_check_examples():
    rng = np.random.default_rng(4)
    rows = spectral_fourier_check(rng.integers(0, 2, size=1 << 16), 16)
    assert all(r["verdict"] == "consistent" for r in rows)
    rows = spectral_fourier_check(np.ones(4096, dtype=int), 4)
    assert all(r["verdict"] == "inconsistent" for r in rows)
    assert rows[0]["gamma"] == pytest.approx(0.25 * 4095 / 4096)
    tm = (thue_morse(1 << 16) + 1) // 2
    assert spectral_fourier_check(tm, 1)[0]["verdict"] == "inconsistent"


def test_verdicts_invariant_under_sign_flip():
    x = thue_morse(1 << 12)
    a = spectral_fourier_check(x, 8)
    b = spectral_fourier_check(-x, 8)
    assert [r["verdict"] for r in a] == [r["verdict"] for r in b]


def test_centered_bits():
    assert centered_bits(np.array([1, 0, 1])).tolist() == [0.5, -0.5, 0.5]
    assert centered_bits(np.array([1, -1])).tolist() == [0.5, -0.5]


def test_periodogram(rng):
    N = 64
    p = periodogram(np.ones(N), 256)
    assert p[0] == pytest.approx(N) and p.argmax() == 0
    theta = 0.3
    x = np.exp(2j * np.pi * theta * np.arange(N))
    p = periodogram(x, 1000)
    assert abs(p.argmax() / 1000 - theta) < 2 / N
    for x in (rng.choice([-1.0, 1.0], size=300), rng.normal(size=77) + 1j * rng.normal(size=77)):
        p = periodogram(x, 1024)
        assert np.all(p >= 0)
        assert p.mean() == pytest.approx(wiener_correlations(x, 0).gamma[0].real, rel=1e-8)
    with pytest.raises(ValidationError):
        periodogram(np.ones(10), 5)
