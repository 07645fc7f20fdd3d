"""Finite-window correlation diagnostics for bounded sequences.

Correlations use the overlap convention
``gamma(k) = (1/N) sum_{n < N-k} x_{n+k} conj(x_n)``: the prefactor stays 1/N
rather than 1/(N-k).  Verdicts only compare finite-window values with a
3/sqrt(N) band; nothing here claims that a limit exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import ValidationError, as_1d, check_int, coefficients_of
from .polycore import NormalizedPolynomial, evaluate_at_roots


@dataclass(frozen=True)
class CorrelationFunction:
    gamma: np.ndarray
    window: int
    deltas: np.ndarray
    converged_flags: np.ndarray

    def at(self, k: int) -> complex:
        """``gamma(k)`` with ``gamma(-k) = conj(gamma(k))``."""
        return self.gamma[k] if k >= 0 else np.conj(self.gamma[-k])


def _correlations(x: np.ndarray, K: int) -> np.ndarray:
    N = x.size
    L = 1 << (2 * N - 1).bit_length()
    f = np.fft.fft(x, L)
    # inverse of |f|^2 gives sum_n x_{n+k} conj(x_n) at index k
    raw = np.fft.ifft(f * np.conj(f))[: K + 1]
    if not np.iscomplexobj(x):
        raw = raw.real
    return raw / N


def wiener_correlations(x, K: int) -> CorrelationFunction:
    """Correlations ``gamma(0..K)`` on the window plus their drift from the half window.

    A lag is flagged stable when the full and half window values differ by
    at most ``3 / sqrt(N/2)``.
    """
    x = as_1d(x, "x")
    x = x.astype(np.complex128) if np.iscomplexobj(x) else x.astype(np.float64)
    N = x.size
    K = check_int(K, "K", minimum=0)
    if K >= N:
        raise ValidationError(f"max lag K = {K} must be below the window length N = {N}")
    gamma = _correlations(x, K)
    half = N // 2
    if half > K:
        deltas = np.abs(gamma - _correlations(x[:half], K))
        flags = deltas <= 3.0 / math.sqrt(half)
    else:
        deltas = np.full(K + 1, np.inf)
        flags = np.zeros(K + 1, dtype=bool)
    return CorrelationFunction(gamma, N, deltas, flags)


def centered_bits(seq) -> np.ndarray:
    """``eta_j - 1/2`` for a sign or 0/1 sequence (signs map through eta = (eps+1)/2)."""
    from .sequences import BinarySequence

    if isinstance(seq, BinarySequence):
        return seq.bits - 0.5
    a = np.asarray(coefficients_of(seq))
    if np.all((a == 0) | (a == 1)) and not np.any(a == -1):
        return a - 0.5
    return a / 2.0


def spectral_fourier_check(x, K: int) -> list[dict]:
    """Compare ``gamma(k)``, k = 1..K, of the centered bits with zero.

    A Lebesgue multiple has ``gamma(k) = 0`` for every k >= 1.  A lag is
    ``consistent`` when ``|gamma(k)|`` is within the 3/sqrt(N) band widened by
    the half-window drift.
    """
    K = check_int(K, "K", minimum=1)
    y = centered_bits(x)
    corr = wiener_correlations(y, K)
    band = 3.0 / math.sqrt(corr.window)
    rows = []
    for k in range(1, K + 1):
        g = float(np.real(corr.gamma[k]))
        drift = float(corr.deltas[k]) if np.isfinite(corr.deltas[k]) else 0.0
        verdict = "consistent" if abs(g) <= band + drift else "inconsistent"
        rows.append({"lag": k, "gamma": g, "band": band, "drift": drift, "verdict": verdict})
    return rows


def periodogram(x, M: int) -> np.ndarray:
    """``|N^{-1/2} sum x_n e^{-2 pi i n j / M}|^2`` for ``j = 0..M-1`` (M >= N).

    Entry j is the power at frequency j/M, so ``x_n = e(n theta)`` peaks at
    ``j / M ~ theta``.  For real x this is ``|P(xi_{M,j})|^2`` itself.
    """
    x = as_1d(x, "x")
    N = x.size
    M = check_int(M, "M", minimum=N)
    # sum x_n conj(xi)^n = conj(sum conj(x_n) xi^n)
    poly = NormalizedPolynomial(np.conj(x).astype(np.complex128) if np.iscomplexobj(x) else x.astype(np.float64),
                                1.0 / math.sqrt(N))
    return np.abs(evaluate_at_roots(poly, M).values) ** 2
