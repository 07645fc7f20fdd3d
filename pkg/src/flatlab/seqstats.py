"""Aperiodic autocorrelations and the statistics built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import ValidationError, as_1d, check_int, coefficients_of
from .sequences import BinarySequence, SignSequence

#: above this length autocorrelations go through an FFT and are rounded
DIRECT_LIMIT = 4096


@dataclass(frozen=True)
class AutocorrelationProfile:
    c: np.ndarray
    sidelobe_energy: int
    fold_energy: int

    @property
    def q(self) -> int:
        return int(self.c.size)

    def at(self, k: int) -> int:
        """``c_k`` with the convention ``c_{-k} = c_k`` and zero beyond the length."""
        k = abs(int(k))
        return int(self.c[k]) if k < self.c.size else 0


def _direct_autocorr(b: np.ndarray) -> np.ndarray:
    full = np.correlate(b, b, mode="full")
    return full[b.size - 1 :]


def _fft_autocorr(b: np.ndarray) -> np.ndarray:
    n = b.size
    L = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(b.astype(np.float64), L)
    c = np.fft.irfft(f * np.conj(f), L)[:n]
    return np.rint(c).astype(np.int64)


def autocorrelation_array(b, method: str = "auto") -> np.ndarray:
    """``c_k = sum_j b_j b_{j+k}`` for ``0 <= k < len(b)`` on an integer vector."""
    b = as_1d(b, "sequence").astype(np.int64)
    if method == "auto":
        method = "direct" if b.size <= DIRECT_LIMIT else "fft"
    if method == "direct":
        return _direct_autocorr(b)
    if method == "fft":
        return _fft_autocorr(b)
    raise ValidationError(f"unknown autocorrelation method {method!r}")


def autocorrelation(seq, method: str = "auto") -> AutocorrelationProfile:
    c = autocorrelation_array(coefficients_of(seq), method)
    side = c[1:]
    sidelobe = int(np.dot(side, side))
    fold = int(np.dot(side, side[::-1]))
    return AutocorrelationProfile(c, sidelobe, fold)


def sidelobe_energy(seq) -> int:
    return autocorrelation(seq).sidelobe_energy


def l4_from_autocorrelation(seq: SignSequence, exact: bool = False):
    """``||P||_4^4 = 1 + 2 E / q^2`` where E is the sidelobe energy."""
    if not isinstance(seq, SignSequence):
        seq = SignSequence(coefficients_of(seq))
    val = 1 + Fraction(2 * sidelobe_energy(seq), seq.q**2)
    return val if exact else float(val)


def quadratic_root_sums(seq: BinarySequence) -> tuple[float, float]:
    """Fourth-moment sums of ``Q = (2/sqrt q) sum eta_j z^j`` over ``xi`` and ``-xi``.

    Returns ``(s_plus, s_minus)`` with ``s_plus = (1/2q) sum |Q(xi_j)|^4`` and
    ``s_minus = (1/2q) sum |Q(-xi_j)|^4``, both computed from the bit
    autocorrelations.  For odd q their sum is ``||Q||_4^4``.
    """
    if not isinstance(seq, BinarySequence):
        seq = BinarySequence(coefficients_of(seq))
    prof = autocorrelation(seq)
    q = seq.q
    c0 = int(prof.c[0])
    sign = -1 if q % 2 else 1
    # Q-scale autocorrelations are 4/q times the bit ones; the sums are quadratic
    unit = Fraction(16, q * q)
    s_plus = Fraction(c0 * c0 + 2 * prof.fold_energy + 2 * prof.sidelobe_energy, 2) * unit
    s_minus = Fraction(c0 * c0 + 2 * sign * prof.fold_energy + 2 * prof.sidelobe_energy, 2) * unit
    return float(s_plus), float(s_minus)


# -- finite sets -----------------------------------------------------------------


@dataclass(frozen=True)
class SetSpectrum:
    r: int
    counts: np.ndarray
    dft: np.ndarray
    balanced: bool = False


def set_dft(A, r: int, balanced: bool = False) -> SetSpectrum:
    """Residue counts of ``A`` mod r and ``DF_r(l) = (1/r) sum_j A(j) xi_{r, j l}``.

    In balanced mode ``#A`` is subtracted from every count before the
    transform; only the l = 0 coefficient changes.
    """
    r = check_int(r, "r", minimum=2)
    A = np.asarray(list(A) if not isinstance(A, np.ndarray) else A, dtype=np.int64).ravel()
    counts = np.bincount(np.mod(A, r), minlength=r).astype(np.int64)
    f = counts - A.size if balanced else counts
    # ifft already carries the 1/r factor and the e^{+2 pi i} sign
    return SetSpectrum(r, counts, np.fft.ifft(f.astype(np.float64)), balanced)


def h_set_densities(H, q: int, lags) -> list[dict]:
    """Finite-window densities of ``H``, ``H + l`` and their intersection in ``[0, q)``.

    Values are exact fractions; the window is part of every row.
    """
    q = check_int(q, "q", minimum=1)
    ind = np.zeros(q, dtype=bool)
    H = np.asarray(list(H) if not isinstance(H, np.ndarray) else H, dtype=np.int64).ravel()
    if H.size and (H.min() < 0 or H.max() >= q):
        raise ValidationError("H must lie inside the window [0, q)")
    ind[H] = True
    d_H = Fraction(int(ind.sum()), q)
    rows = []
    for ell in lags:
        ell = check_int(ell, "lag", minimum=0)
        shifted = np.zeros(q, dtype=bool)
        if ell < q:
            shifted[ell:] = ind[: q - ell]
        rows.append(
            {
                "lag": ell,
                "window": q,
                "d_H": d_H,
                "d_H_shift": Fraction(int(shifted.sum()), q),
                "d_intersection": Fraction(int((ind & shifted).sum()), q),
                "d_symmetric_difference": Fraction(int((ind ^ shifted).sum()), q),
            }
        )
    return rows


def pairwise_independence_scan(seq, max_lag: int, window: int) -> list[dict]:
    """Normalized lag products ``(1/N) sum_{j<N} eps_j eps_{j+l}`` for ``l = 1..L``.

    Terms with ``j + l`` past the end of the sequence are dropped; the
    normalization stays 1/N.  Each row carries the 3/sqrt(N) null band.
    """
    eps = coefficients_of(seq).astype(np.int64)
    N = check_int(window, "window", minimum=1, maximum=eps.size)
    L = check_int(max_lag, "max_lag", minimum=1, maximum=N - 1)
    band = 3.0 / math.sqrt(N)
    rows = []
    for ell in range(1, L + 1):
        stop = min(N, eps.size - ell)
        value = int(np.dot(eps[:stop], eps[ell : ell + stop])) / N
        rows.append({"lag": ell, "value": value, "band": band, "within_band": abs(value) <= band})
    return rows
