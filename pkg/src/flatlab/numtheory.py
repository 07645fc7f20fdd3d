"""Liouville and Moebius tables, their partial sums, and experiments built on them.

The sieve computes the smallest-prime-factor array once and then peels one
prime off every integer per vectorized pass; the number of passes is the
largest Omega(n) <= N, about log2(N).
"""

from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._validation import ResourceCapError, ValidationError, check_int, check_positive
from .polycore import NormalizedPolynomial, lp_norm_estimate
from .seqstats import autocorrelation_array

SIEVE_CAP = 1 << 30
TABLE_MAGIC = b"FLSV"
TABLE_VERSION = 1
_HEADER = struct.Struct("<4sIQ")


@dataclass(frozen=True)
class SieveTable:
    """``lam[n]``, ``mu[n]``, ``mertens[n]``, ``lambda_sum[n]`` for 1 <= n <= N; index 0 is unused."""

    N: int
    lam: np.ndarray
    mu: np.ndarray
    mertens: np.ndarray
    lambda_sum: np.ndarray

    @classmethod
    def from_arrays(cls, lam: np.ndarray, mu: np.ndarray) -> "SieveTable":
        lam = np.asarray(lam, dtype=np.int8)
        mu = np.asarray(mu, dtype=np.int8)
        lam[0] = 0
        mu[0] = 0
        return cls(lam.size - 1, lam, mu, np.cumsum(mu, dtype=np.int64), np.cumsum(lam, dtype=np.int64))

    def values(self, which: str) -> np.ndarray:
        if which in ("mu", "μ", "mobius"):
            return self.mu
        if which in ("lambda", "λ", "liouville", "lam"):
            return self.lam
        raise ValidationError(f"unknown arithmetic function {which!r}; use 'mu' or 'lambda'")

    def partial_sums(self, which: str) -> np.ndarray:
        return self.mertens if self.values(which) is self.mu else self.lambda_sum


def smallest_prime_factor(N: int) -> np.ndarray:
    spf = np.zeros(N + 1, dtype=np.int32)
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[:2] = 0
    return spf


def sieve(N: int) -> SieveTable:
    """Exact Liouville and Moebius values up to N with prefix sums."""
    N = check_int(N, "N", minimum=1)
    if N > SIEVE_CAP:
        raise ResourceCapError(f"N = {N} exceeds the sieve cap {SIEVE_CAP}")
    spf = smallest_prime_factor(N)
    cur = np.arange(N + 1, dtype=np.int64)
    omega = np.zeros(N + 1, dtype=np.int8)
    squarefree = np.ones(N + 1, dtype=bool)
    active = np.flatnonzero(cur > 1)
    while active.size:
        p = spf[cur[active]].astype(np.int64)
        nxt = cur[active] // p
        omega[active] += 1
        # p^2 | n exactly when p still divides the cofactor
        squarefree[active[nxt % p == 0]] = False
        cur[active] = nxt
        active = active[nxt > 1]
    lam = np.where(omega % 2 == 0, 1, -1).astype(np.int8)
    mu = np.where(squarefree, lam, 0).astype(np.int8)
    return SieveTable.from_arrays(lam, mu)


# -- binary table format ----------------------------------------------------------
# magic "FLSV", uint32 version, uint64 N, then lambda as N bits (1 -> +1) and
# mu as N 2-bit codes (0 -> 0, 1 -> +1, 2 -> -1), both little-endian packed.


def write_table(table: SieveTable, path: str | Path) -> None:
    lam_bits = (table.lam[1:] > 0).astype(np.uint8)
    codes = np.zeros(table.N, dtype=np.uint8)
    codes[table.mu[1:] == 1] = 1
    codes[table.mu[1:] == -1] = 2
    pad = (-codes.size) % 4
    quads = np.concatenate([codes, np.zeros(pad, dtype=np.uint8)]).reshape(-1, 4)
    mu_bytes = (quads[:, 0] | quads[:, 1] << 2 | quads[:, 2] << 4 | quads[:, 3] << 6).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(TABLE_MAGIC, TABLE_VERSION, table.N))
        fh.write(np.packbits(lam_bits, bitorder="little").tobytes())
        fh.write(mu_bytes.tobytes())


def read_table(path: str | Path) -> SieveTable:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValidationError(f"{path}: truncated sieve table")
    magic, version, N = _HEADER.unpack_from(raw)
    if magic != TABLE_MAGIC:
        raise ValidationError(f"{path}: not a sieve table (bad magic {magic!r})")
    if version != TABLE_VERSION:
        raise ValidationError(f"{path}: unsupported table version {version}")
    body = np.frombuffer(raw, dtype=np.uint8, offset=_HEADER.size)
    n_lam = (N + 7) // 8
    n_mu = (N + 3) // 4
    if body.size != n_lam + n_mu:
        raise ValidationError(f"{path}: expected {n_lam + n_mu} payload bytes, found {body.size}")
    lam_bits = np.unpackbits(body[:n_lam], count=N, bitorder="little")
    mu_bytes = body[n_lam:]
    codes = np.stack([(mu_bytes >> s) & 3 for s in (0, 2, 4, 6)], axis=1).ravel()[:N]
    lam = np.zeros(N + 1, dtype=np.int8)
    lam[1:] = np.where(lam_bits == 1, 1, -1)
    mu = np.zeros(N + 1, dtype=np.int8)
    mu[1:][codes == 1] = 1
    mu[1:][codes == 2] = -1
    return SieveTable.from_arrays(lam, mu)


# -- scans ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundScan:
    which: str
    epsilon: float
    N: int
    checkpoints: np.ndarray
    partial_sums: np.ndarray
    ratios: np.ndarray

    @property
    def max_ratio(self) -> float:
        return float(self.ratios.max())

    def to_dict(self) -> dict:
        return {
            "which": self.which,
            "epsilon": self.epsilon,
            "range": f"1 <= x <= {self.N}",
            "checkpoints": self.checkpoints.tolist(),
            "partial_sums": self.partial_sums.tolist(),
            "ratios": self.ratios.tolist(),
            "max_ratio": self.max_ratio,
            "note": "finite-range ratios only; no asymptotic statement",
        }


def rh_bound_scan(table: SieveTable, which: str = "mu", epsilon: float = 0.1) -> BoundScan:
    """``|S(x)| / x^{1/2 + eps}`` at ``x = floor(N / 2^k)``, where S sums mu or lambda."""
    epsilon = check_positive(epsilon, "epsilon")
    sums = table.partial_sums(which)
    xs = sorted({table.N >> k for k in range(table.N.bit_length()) if table.N >> k >= 1})
    xs = np.array(xs, dtype=np.int64)
    S = sums[xs]
    ratios = np.abs(S) / xs.astype(np.float64) ** (0.5 + epsilon)
    return BoundScan("mu" if table.values(which) is table.mu else "lambda", epsilon, table.N, xs, S, ratios)


def chowla_correlation(table: SieveTable, offsets, N: int) -> dict:
    """``(1/N) sum_{n<=N} prod_i lambda(n + a_i)`` with the 3/sqrt(N) diagnostic band."""
    offsets = [check_int(a, "offset", minimum=0) for a in offsets]
    if not offsets:
        raise ValidationError("at least one offset is required")
    N = check_int(N, "N", minimum=1)
    if N + max(offsets) > table.N:
        raise ValidationError(f"window N + max offset = {N + max(offsets)} exceeds the sieve bound {table.N}")
    prod = np.ones(N, dtype=np.int64)
    for a in offsets:
        prod *= table.lam[1 + a : N + 1 + a]
    value = int(prod.sum()) / N
    band = 3.0 / math.sqrt(N)
    return {"offsets": offsets, "N": N, "value": value, "band": band, "within_band": abs(value) <= band}


def arithmetic_polynomial_norms(table: SieveTable, which: str, N: int, alphas, oversample: int = 4) -> list[dict]:
    """Norms of ``N^{-1/2} sum_{j=1}^N f(j) z^j`` for f = mu or lambda.

    alpha = 2 and 4 carry an exact route from the coefficient autocorrelations
    besides the grid estimate.
    """
    N = check_int(N, "N", minimum=1, maximum=table.N)
    f = table.values(which)[1 : N + 1].astype(np.int64)
    # the z^1 shift does not change any norm on the circle
    poly = NormalizedPolynomial(f.astype(np.float64), 1.0 / math.sqrt(N))
    c = autocorrelation_array(f)
    rows = []
    for alpha in alphas:
        alpha = check_positive(alpha, "alpha")
        est = lp_norm_estimate(poly, alpha, oversample)
        row = {"alpha": alpha, "estimate": est.value, "bracket": est.bracket, "grid_size": est.grid_size, "exact": None}
        if alpha == 2:
            row["exact"] = int(c[0]) / N
        elif alpha == 4:
            row["exact"] = (int(c[0]) ** 2 + 2 * int(np.dot(c[1:], c[1:]))) / N**2
        rows.append(row)
    return rows


# -- moment experiments -------------------------------------------------------------


def pth_moment(coeffs: np.ndarray, p: float) -> float:
    """``|| N^{-1/2} sum a_j z^j ||_p^p``; exact for even p, grid quadrature otherwise."""
    a = np.asarray(coeffs, dtype=np.int64)
    N = a.size
    if p == 2:
        return float(np.dot(a, a)) / N
    if p == 4:
        c = autocorrelation_array(a)
        return (float(c[0]) ** 2 + 2.0 * float(np.dot(c[1:].astype(np.float64), c[1:]))) / N**2
    poly = NormalizedPolynomial(a.astype(np.float64), 1.0 / math.sqrt(N))
    if float(p).is_integer() and int(p) % 2 == 0:
        # |P|^p is a trigonometric polynomial of degree (p/2)(N-1): this grid is exact
        M = int(p) // 2 * (N - 1) + 1
        from .polycore import evaluate_at_roots

        return float(np.mean(np.abs(evaluate_at_roots(poly, M).values) ** p))
    return lp_norm_estimate(poly, p, oversample=8).value


def moment_experiment(model: str, N: int, trials: int, p: float, seed: int, table: SieveTable | None = None) -> dict:
    """Monte-Carlo mean of ``||P||_p^p`` over random or Liouville-window coefficients.

    ``model`` is ``"random-sign"`` (independent fair signs from
    ``numpy.random.default_rng(seed)``) or ``"lambda-shifted"`` (windows
    ``lambda(s+1..s+N)`` of ``table`` at uniformly random starts).  The target
    is ``Gamma(p/2 + 1)``.
    """
    N = check_int(N, "N", minimum=1)
    trials = check_int(trials, "trials", minimum=30)
    p = check_positive(p, "p")
    if seed is None:
        raise ValidationError("a seed is mandatory for reproducible experiments")
    rng = np.random.default_rng(check_int(seed, "seed", minimum=0))
    if not (float(p).is_integer() and int(p) % 2 == 0):
        warnings.warn(f"p = {p} is not an even integer; using grid quadrature (slower, approximate)", stacklevel=2)
    if model == "random-sign":
        draw = lambda: rng.choice(np.array([-1, 1], dtype=np.int64), size=N)  # noqa: E731
    elif model in ("lambda-shifted", "λ-shifted"):
        if table is None:
            raise ValidationError("the lambda-shifted model needs a sieve table")
        if table.N < N:
            raise ValidationError(f"sieve bound {table.N} is shorter than the window N = {N}")
        starts_max = table.N - N

        def draw():
            s = int(rng.integers(0, starts_max + 1))
            return table.lam[s + 1 : s + N + 1].astype(np.int64)

    else:
        raise ValidationError(f"unknown model {model!r}; use 'random-sign' or 'lambda-shifted'")

    samples = np.array([pth_moment(draw(), p) for _ in range(trials)])
    out = {
        "model": "lambda-shifted" if model != "random-sign" else model,
        "N": N,
        "trials": trials,
        "p": p,
        "seed": seed,
        "mean": float(samples.mean()),
        "stderr": float(samples.std(ddof=1) / math.sqrt(trials)),
        "target": math.gamma(p / 2 + 1),
        "exact_expectation": None,
    }
    if model == "random-sign" and p == 4:
        out["exact_expectation"] = 2.0 - 1.0 / N
    elif p == 2:
        out["exact_expectation"] = 1.0
    return out
