"""Polynomials on the unit circle: evaluation at roots of unity, norms, flatness.

Every polynomial is stored as a coefficient vector ``a_0..a_{q-1}`` plus a
positive scale ``s``; the represented function is ``s * sum_j a_j z^j``.
Evaluation on the M-th roots of unity ``xi_{M,j} = exp(2 pi i j / M)`` uses a
chirp (Bluestein) convolution so that any grid size works, primes included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import ValidationError, check_int, check_positive
from .sequences import BinarySequence, SignSequence

#: per-sample floor applied to log|P| before averaging (log of exp(-40))
MAHLER_LOG_FLOOR = -40.0


class DegreeOverflowError(ValidationError):
    """Grid too small for the polynomial degree where exactness is required."""


class ParityError(ValidationError):
    """An identity was requested at a coefficient count of the wrong parity."""


@dataclass(frozen=True)
class NormalizedPolynomial:
    coeffs: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coeffs))
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("polynomial needs at least one coefficient")
        if not np.issubdtype(arr.dtype, np.complexfloating):
            arr = arr.astype(np.float64)
        object.__setattr__(self, "coeffs", arr)
        check_positive(self.scale, "scale")

    @classmethod
    def littlewood(cls, seq: SignSequence) -> "NormalizedPolynomial":
        return cls(seq.coeffs.astype(np.float64), 1.0 / math.sqrt(seq.q))

    @classmethod
    def newman_bourgain(cls, seq: BinarySequence) -> "NormalizedPolynomial":
        if seq.m == 0:
            raise ValidationError("Newman-Bourgain normalization needs at least one nonzero bit")
        return cls(seq.bits.astype(np.float64), 1.0 / math.sqrt(seq.m))

    @classmethod
    def dirichlet(cls, q: int) -> "NormalizedPolynomial":
        """The normalized Dirichlet kernel ``D_q = q^{-1/2} sum_{j<q} z^j``."""
        q = check_int(q, "q", minimum=1)
        return cls(np.ones(q), 1.0 / math.sqrt(q))

    @classmethod
    def from_sequence(cls, seq) -> "NormalizedPolynomial":
        if isinstance(seq, SignSequence):
            return cls.littlewood(seq)
        if isinstance(seq, BinarySequence):
            return cls.newman_bourgain(seq)
        if isinstance(seq, NormalizedPolynomial):
            return seq
        raise ValidationError(f"cannot build a polynomial from {type(seq).__name__}")

    @property
    def q(self) -> int:
        """Coefficient count (degree + 1)."""
        return int(self.coeffs.size)

    @property
    def degree(self) -> int:
        return self.q - 1

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.coeffs) or bool(np.all(self.coeffs.imag == 0))

    def scaled_coeffs(self) -> np.ndarray:
        return self.scale * self.coeffs

    def __call__(self, z):
        """Direct (Horner) evaluation at arbitrary points."""
        z = np.asarray(z, dtype=np.complex128)
        acc = np.zeros_like(z)
        for a in self.coeffs[::-1]:
            acc = acc * z + a
        return self.scale * acc


@dataclass(frozen=True)
class UnitGrid:
    M: int
    values: np.ndarray
    negated: np.ndarray | None = None


# -- transforms ---------------------------------------------------------------


def _next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length()


def _chirp(M: int, count: int, sign: float) -> np.ndarray:
    k = np.arange(count, dtype=np.int64)
    # k^2 mod 2M keeps the phase argument small and exact
    return np.exp(sign * 1j * np.pi * ((k * k) % (2 * M)) / M)


def roots_transform(a: np.ndarray, M: int) -> np.ndarray:
    """Return ``sum_k a_k xi_{M,j}^k`` for ``j = 0..M-1``.

    ``a`` must have at most M entries.  Bluestein's identity
    ``jk = (j^2 + k^2 - (j-k)^2) / 2`` turns the length-M transform into a
    linear convolution evaluated with power-of-two FFTs.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.size
    if n > M:
        raise DegreeOverflowError(f"{n} coefficients do not fit a grid of size {M}")
    if M == 1:
        return np.array([a.sum()])
    w = _chirp(M, max(M, n), +1.0)
    L = _next_pow2(M + n - 1)
    x = np.zeros(L, dtype=np.complex128)
    x[:n] = a * w[:n]
    h = np.zeros(L, dtype=np.complex128)
    h[:M] = np.conj(w[:M])
    if n > 1:
        h[L - n + 1 :] = np.conj(w[1:n][::-1])
    y = np.fft.ifft(np.fft.fft(x) * np.fft.fft(h))[:M]
    return w[:M] * y


def _fold(a: np.ndarray, M: int) -> np.ndarray:
    """Alias coefficients mod M (z^k == z^{k mod M} on the M-th roots)."""
    if a.size <= M:
        return a
    out = np.zeros(M, dtype=np.result_type(a, np.float64))
    np.add.at(out, np.arange(a.size) % M, a)
    return out


def evaluate_at_roots(
    poly: NormalizedPolynomial, M: int, include_negated: bool = False, exact: bool = False
) -> UnitGrid:
    """Sample ``poly`` at the M-th roots of unity (and optionally at their negatives).

    With ``exact=True`` the degree must be below M, otherwise the grid cannot
    carry the identities downstream code relies on.
    """
    M = check_int(M, "M", minimum=1)
    if exact and poly.degree >= M:
        raise DegreeOverflowError(f"degree {poly.degree} needs a grid of at least {poly.degree + 1} points")
    a = poly.coeffs
    if include_negated:
        # -xi_{M,j} = xi_{2M, 2j+M}: one transform of length 2M
        both = poly.scale * roots_transform(_fold(a, 2 * M), 2 * M)
        values = both[0::2]
        negated = both[(2 * np.arange(M) + M) % (2 * M)]
        return UnitGrid(M, values, negated)
    return UnitGrid(M, poly.scale * roots_transform(_fold(a, M), M))


def _shifted_grid_values(poly: NormalizedPolynomial, M: int) -> np.ndarray:
    """Values at the half-step grid ``exp(2 pi i (j + 1/2) / M)``."""
    both = roots_transform(_fold(poly.coeffs, 2 * M), 2 * M)
    return poly.scale * both[1::2]


# -- exact sampling identities ----------------------------------------------


def l2_norm_sq_sampled(grid: UnitGrid, degree: int | None = None) -> float:
    """Mean of ``|P|^2`` over a grid of q points; equals the squared L2 norm when degree < q."""
    if degree is not None and degree >= grid.M:
        raise DegreeOverflowError(f"grid of size {grid.M} aliases a degree-{degree} polynomial")
    return float(np.mean(np.abs(grid.values) ** 2))


def l4_norm_4_exact(poly: NormalizedPolynomial) -> float:
    """Fourth power of the L4 norm from the two q-point grids ``xi`` and ``-xi``.

    Valid for real coefficients and an odd coefficient count q: then the
    average of ``|P|^4`` over both grids is exactly ``int |P|^4``.
    """
    if not poly.is_real:
        raise ValidationError("the two-grid fourth-moment identity needs real coefficients")
    q = poly.q
    if q % 2 == 0:
        raise ParityError(f"coefficient count q = {q} is even; the negated-grid sum flips sign")
    grid = evaluate_at_roots(poly, q, include_negated=True)
    total = np.sum(np.abs(grid.values) ** 4) + np.sum(np.abs(grid.negated) ** 4)
    return float(total / (2 * q))


# -- estimated norms ----------------------------------------------------------


@dataclass(frozen=True)
class NormEstimate:
    value: float
    bracket: float
    grid_size: int

    def __float__(self) -> float:
        return self.value


class UseMahlerMeasure(ValidationError):
    """alpha <= 0 was requested; the Mahler measure is the alpha -> 0 limit."""


def _grid_size(poly: NormalizedPolynomial, oversample: float) -> int:
    return int(math.ceil(oversample * poly.q))


def lp_norm_estimate(poly: NormalizedPolynomial, alpha: float, oversample: int = 4) -> NormEstimate:
    """Riemann-sum estimate of ``int |P|^alpha`` (the alpha-th power of the L^alpha norm).

    The bracket is the change between grids of size M and 2M.
    """
    alpha = float(alpha)
    if alpha <= 0:
        raise UseMahlerMeasure("alpha must be > 0; use mahler_measure for the alpha -> 0 limit")
    oversample = check_int(oversample, "oversample", minimum=2)
    M = _grid_size(poly, oversample)
    coarse = float(np.mean(np.abs(evaluate_at_roots(poly, M).values) ** alpha))
    fine = float(np.mean(np.abs(evaluate_at_roots(poly, 2 * M).values) ** alpha))
    return NormEstimate(coarse, abs(coarse - fine), M)


def _log_mean(values: np.ndarray) -> float:
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(values))
    return float(np.mean(np.maximum(logs, MAHLER_LOG_FLOOR)))


def mahler_measure(poly: NormalizedPolynomial, oversample: int = 16) -> NormEstimate:
    """``exp`` of the grid mean of ``log|P|`` with per-sample clipping at ``exp(-40)``.

    Samples sit on the half-step grid ``exp(2 pi i (j + 1/2)/M)`` with M even,
    which never contains z = 1 or z = -1 where +/-1 polynomials often vanish.
    """
    if not np.any(poly.coeffs != 0):
        raise ValidationError("the Mahler measure of the zero polynomial is undefined")
    oversample = check_int(oversample, "oversample", minimum=1)
    M = _grid_size(poly, oversample)
    M += M % 2
    coarse = math.exp(_log_mean(_shifted_grid_values(poly, M)))
    fine = math.exp(_log_mean(_shifted_grid_values(poly, 2 * M)))
    return NormEstimate(coarse, abs(coarse - fine), M)


# -- flatness -------------------------------------------------------------------


@dataclass(frozen=True)
class FlatnessReport:
    l4_fourth_power: float
    square_l2_defect: float
    merit_factor: float
    mahler: float
    sup_deviation: float
    mean_abs_deviation: float

    def to_dict(self) -> dict:
        return {
            "l4_fourth_power": self.l4_fourth_power,
            "square_l2_defect": self.square_l2_defect,
            "merit_factor": self.merit_factor,
            "mahler": self.mahler,
            "sup_deviation": self.sup_deviation,
            "mean_abs_deviation": self.mean_abs_deviation,
        }


def l4_fourth_power_exact(seq: SignSequence | BinarySequence) -> Fraction:
    """``||P||_4^4`` as a rational number, from the integer autocorrelations."""
    from .seqstats import autocorrelation

    prof = autocorrelation(seq)
    c0 = int(prof.c[0])
    if c0 == 0:
        raise ValidationError("all-zero sequence has no L2 normalization")
    return Fraction(c0 * c0 + 2 * prof.sidelobe_energy, c0 * c0)


def merit_factor(seq: SignSequence | BinarySequence, exact: bool = False):
    """``1 / (||P||_4^4 - 1)``; infinite (``math.inf``) for a defect of zero."""
    defect = l4_fourth_power_exact(seq) - 1
    if defect == 0:
        return math.inf
    return 1 / defect if exact else float(1 / defect)


def flatness_report(seq: SignSequence | BinarySequence, oversample: int = 8) -> FlatnessReport:
    """Exact L4 defect and merit factor plus grid-based deviation statistics."""
    l4 = l4_fourth_power_exact(seq)
    defect = l4 - 1
    poly = NormalizedPolynomial.from_sequence(seq)
    M = _grid_size(poly, oversample)
    dev = np.abs(np.abs(evaluate_at_roots(poly, M).values) - 1.0)
    return FlatnessReport(
        l4_fourth_power=float(l4),
        square_l2_defect=float(defect),
        merit_factor=math.inf if defect == 0 else float(1 / defect),
        mahler=mahler_measure(poly, oversample).value,
        sup_deviation=float(dev.max()),
        mean_abs_deviation=float(dev.mean()),
    )


def square_flatness_defect_quadrature(poly: NormalizedPolynomial, oversample: int = 4) -> NormEstimate:
    """``int ||P|^2 - 1|^2`` by grid quadrature (exact once M > 2 * degree)."""
    oversample = check_int(oversample, "oversample", minimum=2)
    M = _grid_size(poly, oversample)

    def mean_on(size: int) -> float:
        v = evaluate_at_roots(poly, size).values
        return float(np.mean((np.abs(v) ** 2 - 1.0) ** 2))

    coarse, fine = mean_on(M), mean_on(2 * M)
    return NormEstimate(coarse, abs(coarse - fine), M)


def c_flatness(poly: NormalizedPolynomial, c: float, oversample: int = 8) -> dict:
    """Grid statistics of ``||P| - c|``: the finite-degree face of c-flatness."""
    c = float(c)
    M = _grid_size(poly, oversample)
    dev = np.abs(np.abs(evaluate_at_roots(poly, M).values) - c)
    return {"c": c, "grid_size": M, "sup_deviation": float(dev.max()), "mean_abs_deviation": float(dev.mean())}
