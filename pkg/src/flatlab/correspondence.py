"""The Littlewood <-> Newman-Bourgain correspondence and the identities around it.

With ``P = q^{-1/2} sum eps_j z^j`` and ``eta_j = (eps_j + 1)/2``:

* ``P = Q - D`` where ``Q = (2/sqrt q) sum eta_j z^j`` and ``D`` is the Dirichlet kernel,
* ``P`` and ``Q`` agree at every nontrivial q-th root of unity,
* for odd q, ``Q(-xi_k) = 2 / (sqrt q (1 + xi_k)) + P(-xi_k)``.

Each check returns the largest absolute residual between both sides.
"""

from __future__ import annotations

import math

import numpy as np

from ._validation import check_int
from .polycore import NormalizedPolynomial, ParityError, evaluate_at_roots
from .sequences import BinarySequence, ClassViolationError, SignSequence


def _require_littlewood(seq: SignSequence) -> None:
    if not seq.in_littlewood_class():
        raise ClassViolationError("end signs must both be +1 for the correspondence")


def to_nb(seq: SignSequence) -> BinarySequence:
    _require_littlewood(seq)
    return BinarySequence((seq.coeffs + 1) // 2, nb_class=True)


def to_littlewood(seq: BinarySequence) -> SignSequence:
    if not seq.in_nb_class():
        raise ClassViolationError("end bits must both be 1 for the correspondence")
    return SignSequence(2 * seq.bits - 1, littlewood_class=True)


def q_polynomial(seq: SignSequence) -> NormalizedPolynomial:
    """``Q = (2/sqrt q) A`` with ``A = sum eta_j z^j``; deliberately not L2-normalized."""
    return NormalizedPolynomial(((seq.coeffs + 1) // 2).astype(np.float64), 2.0 / math.sqrt(seq.q))


def check_decomposition(seq: SignSequence, grid_size: int) -> float:
    """Residual of ``P = 2 sqrt(m/q) T(P) - D`` on the grid of size ``grid_size``."""
    _require_littlewood(seq)
    grid_size = check_int(grid_size, "grid_size", minimum=1)
    nb = to_nb(seq)
    P = evaluate_at_roots(NormalizedPolynomial.littlewood(seq), grid_size).values
    T = evaluate_at_roots(NormalizedPolynomial.newman_bourgain(nb), grid_size).values
    D = evaluate_at_roots(NormalizedPolynomial.dirichlet(seq.q), grid_size).values
    rhs = 2.0 * math.sqrt(nb.m) / math.sqrt(seq.q) * T - D
    return float(np.max(np.abs(P - rhs)))


def check_root_identity(seq: SignSequence) -> float:
    """Residual of ``P(xi_{q,j}) = Q(xi_{q,j})`` over ``j = 1..q-1`` (0.0 when q = 1)."""
    _require_littlewood(seq)
    q = seq.q
    if q == 1:
        return 0.0
    P = evaluate_at_roots(NormalizedPolynomial.littlewood(seq), q).values
    Q = evaluate_at_roots(q_polynomial(seq), q).values
    return float(np.max(np.abs(P[1:] - Q[1:])))


def lagrange_negated_reconstruction(seq: SignSequence) -> float:
    """Residual of ``Q(-xi_k) = (2/q) D_q(1) / (1 + xi_k) + P(-xi_k)`` for odd q."""
    _require_littlewood(seq)
    q = seq.q
    if q % 2 == 0:
        raise ParityError(f"q = {q} is even: 1 + xi_(q, q/2) vanishes")
    P = evaluate_at_roots(NormalizedPolynomial.littlewood(seq), q, include_negated=True).negated
    Q = evaluate_at_roots(q_polynomial(seq), q, include_negated=True).negated
    xi = np.exp(2j * np.pi * np.arange(q) / q)
    bridge = (2.0 / q) * math.sqrt(q) / (1.0 + xi)
    return float(np.max(np.abs(Q - (bridge + P))))


def hjbr_sum(q: int) -> float:
    """Direct value of ``sum_{k<q} |1 + xi_{q,k}|^{-4}`` for odd q.

    The closed form is ``(q^4/3 + 2 q^2/3) / 16``; see :func:`hjbr_closed_form`.
    """
    q = check_int(q, "q", minimum=1)
    if q % 2 == 0:
        raise ParityError(f"q = {q} is even: the k = q/2 term is a pole")
    xi = np.exp(2j * np.pi * np.arange(q) / q)
    return float(np.sum(np.abs(1.0 + xi) ** -4.0))


def hjbr_closed_form(q: int) -> float:
    return (q**4 / 3 + 2 * q**2 / 3) / 16


def differenced_identity_residual(seq: SignSequence, ell: int, grid_size: int) -> float:
    """Residual of ``(1 - z^l) Q = (1 - z^l) P + sqrt(l) D_l (1 - z^q) / sqrt q`` on a grid."""
    _require_littlewood(seq)
    ell = check_int(ell, "ell", minimum=1)
    grid_size = check_int(grid_size, "grid_size", minimum=1)
    q = seq.q
    z = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)
    P = evaluate_at_roots(NormalizedPolynomial.littlewood(seq), grid_size).values
    Q = evaluate_at_roots(q_polynomial(seq), grid_size).values
    # sqrt(l) D_l is the unnormalized all-ones polynomial of length l
    ones_l = evaluate_at_roots(NormalizedPolynomial(np.ones(ell)), grid_size).values
    diff = 1.0 - z**ell
    lhs = diff * Q
    rhs = diff * P + ones_l * (1.0 - z**q) / math.sqrt(q)
    return float(np.max(np.abs(lhs - rhs)))


def identity_table(seq: SignSequence, grid_size: int | None = None, ell: int = 1) -> dict:
    """Every residual check that applies to ``seq``; inapplicable ones map to None."""
    q = seq.q
    grid_size = grid_size or 4 * q
    table = {
        "q": q,
        "m": int((seq.coeffs == 1).sum()),
        "grid_size": grid_size,
        "decomposition": check_decomposition(seq, grid_size),
        "root_identity": check_root_identity(seq),
        "lagrange_negated": lagrange_negated_reconstruction(seq) if q % 2 else None,
        "differenced_ell": ell,
        "differenced": differenced_identity_residual(seq, ell, grid_size),
        "hjbr_relative_error": None,
    }
    if q % 2:
        direct = hjbr_sum(q)
        table["hjbr_relative_error"] = abs(direct - hjbr_closed_form(q)) / hjbr_closed_form(q)
    return table
