import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from flatlab._validation import ValidationError
from flatlab.polycore import (
    DegreeOverflowError,
    NormalizedPolynomial,
    ParityError,
    UseMahlerMeasure,
    c_flatness,
    evaluate_at_roots,
    flatness_report,
    l2_norm_sq_sampled,
    l4_fourth_power_exact,
    l4_norm_4_exact,
    lp_norm_estimate,
    mahler_measure,
    merit_factor,
    roots_transform,
    square_flatness_defect_quadrature,
)
from flatlab.sequences import BinarySequence, SignSequence, random_signs

from conftest import brute_autocorr, horner


def vandermonde(a, M):
    j = np.arange(M)[:, None]
    k = np.arange(len(a))[None, :]
    return np.exp(2j * np.pi * j * k / M) @ np.asarray(a, dtype=complex)


@pytest.mark.parametrize("n,M", [(1, 1), (1, 5), (3, 3), (7, 7), (10, 17), (31, 31), (64, 100), (101, 1009)])
def test_roots_transform_matches_direct_sum(n, M, rng):
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    assert np.allclose(roots_transform(a, M), vandermonde(a, M), atol=1e-10 * max(n, 1))


def test_roots_transform_overflow():
    with pytest.raises(DegreeOverflowError):
        roots_transform(np.ones(5), 4)


def test_evaluate_examples():
    one = NormalizedPolynomial(np.array([1.0]))
    assert np.allclose(evaluate_at_roots(one, 4).values, [1, 1, 1, 1])
    d3 = NormalizedPolynomial.dirichlet(3)
    assert np.allclose(evaluate_at_roots(d3, 3).values, [math.sqrt(3), 0, 0], atol=1e-14)
    p = NormalizedPolynomial(np.array([1.0, -1.0, 1.0]), 1 / math.sqrt(3))
    g = evaluate_at_roots(p, 3, include_negated=True)
    assert g.negated[0] == pytest.approx(math.sqrt(3))


def test_negated_grid_against_horner(rng):
    coeffs = rng.normal(size=12)
    p = NormalizedPolynomial(coeffs, 0.3)
    for M in (5, 12, 13):
        g = evaluate_at_roots(p, M, include_negated=True)
        xi = np.exp(2j * np.pi * np.arange(M) / M)
        assert np.allclose(g.values, [horner(coeffs, 0.3, z) for z in xi], atol=1e-12)
        assert np.allclose(g.negated, [horner(coeffs, 0.3, -z) for z in xi], atol=1e-12)
        assert np.allclose(p(xi), g.values, atol=1e-12)


def test_evaluate_errors():
    with pytest.raises(ValidationError):
        evaluate_at_roots(NormalizedPolynomial.dirichlet(3), 0)
    with pytest.raises(DegreeOverflowError):
        evaluate_at_roots(NormalizedPolynomial.dirichlet(5), 4, exact=True)


def test_undersized_grid_aliases_coefficients():
    p = NormalizedPolynomial(np.array([1.0, 2.0, 3.0, 4.0, 5.0]))
    xi = np.exp(2j * np.pi * np.arange(3) / 3)
    assert np.allclose(evaluate_at_roots(p, 3).values, p(xi))


def test_l2_sampled_examples():
    assert l2_norm_sq_sampled(evaluate_at_roots(NormalizedPolynomial(np.array([1.0])), 1)) == pytest.approx(1.0)
    assert l2_norm_sq_sampled(evaluate_at_roots(NormalizedPolynomial.dirichlet(5), 5)) == pytest.approx(1.0)
    p = NormalizedPolynomial(np.array([1.0, -1.0, 1.0]), 1 / math.sqrt(3))
    assert l2_norm_sq_sampled(evaluate_at_roots(p, 3)) == pytest.approx(1.0)
    with pytest.raises(DegreeOverflowError):
        l2_norm_sq_sampled(evaluate_at_roots(p, 2), degree=2)


def test_l2_sampling_exact_on_random_sign_sequences():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        q = int(rng.integers(1, 513))
        p = NormalizedPolynomial.littlewood(random_signs(q, rng))
        assert abs(l2_norm_sq_sampled(evaluate_at_roots(p, q), p.degree) - 1) < 1e-10


def test_l4_exact_examples(barker13):
    assert l4_norm_4_exact(NormalizedPolynomial.dirichlet(3)) == pytest.approx(19 / 9, rel=1e-13)
    assert l4_norm_4_exact(NormalizedPolynomial(np.array([1.0]))) == pytest.approx(1.0)
    assert l4_norm_4_exact(NormalizedPolynomial.littlewood(barker13)) == pytest.approx(181 / 169, rel=1e-12)


def test_l4_exact_errors():
    with pytest.raises(ParityError):
        l4_norm_4_exact(NormalizedPolynomial.dirichlet(4))
    with pytest.raises(ValidationError):
        l4_norm_4_exact(NormalizedPolynomial(np.array([1.0, 1j, 1.0])))


def test_l4_exact_fails_for_even_q_by_design():
    # the negated grid picks up (-1)^q on the fold term; for even q the sum is not the integral
    p = NormalizedPolynomial(np.array([1.0, 1.0, -1.0, 1.0]), 0.5)
    g = evaluate_at_roots(p, 4, include_negated=True)
    two_grid = (np.sum(np.abs(g.values) ** 4) + np.sum(np.abs(g.negated) ** 4)) / 8
    true = 1 + 2 * sum(c * c for c in brute_autocorr([1, 1, -1, 1])[1:]) / 16
    assert abs(two_grid - true) > 1e-3


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=256), st.integers(min_value=0, max_value=2**32 - 1))
def test_l4_exact_matches_autocorrelation_for_real_coefficients(half, seed):
    q = 2 * half + 1
    a = np.random.default_rng(seed).normal(size=q)
    c = brute_autocorr_float(a)
    expected = c[0] ** 2 + 2 * np.sum(c[1:] ** 2)
    assert abs(l4_norm_4_exact(NormalizedPolynomial(a)) - expected) < 1e-8 * q * max(1.0, expected)


def brute_autocorr_float(a):
    return np.array([np.dot(a[: a.size - k], a[k:]) for k in range(a.size)])


def test_dirichlet_closed_form_all_odd_q():
    for q in range(3, 2002, 2):
        got = l4_norm_4_exact(NormalizedPolynomial.dirichlet(q))
        want = 2 * q / 3 + 1 / (3 * q)
        assert abs(got - want) <= 1e-8 * want


def test_lp_estimate_examples():
    one = NormalizedPolynomial(np.array([1.0]))
    for alpha in (0.5, 1, 3, 7.5):
        est = lp_norm_estimate(one, alpha)
        assert est.value == pytest.approx(1.0) and est.bracket < 1e-14
    est = lp_norm_estimate(NormalizedPolynomial.dirichlet(100), 4)
    want = 200 / 3 + 1 / 300
    # at an even power the grid sum is exact once M exceeds 2 * degree
    assert abs(est.value - want) <= max(est.bracket, 1e-9 * want)
    with pytest.raises(UseMahlerMeasure):
        lp_norm_estimate(one, 0)
    with pytest.raises(ValidationError):
        lp_norm_estimate(one, 2, oversample=1)


def _abs_sinc_cubed_integral():
    f = lambda x: abs(math.sin(x) / x) ** 3 if x else 1.0  # noqa: E731
    K = 4000
    body = sum(quad(f, k * math.pi, (k + 1) * math.pi)[0] for k in range(K))
    # tail: mean of |sin|^3 over a period is 4/(3 pi), integrated against x^-3
    return body + (4 / (3 * math.pi)) / (2 * (K * math.pi) ** 2)


def test_unnormalized_dirichlet_l3_asymptotic():
    I = _abs_sinc_cubed_integral()
    assert I == pytest.approx(1.2084442, abs=2e-7)
    ratios = []
    for e in range(10, 15):
        q = 2**e
        est = lp_norm_estimate(NormalizedPolynomial(np.ones(q)), 3, oversample=16)
        ratios.append(est.value / (2 / math.pi * I * q * q))
    assert all(abs(r - 1) < 5e-5 for r in ratios)
    # deviations shrink with q (up to grid noise)
    assert abs(ratios[-1] - 1) <= abs(ratios[0] - 1) + 1e-6


def test_mahler_examples():
    assert mahler_measure(NormalizedPolynomial(np.array([2.5]))).value == pytest.approx(2.5)
    assert mahler_measure(NormalizedPolynomial(np.array([0.0, 0.0, 1.0]))).value == pytest.approx(1.0)
    est = mahler_measure(NormalizedPolynomial(np.array([1.0, 1.0]), 1 / math.sqrt(2)), oversample=256)
    # a zero on the circle makes the grid mean converge like 1/M; the bracket tracks that rate
    assert abs(est.value - 1 / math.sqrt(2)) <= 3 * est.bracket
    assert abs(est.value - 1 / math.sqrt(2)) < 2e-3
    with pytest.raises(ValidationError):
        mahler_measure(NormalizedPolynomial(np.zeros(3)))


def test_mahler_matches_jensen_for_zero_free_circle(rng):
    # (z - r1)(z - r2) with |r| != 1: M = prod max(1, |r|)
    r = np.array([0.4 + 0.2j, 1.7 - 0.5j])
    coeffs = np.poly(r)[::-1]
    est = mahler_measure(NormalizedPolynomial(coeffs), oversample=32)
    assert est.value == pytest.approx(float(np.prod(np.maximum(1, np.abs(r)))), rel=1e-10)


def test_flatness_report_examples(barker13, barker11):
    assert merit_factor(barker13, exact=True) == Fraction(169, 12)
    assert merit_factor(barker11, exact=True) == Fraction(121, 10)
    assert flatness_report(barker13).merit_factor == pytest.approx(169 / 12)
    r = flatness_report(SignSequence(np.ones(5)))
    assert r.l4_fourth_power == pytest.approx(3.4)
    assert r.merit_factor == pytest.approx(1 / 2.4)
    assert r.square_l2_defect == pytest.approx(2.4)


def test_merit_factor_of_single_sign_is_infinite():
    s = SignSequence.from_string("+")
    assert merit_factor(s) == math.inf
    assert flatness_report(s).merit_factor == math.inf


def test_newman_bourgain_normalization():
    b = BinarySequence.from_string("1011")
    p = NormalizedPolynomial.newman_bourgain(b)
    assert np.sum(np.abs(p.scaled_coeffs()) ** 2) == pytest.approx(1.0)
    # c = (3, 1, 1, 1) for the bits, so ||P||_4^4 = (9 + 2 * 3) / 9
    assert l4_fourth_power_exact(b) == Fraction(15, 9)


def test_report_invariants_and_defect_quadrature():
    rng = np.random.default_rng(11)
    for _ in range(100):
        s = random_signs(int(rng.integers(1, 80)), rng)
        rep = flatness_report(s)
        assert rep.l4_fourth_power >= 1
        assert rep.square_l2_defect == pytest.approx(rep.l4_fourth_power - 1)
        quad_est = square_flatness_defect_quadrature(NormalizedPolynomial.littlewood(s))
        assert abs(quad_est.value - rep.square_l2_defect) <= quad_est.bracket + 1e-9


def test_mahler_l1_l2_ordering():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = NormalizedPolynomial.littlewood(random_signs(int(rng.integers(2, 60)), rng))
        mah = mahler_measure(p)
        l1 = lp_norm_estimate(p, 1, oversample=16)
        assert mah.value <= l1.value + l1.bracket + mah.bracket
        assert l1.value <= 1 + l1.bracket + 1e-12


def test_c_flatness_of_monomial():
    out = c_flatness(NormalizedPolynomial(np.array([0.0, 1.0])), 1.0)
    assert out["sup_deviation"] < 1e-12
