"""Laurent series, Phi series, Kac-Schwarz operators and their identities."""

import pytest

from bgwtau.algebra import Coefficient, TimePolynomial, canonical_text, parse_polynomial
from bgwtau.rational import QQ
from bgwtau.zcalculus import (
    InsufficientPrecision,
    LaurentSeries,
    ParityViolation,
    PhiRingElement,
    ZOperator,
    check_canonical_pair,
    check_commutation,
    check_ks_actions,
    check_spectral_curve,
    ks_operators,
    phi_coefficients,
    phi_series,
    phi_series_gen,
    z_commutator,
)

P = parse_polynomial


def cst(text):
    poly = P(text)
    return poly.terms.get(next(iter(poly.terms))) if poly.terms else Coefficient.zero()


def test_phi_m2_symbolic():
    coeffs = phi_coefficients(2, 2)
    assert TimePolynomial.constant(coeffs[1]) == P("-1/2*j^2+3/2*j-5/6")


def test_phi_m1_first_coefficient():
    coeffs = phi_coefficients(1, 1)
    # -(4(j-1)^2 - 1)/8
    assert TimePolynomial.constant(coeffs[1]) == P("-1/2*j^2+1/1*j-3/8")


def test_phi_m1_factorial_pattern():
    """(-1)^k a_k(j) / (8^k k!) with a_k(j) = prod (4(j-1)^2 - (2i-1)^2)."""
    coeffs = phi_coefficients(1, 4)
    jm1sq = (Coefficient.monomial(1, j=1) - Coefficient.rational(1)) ** 2
    base = jm1sq.scale(4)
    fact = 1
    acc = Coefficient.one()
    for k in range(1, 5):
        fact *= k
        acc = acc * (base - Coefficient.rational((2 * k - 1) ** 2))
        assert coeffs[k] == acc.scale(QQ((-1) ** k, 8 ** k * fact))


def test_phi_m3_j1_value():
    s = phi_series(3, 1, 1)
    assert s.coeffs[-3] == Coefficient.monomial(QQ(1, 24), h=1)


def test_phi_gen_m2_j1_display():
    s = phi_series_gen(2, "symbolic", 1, 2)
    c1 = s.coeffs[-2]
    assert TimePolynomial.constant(c1.h_part(1)) == P("-1/2*N^2-1/2*N+1/6")
    c2 = s.coeffs[-4]
    assert TimePolynomial.constant(c2.h_part(2)) == P(
        "1/8*N^4+5/12*N^3-5/24*N^2-5/6*N+1/72"
    )


def test_phi_gen_reduces_to_phi_at_zero():
    assert phi_series_gen(2, 0, 3, 4) == phi_series(2, 3, 4)
    assert phi_series_gen(1, 0, 2, 6) == phi_series(1, 2, 6)


def test_phi_parity_and_reality():
    """Only powers h^k z^(-mk), rational after j-binding."""
    for m in (1, 2, 3):
        s = phi_series(m, 4, 5)
        for n, c in s.coeffs.items():
            k = (4 - 1 - n) // m
            assert n == 3 - m * k
            lo, hi = c.h_range()
            assert lo == hi == k
            assert all(ne == 0 and je == 0 for (_, ne, je), _ in c.items_hnj())


def test_phi_j_degree_is_2k():
    for m in (1, 2, 3):
        coeffs = phi_coefficients(m, 5)
        for k in range(1, 6):
            degs = [je for (_, _, je), _ in coeffs[k].items_hnj()]
            assert max(degs) == 2 * k, f"j-degree of phi[{m},{k}]"


def test_parity_violation_signals():
    bad = PhiRingElement()
    bad.add(0, 3, Coefficient.one())  # odd u-power
    with pytest.raises(ParityViolation, match="odd u-power"):
        bad.finalize(2)
    bad2 = PhiRingElement()
    bad2.add(1, 2, Coefficient.one())  # imaginary residue
    with pytest.raises(ParityViolation, match="imaginary"):
        bad2.finalize(2)


def test_laurent_floor_rules():
    a = LaurentSeries({2: Coefficient.one(), -1: Coefficient.one()}, -3)
    b = LaurentSeries({0: Coefficient.one(), -2: Coefficient.one()}, -2)
    s = a + b
    assert s.floor == -2
    p = a * b
    assert p.floor == max(-3 + 0, -2 + 2)
    d = a.dz()
    assert d.floor == -4
    sh = a.shift(5)
    assert sh.floor == 2


def test_floor_conservative_under_depth_increase():
    lo = phi_series(2, 1, 3)
    hi = phi_series(2, 1, 8)
    for n, c in lo.coeffs.items():
        assert hi.coeffs.get(n, Coefficient.zero()) == c


def test_zop_apply_basics():
    dz = ZOperator.ddz()
    s = LaurentSeries.z_power(2)
    assert dz.apply(s).coeffs == {1: Coefficient.rational(2)}
    with pytest.raises(InsufficientPrecision):
        phi_series(2, 1, 2).assert_floor_at_most(-10)


def test_ks_action_single():
    # a_m Phi_1 = (1/h) Phi_{1+m} at m=2
    ks = ks_operators(2, 0, 14)
    K = 6
    lhs = ks.a.apply(phi_series(2, 1, K))
    rhs = phi_series(2, 3, K).scale(Coefficient.monomial(1, h=-1))
    assert (lhs - rhs).is_zero()


def test_ks_actions_reports():
    assert check_ks_actions(1, 0, 4, 20).ok
    assert check_ks_actions(2, "symbolic", 3, 12).ok
    assert check_ks_actions(3, 0, 3, 12).ok


def test_ks_action_negative_control():
    """Perturbing Phi_2 by eps z^-1 breaks the b-ladder."""
    m, K = 2, 6
    ks = ks_operators(m, 0, 16)
    phi1 = phi_series(m, 1, K)
    phi2 = phi_series(m, 2, K) + LaurentSeries({-1: Coefficient.rational(QQ(1, 7))}, None)
    phi5 = phi_series(m, 5, K)
    lhs = ks.b.apply(phi1)
    rhs = phi2.scale(Coefficient.monomial(1 * (m + 1), h=1)) + phi5
    assert not (lhs - rhs).is_zero()


def test_commutation_reports():
    assert check_commutation(1, 0, 16).ok
    assert check_commutation(2, "symbolic", 16).ok
    assert check_commutation(4, 0, 12).ok


def test_ab_commutator_explicit():
    for m in (1, 2, 3, 4):
        ks = ks_operators(m, 0, 10)
        resid = z_commutator(ks.a, ks.b) - ks.b.scale(m + 1)
        assert all(s.is_zero() for s in resid.terms.values())


def test_canonical_pair_reports():
    assert check_canonical_pair(2, 0, 14).ok
    assert check_canonical_pair(3, "symbolic", 12).ok


def test_spectral_curve_reports():
    assert check_spectral_curve(1, 0, 3, 14).ok
    assert check_spectral_curve(2, "symbolic", 3, 12).ok
    assert check_spectral_curve(3, 0, 2, 10).ok


def test_quantum_bessel_explicit():
    phi1 = phi_series(1, 1, 20)
    bessel = (
        ZOperator.ddz(2)
        + ZOperator.ddz(1).scale(Coefficient.monomial(2, h=-1))
        + ZOperator.mul_by(LaurentSeries.z_power(-2, QQ(1, 4)))
    )
    resid = bessel.apply(phi1)
    assert resid.is_zero() and resid.floor <= -20


def test_phi_series_symbolic_output_text():
    s = phi_series(2, None, 1)
    assert canonical_text(TimePolynomial.constant(s.coeffs[-2].h_part(1))) == \
        "-1/2*j^2+3/2*j-5/6"
