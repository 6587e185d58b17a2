"""Schur polynomials and the Miwa-determinant oracle."""

import random

import pytest

from bgwtau.algebra import (
    Coefficient,
    TimePolynomial,
    parse_polynomial,
    weighted_degree,
)
from bgwtau.cutjoin import tau_expand
from bgwtau.rational import QQ, QQ1
from bgwtau.schur import (
    complete_homogeneous,
    partitions,
    plucker_expansion,
    schur_in_times,
    tau_from_schur,
)
from bgwtau.zcalculus import phi_coefficients

P = parse_polynomial


def test_complete_homogeneous_basics():
    assert complete_homogeneous(0) == TimePolynomial.one()
    assert complete_homogeneous(1) == P("1/1*t1")
    assert complete_homogeneous(2) == P("1/2*t1^2+1/1*t2")


def test_generating_function_inverse():
    """sum p_n(t) x^n * sum p_n(-t) x^n = 1 through degree 8."""
    neg = {}
    for n in range(9):
        neg[n] = TimePolynomial.zero()
        for mono, c in complete_homogeneous(n).terms.items():
            sign = (-1) ** sum(e for _, e in mono.exps)
            neg[n] = neg[n] + TimePolynomial.term(c.scale(sign), mono)
    for n in range(1, 9):
        acc = TimePolynomial.zero()
        for a in range(n + 1):
            acc = acc + complete_homogeneous(a) * neg[n - a]
        assert acc.is_zero(), f"degree {n}"


def test_schur_examples():
    assert schur_in_times((1,)) == P("1/1*t1")
    assert schur_in_times((1, 1)) == P("1/2*t1^2-1/1*t2")
    assert schur_in_times((2,)) == P("1/2*t1^2+1/1*t2")


def test_schur_homogeneity():
    for n in range(1, 11):
        for mu in partitions(n):
            assert weighted_degree(schur_in_times(mu)) == n


def test_plucker_degree_zero():
    table = plucker_expansion(2, 0, 0, points=3)
    assert table.table == {(): Coefficient.one()}


def test_plucker_first_coefficients_m2():
    table = plucker_expansion(2, 0, 2, points=4)
    combo = TimePolynomial.zero()
    for mu in ((2,), (1, 1)):
        c = table.coefficient(mu).h_part(1)
        combo = combo + schur_in_times(mu).scale(c)
    assert combo == P("1/3*t2")


def test_plucker_support():
    for m in (2, 3):
        table = plucker_expansion(m, 0, 2 * m + m, points=3 * m)
        for mu in table.table:
            assert sum(mu) % m == 0


def test_plucker_m_stability():
    a = plucker_expansion(2, 0, 6)
    b = plucker_expansion(2, 0, 6, points=9)
    keys = {mu for mu in a.table} | {mu for mu in b.table if sum(mu) <= 6}
    for mu in keys:
        assert a.coefficient(mu) == b.coefficient(mu), f"C_{mu}"


def test_oracle_matches_recursion_m2():
    T = tau_from_schur(plucker_expansion(2, 0, 6))
    R = tau_expand(2, 0, 3)
    for k in range(4):
        assert T.coeffs[k] == R.coeffs[k]


def test_oracle_matches_recursion_m1():
    T = tau_from_schur(plucker_expansion(1, 0, 6))
    R = tau_expand(1, 0, 6)
    for k in range(7):
        assert T.coeffs[k] == R.coeffs[k]


def test_oracle_matches_recursion_m1_symbolic():
    T = tau_from_schur(plucker_expansion(1, "symbolic", 3))
    R = tau_expand(1, "symbolic", 3)
    for k in range(4):
        assert T.coeffs[k] == R.coeffs[k]


def test_oracle_matches_recursion_rational_n():
    for m, nval in ((1, QQ(1, 2)), (1, QQ(-2, 3)), (2, QQ(1, 2)), (2, QQ(-2, 3))):
        D = 6
        T = tau_from_schur(plucker_expansion(m, nval, D))
        R = tau_expand(m, nval, D // m)
        for k in range(D // m + 1):
            assert T.coeffs[k] == R.coeffs[k], f"m={m} N={nval} k={k}"


def test_oracle_m3_invariants():
    from bgwtau.cutjoin import check_expansion_invariants

    T = tau_from_schur(plucker_expansion(3, 0, 8, points=8))
    assert check_expansion_invariants(T).ok
    assert not T.coeffs[1].is_zero() and not T.coeffs[2].is_zero()


class EpsSeries:
    """Truncated univariate power series over exact rationals (test-local,
    used to grade the determinant ratio by total x-degree)."""

    def __init__(self, coeffs, order):
        self.c = list(coeffs) + [QQ(0)] * (order + 1 - len(coeffs))
        self.order = order

    def __add__(self, o):
        return EpsSeries([a + b for a, b in zip(self.c, o.c)], self.order)

    def __sub__(self, o):
        return EpsSeries([a - b for a, b in zip(self.c, o.c)], self.order)

    def __mul__(self, o):
        out = [QQ(0)] * (self.order + 1)
        for i, a in enumerate(self.c):
            if not a:
                continue
            for k, b in enumerate(o.c[: self.order + 1 - i]):
                out[i + k] += a * b
        return EpsSeries(out, self.order)


def test_miwa_point_consistency():
    """Evaluating the Schur expansion at 3 rational Miwa points matches the
    graded determinant ratio det(x_i^(M-j) f_j(eps x_i)) / Vandermonde."""
    m, D, M = 2, 6, 3
    rng = random.Random(3)
    xs = [QQ(rng.randint(1, 9), rng.randint(10, 19)) for _ in range(M)]
    table = plucker_expansion(m, 0, D)

    lhs = [QQ(0)] * (D + 1)
    for mu, c in table.table.items():
        w = sum(mu)
        if w > D or len(mu) > M:
            continue
        tvals = {k: sum(x ** k for x in xs) / k for k in range(1, w + 1)}
        val = schur_in_times(mu).eval_times(tvals).as_rational() if mu else QQ1
        coeff = c.h_part(w // m).as_rational()
        lhs[w] += coeff * val

    coeffs = phi_coefficients(m, D // m)
    cj = [[c.substitute(j=QQ(j + 1)).as_rational() for c in coeffs] for j in range(M)]
    vdm_degree = M * (M - 1) // 2
    order = D + vdm_degree
    rows = []
    for i in range(M):
        row = []
        for j in range(M):
            f = [QQ(0)] * (order + 1)
            for k, q in enumerate(cj[j]):
                if m * k <= order:
                    f[m * k] = q * xs[i] ** (m * k)
            ser = EpsSeries(f, order)
            xpow = EpsSeries([xs[i] ** (M - 1 - j)], order)
            shift = [QQ(0)] * (order + 1)
            shift[M - 1 - j] = QQ(1)
            row.append(ser * xpow * EpsSeries(shift, order))
        rows.append(row)
    det = (
        rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
    )
    vdm = (xs[0] - xs[1]) * (xs[0] - xs[2]) * (xs[1] - xs[2])
    for w in range(D + 1):
        got = det.c[w + vdm_degree] / vdm
        assert got == lhs[w], f"degree {w}: {got} != {lhs[w]}"


def test_plucker_rejects_insufficient_points():
    with pytest.raises(ValueError, match="insufficient Miwa points"):
        plucker_expansion(2, 0, 6, points=4)
