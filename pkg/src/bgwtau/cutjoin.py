"""Cut-and-join operators and the algebraic topological recursion.

tau = 1 + sum_k h^k tau_k with tau_k a homogeneous polynomial of weighted
degree m*k.  The recursion is

  m=1:  k tau_k = W . tau_{k-1}
  m=2:  2k tau_k = W1 . tau_{k-1} + W2 . tau_{k-2}

where W is the BGW cut-and-join operator (or its N-deformation, derived by
combining the m=1 constraint family) and (W1, W2) is the displayed m=2 pair.
For m >= 3 no cut-and-join pair is available and the Schur oracle must be
used instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import Coefficient, MONO_ONE, TimeMonomial, TimePolynomial, weighted_degree
from .operators import DiffOperator, cubic, n_coeff, virasoro
from .rational import QQ
from .report import Report

RECURSION = "recursion"
SCHUR_ORACLE = "schur-oracle"


@dataclass
class TauExpansion:
    """Topological expansion (tau_0, ..., tau_K) of tau^(m,N)."""

    m: int
    N: object  # rational or "symbolic"
    coeffs: list[TimePolynomial] = field(default_factory=list)
    provenance: str = RECURSION

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def truncated_sum(self) -> TimePolynomial:
        """sum_k h^k tau_k as a single polynomial with explicit h-grading."""
        out = TimePolynomial.zero()
        for k, p in enumerate(self.coeffs):
            out = out + p.times_h(k)
        return out


def _premul(mono: TimeMonomial, op: DiffOperator) -> DiffOperator:
    out = DiffOperator({})
    for (tm, dm), c in op.terms.items():
        out.add_term(c, mono * tm, dm)
    return out


def w_bgw(bound: int) -> DiffOperator:
    """BGW cut-and-join operator: odd-index cut and join sums plus t_1/8."""
    op = DiffOperator({})
    for k in range(1, bound + 2, 2):
        for m in range(1, bound + 2, 2):
            if k + m - 1 <= bound:
                op.add_term(
                    Coefficient.rational(k * m),
                    TimeMonomial.var(k) * TimeMonomial.var(m),
                    TimeMonomial.var(k + m - 1),
                )
            if k + m <= bound:
                op.add_term(
                    Coefficient.rational(QQ(k + m + 1, 2)),
                    TimeMonomial.var(k + m + 1),
                    TimeMonomial.var(k) * TimeMonomial.var(m),
                )
    op.add_term(Coefficient.rational(QQ(1, 8)), TimeMonomial.var(1), MONO_ONE)
    return op


def w_gen(N, bound: int) -> DiffOperator:
    """m=1 cut-and-join for the N-deformation, obtained by combining the m=1
    constraint family exactly as the m=2 pair is combined: the Euler grading
    of tau^(1,N) equals h times this operator acting on it.  At N=0 its
    action on odd-times polynomials coincides with w_bgw."""
    nc = n_coeff(N)
    op = DiffOperator({})
    for k in range(0, bound // 2 + 1):
        op = op + _premul(TimeMonomial.var(2 * k + 1), virasoro(2 * k, bound)).scale(2 * k + 1)
    const = Coefficient.rational(QQ(1, 8)) - (nc * nc).scale(QQ(1, 2))
    op.add_term(const, TimeMonomial.var(1), MONO_ONE)
    return op


def w1_w2(N, bound: int) -> tuple[DiffOperator, DiffOperator]:
    """The m=2 cut-and-join pair (W1, W2), N-deformed as displayed; N=0
    reduces to the undeformed pair."""
    nc = n_coeff(N)
    nsq = nc * nc

    w1 = DiffOperator({})
    for k in range(0, bound // 3 + 2):
        w1 = w1 + _premul(TimeMonomial.var(3 * k + 2), virasoro(3 * k, bound)).scale(3 * k + 2)
        w1 = w1 + _premul(TimeMonomial.var(3 * k + 1), virasoro(3 * k - 1, bound)).scale(
            2 * (3 * k + 1)
        )
    w1.add_term(Coefficient.rational(QQ(2, 3)) - nsq.scale(2), TimeMonomial.var(2), MONO_ONE)
    w1.add_term(-nc, TimeMonomial.var(1, 2), MONO_ONE)
    w1.add_term(nc.scale(-4), TimeMonomial.var(4), TimeMonomial.var(2))

    w2 = DiffOperator({})
    for k in range(0, bound // 3 + 2):
        w2 = w2 - _premul(TimeMonomial.var(3 * k + 1), cubic(3 * k - 3, bound)).scale(3 * k + 1)
    w2.add_term(
        Coefficient.rational(-2) + nsq.scale(6),
        TimeMonomial.var(3) * TimeMonomial.var(1),
        MONO_ONE,
    )
    w2 = w2 + _premul(TimeMonomial.var(4), virasoro(0, bound)).scale(nc.scale(4))
    w2 = w2 + _premul(TimeMonomial.var(1), virasoro(-3, bound)).scale(nc)
    w2.add_term((nc ** 3 - nc).scale(QQ(-4, 3)), TimeMonomial.var(4), MONO_ONE)
    return w1, w2


def tau_expand(m: int, N, K: int) -> TauExpansion:
    """Run the algebraic topological recursion to order K."""
    if K < 0:
        raise ValueError("order K must be >= 0")
    if m == 1:
        bound = K + 1
        w = w_bgw(bound) if n_coeff(N).is_zero() else w_gen(N, bound)
        coeffs = [TimePolynomial.one()]
        for k in range(1, K + 1):
            coeffs.append(w.apply(coeffs[k - 1]).scale(QQ(1, k)))
        return TauExpansion(1, N, coeffs, RECURSION)
    if m == 2:
        bound = 2 * K + 4
        w1, w2 = w1_w2(N, bound)
        coeffs = [TimePolynomial.one()]
        prev2 = TimePolynomial.zero()
        for k in range(1, K + 1):
            tk = w1.apply(coeffs[k - 1]) + w2.apply(prev2)
            prev2 = coeffs[k - 1]
            coeffs.append(tk.scale(QQ(1, 2 * k)))
        return TauExpansion(2, N, coeffs, RECURSION)
    raise ValueError(
        "recursion unavailable; cut-and-join operators are only known for m <= 2"
        " (use the schur oracle instead)"
    )


def free_energy(T: TauExpansion) -> list[TimePolynomial]:
    """Coefficients F^1..F^K of log tau = sum_k h^k F^k (formal log in h)."""
    if not T.coeffs or T.coeffs[0] != TimePolynomial.one():
        raise ValueError("not normalized: tau_0 must be 1")
    K = T.order
    F: list[TimePolynomial] = [TimePolynomial.zero()]
    for k in range(1, K + 1):
        acc = T.coeffs[k]
        for i in range(1, k):
            acc = acc - F[i].scale(QQ(i, k)) * T.coeffs[k - i]
        F.append(acc)
    return F[1:]


def exp_series(F: list[TimePolynomial], K: int) -> list[TimePolynomial]:
    """Re-expand exp(sum h^k F^k) to order K (inverse of free_energy)."""
    tau = [TimePolynomial.one()]
    for k in range(1, K + 1):
        acc = TimePolynomial.zero()
        for i in range(1, k + 1):
            if i <= len(F):
                acc = acc + F[i - 1].scale(QQ(i, k)) * tau[k - i]
        tau.append(acc)
    return tau


def check_expansion_invariants(T: TauExpansion) -> Report:
    """Normalization, homogeneity deg tau_k = m k, and the (m+1)-reduction
    (tau free of every t_{(m+1)l})."""
    rep = Report()
    suite = "expansion-invariants"
    rep.add(suite, "tau0=1", T.coeffs[:1] == [TimePolynomial.one()], "tau_0 != 1")
    step = T.m + 1
    for k, p in enumerate(T.coeffs):
        if k == 0:
            continue
        if p.is_zero():
            rep.add(suite, f"homogeneous[k={k}]", True)
        else:
            d = weighted_degree(p)
            rep.add(
                suite,
                f"homogeneous[k={k}]",
                d == T.m * k,
                f"degree {d} != {T.m * k}",
            )
        bad = sorted(v for v in p.variables() if v % step == 0)
        rep.add(
            suite,
            f"reduction[k={k}]",
            not bad,
            f"depends on t_{{{step}l}} for l in {[v // step for v in bad]}" if bad else "",
        )
    return rep
