"""Truncated Laurent series in z, differential operators in z, the basis
vector series Phi_j, and the Kac-Schwarz operator identities.

Validity floors.  A LaurentSeries asserts nothing below its floor: the
stored coefficients of z^n for n >= floor are exact, everything below is
unknown (not necessarily zero).  floor=None means exact everywhere.
Propagation is conservative:

  add:        floor = max(floors)
  d/dz:       floor - 1
  * z^k:      floor + k
  s1 * s2:    floor = max(f1 + top2, f2 + top1)   (top = highest nonzero
              exponent; junk below a floor can only reach the product at
              exponents below that bound)

so recomputing at greater depth never changes previously asserted
coefficients.

Phi_j series.  Phi_j = z^(j-1)(1 + sum_k phi[m,k](j) h^k z^(-mk)) where the
phi[m,k] are polynomials in j produced by the Gaussian steepest-descent
expansion: expand (1 + i*phi*u)^(-j) with generalized binomials, expand
exp(sum_{l>=3} tstar_l phi^l) with tstar_l = ((-i)^l / l!) *
((m+l-1)!/(m+1)!) * u^(l-2), replace phi^(2r) by (2r-1)!! and odd powers by
zero, then substitute u^2 -> h z^(-m).  Intermediate bookkeeping tracks
powers of i mod 4; finalization rejects odd u-powers or imaginary residue
("parity violation"), which would signal an internal bug.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import COEFF_ONE, Coefficient
from .operators import n_coeff
from .rational import QQ, QQ1
from .report import Report


class ParityViolation(Exception):
    pass


class InsufficientPrecision(Exception):
    pass


# ---------------------------------------------------------------------------
# Laurent series


def _floor_max(f1, f2):
    if f1 is None:
        return f2
    if f2 is None:
        return f1
    return max(f1, f2)


class LaurentSeries:
    """coeffs: dict z-exponent -> Coefficient, exact at and above floor."""

    __slots__ = ("coeffs", "floor")

    def __init__(self, coeffs=None, floor=None):
        self.coeffs: dict[int, Coefficient] = coeffs if coeffs is not None else {}
        self.floor = floor
        if floor is not None:
            for n in list(self.coeffs):
                if n < floor:
                    del self.coeffs[n]

    @classmethod
    def zero(cls) -> "LaurentSeries":
        return cls({}, None)

    @classmethod
    def z_power(cls, n: int, coeff=None) -> "LaurentSeries":
        c = coeff if coeff is not None else COEFF_ONE
        c = c if isinstance(c, Coefficient) else Coefficient.rational(c)
        return cls({n: c} if c else {}, None)

    def top(self):
        """Highest exponent with a nonzero coefficient; None for (known) zero."""
        return max((n for n, c in self.coeffs.items() if c), default=None)

    def add_term(self, n: int, c: Coefficient) -> None:
        if self.floor is not None and n < self.floor:
            return
        cur = self.coeffs.get(n)
        if cur is None:
            if c:
                self.coeffs[n] = c
        else:
            s = cur + c
            if s:
                self.coeffs[n] = s
            else:
                del self.coeffs[n]

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        out = LaurentSeries(dict(self.coeffs), _floor_max(self.floor, other.floor))
        for n, c in other.coeffs.items():
            out.add_term(n, c)
        return out

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries({n: -c for n, c in self.coeffs.items()}, self.floor)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, c) -> "LaurentSeries":
        c = c if isinstance(c, Coefficient) else Coefficient.rational(c)
        if not c:
            return LaurentSeries({}, self.floor)
        return LaurentSeries({n: c0 * c for n, c0 in self.coeffs.items()}, self.floor)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by z^k."""
        return LaurentSeries(
            {n + k: c for n, c in self.coeffs.items()},
            None if self.floor is None else self.floor + k,
        )

    def dz(self) -> "LaurentSeries":
        out: dict[int, Coefficient] = {}
        for n, c in self.coeffs.items():
            if n != 0:
                out[n - 1] = c.scale(n)
        return LaurentSeries(out, None if self.floor is None else self.floor - 1)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        t1, t2 = self.top(), other.top()
        f1, f2 = self.floor, other.floor
        e1 = (f1 - 1) if (t1 is None and f1 is not None) else t1
        e2 = (f2 - 1) if (t2 is None and f2 is not None) else t2
        if f1 is None:
            fl = None if f2 is None or e1 is None else f2 + e1
        elif f2 is None:
            fl = None if e2 is None else f1 + e2
        else:
            # both truncated; an identically-zero stored part still bounds
            # junk reach through the other side's floor
            a = f1 + e2 if e2 is not None else None
            b = f2 + e1 if e1 is not None else None
            fl = _floor_max(a, b)
            if fl is None:
                fl = f1 + f2 - 1
        out = LaurentSeries({}, fl)
        for n1, c1 in self.coeffs.items():
            for n2, c2 in other.coeffs.items():
                out.add_term(n1 + n2, c1 * c2)
        return out

    def truncate(self, floor: int) -> "LaurentSeries":
        return LaurentSeries(
            {n: c for n, c in self.coeffs.items() if n >= floor},
            _floor_max(self.floor, floor),
        )

    def is_zero(self) -> bool:
        return not any(self.coeffs.values())

    def first_violation(self):
        """(exponent, coefficient) of the highest nonzero term, or None."""
        t = self.top()
        return None if t is None else (t, self.coeffs[t])

    def assert_floor_at_most(self, needed: int) -> None:
        if self.floor is not None and self.floor > needed:
            raise InsufficientPrecision(
                f"insufficient precision: need exactness down to z^{needed}, "
                f"series floor is z^{self.floor}"
            )

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        bits = [f"({c!r})*z^{n}" for n, c in sorted(self.coeffs.items(), reverse=True) if c]
        s = " + ".join(bits) if bits else "0"
        if self.floor is not None:
            s += f"  (floor z^{self.floor})"
        return s


# ---------------------------------------------------------------------------
# differential operators in z


def _shift_max(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


class ZOperator:
    """terms: dict d/dz-order -> LaurentSeries coefficient.

    tail_shift expresses truncation in the action filtration: the operator
    may be missing content (at any d-order) whose action on z^n only reaches
    exponents <= n + tail_shift.  None means no missing content.  The
    geometric series for the KS operator d is the one producer of tails;
    compose/apply fold them into result floors, so identity checks stay
    honest at every order.
    """

    __slots__ = ("terms", "tail_shift")

    def __init__(self, terms=None, tail_shift=None):
        self.terms: dict[int, LaurentSeries] = terms if terms is not None else {}
        self.tail_shift = tail_shift

    @classmethod
    def zero(cls) -> "ZOperator":
        return cls({})

    @classmethod
    def identity(cls, coeff=None) -> "ZOperator":
        return cls({0: LaurentSeries.z_power(0, coeff)})

    @classmethod
    def mul_by(cls, s: LaurentSeries) -> "ZOperator":
        return cls({0: s})

    @classmethod
    def ddz(cls, order: int = 1) -> "ZOperator":
        return cls({order: LaurentSeries.z_power(0)})

    def max_shift(self):
        """Upper bound on the action shift of the stored content (junk below
        series floors included); None if there is no stored content."""
        out = None
        for i, s in self.terms.items():
            t = s.top()
            if s.floor is not None:
                t = _shift_max(t, s.floor - 1)
            if t is not None:
                out = _shift_max(out, t - i)
        return out

    def __add__(self, other: "ZOperator") -> "ZOperator":
        out = dict(self.terms)
        for o, s in other.terms.items():
            out[o] = out[o] + s if o in out else s
        tail = _shift_max(self.tail_shift, other.tail_shift)
        if tail is not None:
            # one side's tail may cancel the other side's stored content:
            # nothing at order o is assertable at or below exponent o + tail
            out = {o: s.truncate(_floor_max(s.floor, o + tail + 1)) for o, s in out.items()}
        return ZOperator(out, tail)

    def __neg__(self) -> "ZOperator":
        return ZOperator({o: -s for o, s in self.terms.items()}, self.tail_shift)

    def __sub__(self, other: "ZOperator") -> "ZOperator":
        return self + (-other)

    def scale(self, c) -> "ZOperator":
        return ZOperator({o: s.scale(c) for o, s in self.terms.items()}, self.tail_shift)

    def shift(self, k: int) -> "ZOperator":
        """Left-multiply by z^k."""
        return ZOperator(
            {o: s.shift(k) for o, s in self.terms.items()},
            None if self.tail_shift is None else self.tail_shift + k,
        )

    def apply(self, s: LaurentSeries) -> "LaurentSeries":
        out = LaurentSeries.zero()
        for order, c in self.terms.items():
            d = s
            for _ in range(order):
                d = d.dz()
            out = out + c * d
        if self.tail_shift is not None:
            t = s.top()
            if s.floor is not None:
                t = _shift_max(t, s.floor - 1)
            if t is not None:
                out = out.truncate(
                    _floor_max(out.floor, t + self.tail_shift + 1)
                )
        return out

    def compose(self, other: "ZOperator") -> "ZOperator":
        """self after other (operator product)."""
        out = ZOperator({})
        for i, ci in self.terms.items():
            for l, bl in other.terms.items():
                # c_i d^i (b_l d^l) = c_i sum_s C(i,s) (d^s b_l) d^(i+l-s)
                binom = 1
                ds = bl
                for s in range(i + 1):
                    if s:
                        binom = binom * (i - s + 1) // s
                        ds = ds.dz()
                    piece = ci * ds if binom == 1 else ci.scale(binom) * ds
                    o = i + l - s
                    out.terms[o] = out.terms[o] + piece if o in out.terms else piece
        # fold truncation tails: missing factors only act with small shifts
        tail = None
        if self.tail_shift is not None:
            ms = other.max_shift()
            if ms is not None:
                tail = _shift_max(tail, self.tail_shift + ms)
            if other.tail_shift is not None:
                tail = _shift_max(tail, self.tail_shift + other.tail_shift)
        if other.tail_shift is not None:
            ms = self.max_shift()
            if ms is not None:
                tail = _shift_max(tail, ms + other.tail_shift)
        if tail is not None:
            out = ZOperator(
                {o: s.truncate(_floor_max(s.floor, o + tail + 1)) for o, s in out.terms.items()},
                tail,
            )
        return out

    def power(self, e: int) -> "ZOperator":
        if e < 0:
            raise ValueError("negative operator powers are not supported")
        out = ZOperator.identity()
        for _ in range(e):
            out = out.compose(self)
        return out

    def drop_zero(self) -> "ZOperator":
        return ZOperator(
            {o: s for o, s in self.terms.items() if s.coeffs or s.floor is not None},
            self.tail_shift,
        )

    def __repr__(self):
        bits = [f"[{s!r}] d^{o}" for o, s in sorted(self.terms.items())]
        s = " + ".join(bits) if bits else "0"
        if self.tail_shift is not None:
            s += f"  (tail shift {self.tail_shift})"
        return s


def z_commutator(a: ZOperator, b: ZOperator) -> ZOperator:
    return a.compose(b) - b.compose(a)


def zop_apply(op: ZOperator, s: LaurentSeries) -> LaurentSeries:
    """Apply a differential operator to a truncated series (exact above the
    propagated floor)."""
    return op.apply(s)


# ---------------------------------------------------------------------------
# Phi series (steepest-descent expansion of the basis vectors)


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@lru_cache(maxsize=None)
def _exp_table(m: int, K: int) -> tuple:
    """exp(sum_{l>=3} tstar_l phi^l) truncated at u-power 2K.

    Returns entries ((p, q) -> rational) with u^p phi^q; the i-power of every
    entry at phi-degree q is 3q mod 4 (each factor carries (-i)^l), so only
    the rational part is stored.
    """
    cap = 2 * K
    table = {(0, 0): QQ1}
    for l in range(3, cap + 3):
        # factor exp(tstar_l phi^l): sum_s (c_l phi^l u^(l-2))^s / s!
        cl = QQ(1)
        for i in range(m + 2, m + l):
            cl *= i  # (m+l-1)!/(m+1)!
        for i in range(2, l + 1):
            cl /= i  # 1/l!
        smax = cap // (l - 2)
        if smax == 0:
            break
        powers = [QQ1]
        fact = QQ1
        for s in range(1, smax + 1):
            fact *= s
            powers.append(cl ** s / fact)
        new = {}
        for (p, q), v in table.items():
            for s in range(0, smax + 1):
                pp = p + s * (l - 2)
                if pp > cap:
                    break
                key = (pp, q + s * l)
                w = v * powers[s]
                if key in new:
                    w = new[key] + w
                    if w:
                        new[key] = w
                    else:
                        del new[key]
                else:
                    new[key] = w
        table = new
    return tuple(table.items())


class PhiRingElement:
    """Map (i-power mod 4, u-power) -> Coefficient (polynomial in j)."""

    __slots__ = ("terms",)

    def __init__(self):
        self.terms: dict[tuple[int, int], Coefficient] = {}

    def add(self, i4: int, u: int, c: Coefficient) -> None:
        key = (i4 & 3, u)
        cur = self.terms.get(key)
        if cur is None:
            if c:
                self.terms[key] = c
        else:
            s = cur + c
            if s:
                self.terms[key] = s
            else:
                del self.terms[key]

    def finalize(self, K: int) -> list[Coefficient]:
        """Collapse i^2 -> -1 and map u^(2k) to slot k; odd u-powers or a
        nonzero imaginary part signal an internal inconsistency."""
        out = [Coefficient.zero() for _ in range(K + 1)]
        by_u: dict[int, list[Coefficient]] = {}
        for (i4, u), c in self.terms.items():
            slot = by_u.setdefault(u, [Coefficient.zero()] * 4)
            slot[i4] = slot[i4] + c
        for u, (c0, c1, c2, c3) in sorted(by_u.items()):
            real = c0 - c2
            imag = c1 - c3
            if imag:
                raise ParityViolation(f"parity violation: imaginary residue at u^{u}")
            if not real:
                continue
            if u % 2:
                raise ParityViolation(f"parity violation: odd u-power {u}")
            if u // 2 <= K:
                out[u // 2] = real
        return out


_PHI_STORE: dict[int, tuple] = {}


def phi_coefficients(m: int, K: int) -> tuple:
    """Symbolic-j coefficients (phi[m,0]=1, phi[m,1], ..., phi[m,K]) with
    phi[m,k] multiplying h^k z^(-mk) in the normalized basis vector."""
    have = _PHI_STORE.get(m)
    if have is None or len(have) <= K:
        _PHI_STORE[m] = _phi_coefficients(m, K)
    return _PHI_STORE[m][: K + 1]


def _phi_coefficients(m: int, K: int) -> tuple:
    if m < 1:
        raise ValueError("m must be a positive integer")
    cap = 2 * K
    elem = PhiRingElement()
    # generalized binomial expansion of (1 + i u phi)^(-j):
    # term r: C(-j, r) (i u)^r phi^r with C(-j, r) = (-1)^r j(j+1)...(j+r-1)/r!
    binoms = [COEFF_ONE]
    cur = COEFF_ONE
    for r in range(1, cap + 1):
        jshift = Coefficient.monomial(1, j=1) + Coefficient.rational(r - 1)
        cur = (cur * jshift).scale(QQ(-1, r))
        binoms.append(cur)
    for (p, q), v in _exp_table(m, K):
        for r in range(0, cap - p + 1):
            if (q + r) % 2:
                continue
            moment = _double_factorial(q + r - 1)
            elem.add(r + 3 * q, p + r, binoms[r].scale(v * moment))
    return tuple(elem.finalize(K))


@lru_cache(maxsize=4096)
def phi_series(m: int, j, K: int) -> LaurentSeries:
    """Basis vector Phi_j^(m) to depth K (exact down to z^(j-1-mK)).

    Integer j gives the true series z^(j-1)(1 + ...); j=None keeps j symbolic
    and returns the normalized series with leading exponent 0 and coefficients
    in QQ[j]."""
    coeffs = phi_coefficients(m, K)
    lead = 0 if j is None else j - 1
    out: dict[int, Coefficient] = {}
    for k, c in enumerate(coeffs):
        if j is not None:
            c = c.substitute(j=QQ(j))
        if c:
            out[lead - m * k] = c.times_h(k)
    return LaurentSeries(out, lead - m * K)


@lru_cache(maxsize=4096)
def phi_series_gen(m: int, N, j: int, K: int) -> LaurentSeries:
    """Generalized basis vector Phi_j^(m,N) = z^N Phi_{j-N}^(m): the j -> j-N
    shift applied inside the symbolic-j coefficients, leading power z^(j-1)."""
    nc = n_coeff(N)
    if nc.is_zero():
        return phi_series(m, j, K)
    jbind = Coefficient.rational(j) - nc
    coeffs = phi_coefficients(m, K)
    out: dict[int, Coefficient] = {}
    for k, c in enumerate(coeffs):
        c = c.substitute(j=jbind)
        if c:
            out[j - 1 - m * k] = c.times_h(k)
    return LaurentSeries(out, j - 1 - m * K)


# ---------------------------------------------------------------------------
# Kac-Schwarz operators


@dataclass(frozen=True)
class KSOperators:
    m: int
    a: ZOperator
    b: ZOperator
    c: ZOperator
    d: ZOperator
    d_inv: ZOperator


@lru_cache(maxsize=256)
def ks_operators(m: int, N, depth: int) -> KSOperators:
    """The KS operators for tau^(m,N).

    a = z d/dz - m/2 + z^m/h and b = z^(m+1) are exact; c is the exact
    normal-ordered form of h z^-(m+1) (a-N)(a+Nm); d is the geometric series
    sum_k (-h z^-m (z d/dz - m/2 - N))^k z truncated so that its order-i
    coefficient is exact above z^(i+1-m*ceil((depth+2)/m+1)); d_inv is the
    exact two-term inverse z^-1 (1 + h z^-m (z d/dz - m/2 - N))."""
    nc = n_coeff(N)
    half_m = QQ(m, 2)

    a = ZOperator(
        {
            1: LaurentSeries.z_power(1),
            0: LaurentSeries(
                {0: Coefficient.rational(-half_m), m: Coefficient.monomial(1, h=-1)}, None
            ),
        }
    )
    b = ZOperator({0: LaurentSeries.z_power(m + 1)})

    a_minus = a - ZOperator.identity(nc)
    a_plus = a + ZOperator.identity(nc.scale(m))
    c = (a_minus.compose(a_plus)).shift(-(m + 1)).scale(Coefficient.monomial(1, h=1))

    # d: truncated geometric series; step T = -h z^-m (z d/dz - m/2 - N).
    # Every term of step^k z shifts z-degree by exactly 1 - m k, so the
    # omitted k > k_max tail has action shift <= 1 - m (k_max + 1).
    k_max = (depth + 2 + m) // m + 1
    step = ZOperator(
        {
            1: LaurentSeries.z_power(1 - m, Coefficient.monomial(-1, h=1)),
            0: LaurentSeries.z_power(-m, (Coefficient.rational(half_m) + nc).times_h(1)),
        }
    )
    term = ZOperator({0: LaurentSeries.z_power(1)})
    d = ZOperator({0: LaurentSeries.z_power(1)})
    for _ in range(k_max):
        term = step.compose(term)
        d = d + term
    d = ZOperator(d.terms, 1 - m * (k_max + 1))

    d_inv = ZOperator(
        {
            1: LaurentSeries.z_power(-m, Coefficient.monomial(1, h=1)),
            0: LaurentSeries(
                {-1: COEFF_ONE, -m - 1: (Coefficient.rational(half_m) + nc).scale(-1).times_h(1)},
                None,
            ),
        }
    )
    return KSOperators(m, a, b, c, d, d_inv)


def canonical_pair(m: int, N, depth: int) -> tuple[ZOperator, ZOperator, KSOperators]:
    """(P, Q): P = (c - h^-1 d^(m-1))/(m+1); Q = (h c + 2 d)/3 for m=2 and
    Q = d for m >= 3."""
    if m < 2:
        raise ValueError("canonical pair via c,d needs m >= 2")
    ks = ks_operators(m, N, depth)
    hinv = Coefficient.monomial(1, h=-1)
    p = (ks.c - ks.d.power(m - 1).scale(hinv)).scale(QQ(1, m + 1))
    if m == 2:
        q = (ks.c.scale(Coefficient.monomial(1, h=1)) + ks.d.scale(2)).scale(QQ(1, 3))
    else:
        q = ks.d
    return p, q, ks


# ---------------------------------------------------------------------------
# identity suites


def _series_eq_case(rep: Report, suite: str, name: str, lhs: LaurentSeries, rhs: LaurentSeries):
    resid = lhs - rhs
    v = resid.first_violation()
    rep.add(suite, name, v is None, f"first residual at z^{v[0]}" if v else "")


def check_ks_actions(m: int, N, j_max: int, depth: int) -> Report:
    """Ladder actions of a, b, c, d on Phi_j for j = 1..j_max:

      a Phi_j = ((j-1)(m+1) - N m) Phi_j + h^-1 Phi_{j+m}
      b Phi_j = (j-N)(m+1) h Phi_{j+1} + Phi_{j+m+1}
      c Phi_j = (j-1)(m+1) Phi_{j-1} + h^-1 Phi_{j+m-1}
      d Phi_j = Phi_{j+1}
    """
    rep = Report()
    suite = f"ks-actions[m={m},N={N}]"
    K = (depth + j_max + m) // m + 1
    ks = ks_operators(m, N, depth + j_max + m + 1)
    nc = n_coeff(N)
    phis = {j: phi_series_gen(m, N, j, K) for j in range(0, j_max + m + 2)}
    hinv = Coefficient.monomial(1, h=-1)
    hpow = Coefficient.monomial(1, h=1)
    for j in range(1, j_max + 1):
        eig_a = Coefficient.rational((j - 1) * (m + 1)) - nc.scale(m)
        _series_eq_case(
            rep, suite, f"a.Phi_{j}", ks.a.apply(phis[j]),
            phis[j].scale(eig_a) + phis[j + m].scale(hinv),
        )
        eig_b = (Coefficient.rational(j) - nc).scale(m + 1) * hpow
        _series_eq_case(
            rep, suite, f"b.Phi_{j}", ks.b.apply(phis[j]),
            phis[j + 1].scale(eig_b) + phis[j + m + 1],
        )
        _series_eq_case(
            rep, suite, f"c.Phi_{j}", ks.c.apply(phis[j]),
            phis[j - 1].scale((j - 1) * (m + 1)) + phis[j + m - 1].scale(hinv),
        )
        _series_eq_case(rep, suite, f"d.Phi_{j}", ks.d.apply(phis[j]), phis[j + 1])
        _series_eq_case(rep, suite, f"d_inv.Phi_{j+1}", ks.d_inv.apply(phis[j + 1]), phis[j])
    return rep


def _op_residual_case(rep: Report, suite: str, name: str, op: ZOperator):
    bad = None
    for order, s in sorted(op.drop_zero().terms.items()):
        v = s.first_violation()
        if v is not None:
            bad = f"order d^{order}, first residual at z^{v[0]}"
            break
    rep.add(suite, name, bad is None, bad or "")


def check_commutation(m: int, N, depth: int) -> Report:
    """[a,b] = (m+1) b and [c,d] = m+1 as operator identities up to floors."""
    rep = Report()
    suite = f"ks-commutation[m={m},N={N}]"
    ks = ks_operators(m, N, depth)
    _op_residual_case(rep, suite, "[a,b]=(m+1)b", z_commutator(ks.a, ks.b) - ks.b.scale(m + 1))
    _op_residual_case(
        rep, suite, "[c,d]=m+1", z_commutator(ks.c, ks.d) - ZOperator.identity().scale(m + 1)
    )
    _op_residual_case(
        rep, suite, "d.d_inv=1", ks.d.compose(ks.d_inv) - ZOperator.identity()
    )
    _op_residual_case(
        rep, suite, "d_inv.d=1", ks.d_inv.compose(ks.d) - ZOperator.identity()
    )
    return rep


def _shape_case(rep: Report, suite: str, name: str, op: ZOperator, lead_order: int, lead: LaurentSeries):
    """op must equal lead at d^lead_order plus strictly negative z-orders."""
    ok, why = True, ""
    for order, s in op.drop_zero().terms.items():
        probe = s - lead if order == lead_order else s
        t = probe.top()
        if t is not None and t >= 0:
            ok, why = False, f"order d^{order} has z^{t} term"
            break
    rep.add(suite, name, ok, why)


def check_canonical_pair(m: int, N, depth: int) -> Report:
    """Prop-level checks: P Phi_1 = 0, [P,Q] = 1, leading shapes, and the
    ladder Q Phi_j = Phi_{j+1} + (j-1) h Phi_{j-1} (m=2) or Phi_{j+1} (m>=3)."""
    rep = Report()
    suite = f"canonical-pair[m={m},N={N}]"
    p, q, ks = canonical_pair(m, N, depth)
    _shape_case(rep, suite, "P in ddz + D_-", p, 1, LaurentSeries.z_power(0))
    _shape_case(rep, suite, "Q in z + D_-", q, 0, LaurentSeries.z_power(1))
    _op_residual_case(rep, suite, "[P,Q]=1", z_commutator(p, q) - ZOperator.identity())
    K = (depth + m + 4) // m + 1
    phis = {j: phi_series_gen(m, N, j, K) for j in range(0, m + 5)}
    _series_eq_case(rep, suite, "P.Phi_1=0", p.apply(phis[1]), LaurentSeries.zero())
    for j in range(1, 4):
        expect = phis[j + 1]
        if m == 2 and j > 1:
            expect = expect + phis[j - 1].scale(Coefficient.monomial(j - 1, h=1))
        _series_eq_case(rep, suite, f"Q.Phi_{j} ladder", q.apply(phis[j]), expect)
    return rep


def check_spectral_curve(m: int, N, j_max: int, depth: int) -> Report:
    """Quantum spectral curve residuals:

      ((m+1)(m+1-j+N) h d^-m + b d^-(m+1) - 1) Phi_j = 0

    plus, at m=1 and N=0, the quantum Bessel equation
    (d/dz^2 + (2/h) d/dz + 1/(4 z^2)) Phi_1 = 0, and the closing identity
    h^-1 d^(m-1) (curve operator at j=1) = c - h^-1 d^(m-1) for N=0."""
    rep = Report()
    suite = f"spectral-curve[m={m},N={N}]"
    K = (depth + j_max + 2 * m + 2) // m + 1
    ks = ks_operators(m, N, depth + j_max + 2 * m + 2)
    nc = n_coeff(N)
    dm = ks.d_inv.power(m)
    dm1 = ks.d_inv.power(m + 1)
    b_dm1 = ks.b.compose(dm1)
    hpow = Coefficient.monomial(1, h=1)
    for j in range(1, j_max + 1):
        phi = phi_series_gen(m, N, j, K)
        coeff = (Coefficient.rational(m + 1 - j) + nc).scale(m + 1) * hpow
        resid = dm.apply(phi).scale(coeff) + b_dm1.apply(phi) - phi
        _series_eq_case(rep, suite, f"curve residual j={j}", resid, LaurentSeries.zero())
    if m == 1 and nc.is_zero():
        bessel = (
            ZOperator.ddz(2)
            + ZOperator.ddz(1).scale(Coefficient.monomial(2, h=-1))
            + ZOperator.mul_by(LaurentSeries.z_power(-2, QQ(1, 4)))
        )
        phi1 = phi_series(1, 1, K)
        _series_eq_case(rep, suite, "quantum Bessel", bessel.apply(phi1), LaurentSeries.zero())
    if nc.is_zero() and m >= 2:
        hinv = Coefficient.monomial(1, h=-1)
        curve = dm.scale(Coefficient.monomial(m * (m + 1), h=1)) + b_dm1 - ZOperator.identity()
        lhs = ks.d.power(m - 1).scale(hinv).compose(curve)
        rhs = ks.c - ks.d.power(m - 1).scale(hinv)
        _op_residual_case(rep, suite, "closing identity (j=1)", lhs - rhs)
    return rep
