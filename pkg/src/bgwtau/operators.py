"""Normal-ordered differential operators in the KP times.

An operator is a finite sum of terms  coeff * t-monomial * d-monomial  with
every derivative standing to the right of every time variable.  Both the
t-part and the derivative part reuse TimeMonomial ((k, order) pairs).

The infinite generator families (Virasoro L_m, cubic M_k, the constraint
families) are materialized to a degree bound d: a term is included iff its
derivative part has weighted order sum <= d, which is exactly the set of
terms that can act nontrivially on polynomials of weighted degree <= d.
Materializing to a larger bound never changes the action on such
polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .algebra import (
    COEFF_ONE,
    Coefficient,
    MONO_ONE,
    TimeMonomial,
    TimePolynomial,
)
from .rational import QQ


def n_coeff(N) -> Coefficient:
    """Coefficient for an N binding: the string "symbolic" keeps N formal."""
    if isinstance(N, Coefficient):
        return N
    if N == "symbolic":
        return Coefficient.monomial(1, n=1)
    return Coefficient.rational(QQ(N))


class DiffOperator:
    """Finite normal-ordered operator: dict (tpart, dpart) -> Coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[tuple[TimeMonomial, TimeMonomial], Coefficient] = (
            terms if terms is not None else {}
        )

    @classmethod
    def zero(cls) -> "DiffOperator":
        return cls({})

    @classmethod
    def identity(cls, coeff=None) -> "DiffOperator":
        c = coeff if coeff is not None else COEFF_ONE
        c = c if isinstance(c, Coefficient) else Coefficient.rational(c)
        return cls({(MONO_ONE, MONO_ONE): c} if c else {})

    @classmethod
    def from_terms(cls, items) -> "DiffOperator":
        """items: iterable of (coeff, tpart, dpart); merges duplicates."""
        op = cls({})
        for c, tm, dm in items:
            c = c if isinstance(c, Coefficient) else Coefficient.rational(c)
            op.add_term(c, tm, dm)
        return op

    def add_term(self, coeff: Coefficient, tpart: TimeMonomial, dpart: TimeMonomial) -> None:
        key = (tpart, dpart)
        cur = self.terms.get(key)
        if cur is None:
            if coeff:
                self.terms[key] = coeff
        else:
            s = cur + coeff
            if s:
                self.terms[key] = s
            else:
                del self.terms[key]

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        out = DiffOperator(dict(self.terms))
        for (tm, dm), c in other.terms.items():
            out.add_term(c, tm, dm)
        return out

    def __neg__(self) -> "DiffOperator":
        return DiffOperator({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return self + (-other)

    def scale(self, c) -> "DiffOperator":
        c = c if isinstance(c, Coefficient) else Coefficient.rational(c)
        out = DiffOperator({})
        for (tm, dm), c0 in self.terms.items():
            out.add_term(c0 * c, tm, dm)
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, DiffOperator) and self.terms == other.terms

    def apply(self, p: TimePolynomial) -> TimePolynomial:
        """Exact Leibniz application; linear in p."""
        out = TimePolynomial({})
        for (tm, dm), c in self.terms.items():
            for pm, pc in p.terms.items():
                fac = 1
                reduced = None
                for k, order in dm.exps:
                    e = pm.exponent(k)
                    if e < order:
                        fac = 0
                        break
                    for i in range(order):
                        fac *= e - i
                    if reduced is None:
                        reduced = dict(pm.exps)
                    if e == order:
                        del reduced[k]
                    else:
                        reduced[k] = e - order
                if fac == 0:
                    continue
                mono = pm if reduced is None else TimeMonomial(tuple(sorted(reduced.items())))
                out.add_term(tm * mono, c * pc if fac == 1 else (c * pc).scale(fac))
        return out

    def compose(self, other: "DiffOperator") -> "DiffOperator":
        """self after other, normal-ordered (self's derivatives Leibniz across
        other's t-part)."""
        out = DiffOperator({})
        for (tA, dA), cA in self.terms.items():
            for (tB, dB), cB in other.terms.items():
                c0 = cA * cB
                # distribute each derivative of dA over tB or pass it through
                splits = [(1, dict(tB.exps), {})]
                for k, a in dA.exps:
                    new = []
                    for fac, texps, dpass in splits:
                        e = texps.get(k, 0)
                        top = min(a, e)
                        binom = 1
                        ffac = 1
                        for i in range(top + 1):
                            if i:
                                binom = binom * (a - i + 1) // i
                                ffac *= e - i + 1
                            t2 = dict(texps)
                            if i:
                                if e == i:
                                    del t2[k]
                                else:
                                    t2[k] = e - i
                            d2 = dict(dpass)
                            if a - i:
                                d2[k] = a - i
                            new.append((fac * binom * ffac, t2, d2))
                    splits = new
                for fac, texps, dpass in splits:
                    tpart = tA * TimeMonomial(tuple(sorted(texps.items())))
                    dd = dict(dB.exps)
                    for k, o in dpass.items():
                        dd[k] = dd.get(k, 0) + o
                    dpart = TimeMonomial(tuple(sorted(dd.items())))
                    out.add_term(c0.scale(fac), tpart, dpart)
        return out

    def max_creation_shift(self) -> int:
        return max((tm.degree - dm.degree for tm, dm in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (tm, dm), c in sorted(
            self.terms.items(), key=lambda kv: (kv[0][1].exps, kv[0][0].exps)
        ):
            s = f"({c!r})"
            if tm.exps:
                s += f"*{tm!r}"
            for k, e in dm.exps:
                s += f"*d{k}" + (f"^{e}" if e > 1 else "")
            bits.append(s)
        return " + ".join(bits)


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """a b - b a; correct on polynomials of weighted degree <= d whenever both
    factors are materialized to d plus the other's creation shift."""
    return a.compose(b) - b.compose(a)


def _reattach(body: str, dsuffix: str) -> list[str]:
    # a multi-atom coefficient (several h/N/j monomials) shares one dpart;
    # append the d-factors to each serialized atom
    pieces, cur = [], ""
    for ch in body:
        if ch in "+-" and cur and not cur.endswith("^"):
            pieces.append(cur)
            cur = ch if ch == "-" else ""
        else:
            cur += ch
    pieces.append(cur)
    return [p + dsuffix for p in pieces]


def operator_text(op: DiffOperator) -> str:
    """Serialize in the polynomial text grammar extended with d<k> factors
    for d/dt_k (normal-ordered: all d-factors after the t- and scalar
    factors).  Deterministic: terms sorted by (dpart, tpart, coefficient
    key)."""
    from .algebra import canonical_text

    bits = []
    for (tm, dm), c in sorted(
        op.terms.items(), key=lambda kv: (kv[0][1].exps, kv[0][0].exps)
    ):
        body = canonical_text(TimePolynomial({tm: c}))
        dsuffix = "".join(f"*d{k}" + (f"^{e}" if e > 1 else "") for k, e in dm.exps)
        if "+" in body[1:] or "-" in body[1:]:
            bits.extend(_reattach(body, dsuffix))
        else:
            bits.append(body + dsuffix)
    out = ""
    for b in bits:
        if out and not b.startswith("-"):
            out += "+"
        out += b
    return out or "0"


def parse_operator(text: str) -> DiffOperator:
    """Parse the operator text grammar (inverse of operator_text)."""
    import re

    from .algebra import parse_polynomial

    s = "".join(text.split())
    if s == "0":
        return DiffOperator.zero()
    pieces, cur = [], ""
    for ch in s:
        if ch in "+-" and cur and not cur.endswith("^"):
            pieces.append(cur)
            cur = ch if ch == "-" else ""
        else:
            cur += ch
    pieces.append(cur)
    op = DiffOperator({})
    for piece in pieces:
        mt = re.match(r"^(.*?)((?:\*d\d+(?:\^\d+)?)*)$", piece)
        poly = parse_polynomial(mt.group(1))
        dvars: dict[int, int] = {}
        for fm in re.finditer(r"\*d(\d+)(?:\^(\d+))?", mt.group(2)):
            k = int(fm.group(1))
            dvars[k] = dvars.get(k, 0) + int(fm.group(2) or 1)
        dm = TimeMonomial.from_dict(dvars)
        for tm, c in poly.terms.items():
            op.add_term(c, tm, dm)
    return op


@dataclass(frozen=True)
class OperatorFamily:
    """Indexed family materialized on demand; shift is the weighted-degree
    shift of every member's action."""

    rule: Callable[[int, int], DiffOperator]
    shift: int

    def materialize(self, k: int, bound: int) -> DiffOperator:
        return self.rule(k, bound)


# ---------------------------------------------------------------------------
# Heisenberg-Virasoro and cubic generators


def current(k: int) -> DiffOperator:
    """J_k: d/dt_k (k>0), 0 (k=0), -k t_{-k} (k<0)."""
    if k > 0:
        return DiffOperator({(MONO_ONE, TimeMonomial.var(k)): COEFF_ONE})
    if k == 0:
        return DiffOperator.zero()
    return DiffOperator({(TimeMonomial.var(-k), MONO_ONE): Coefficient.rational(-k)})


def virasoro(m: int, bound: int) -> DiffOperator:
    """L_m materialized to derivative weight <= bound."""
    op = DiffOperator({})
    half = QQ(1, 2)
    if m <= -2:
        for a in range(1, -m):
            b = -m - a
            op.add_term(
                Coefficient.rational(half * a * b),
                TimeMonomial.var(a) * TimeMonomial.var(b),
                MONO_ONE,
            )
    for k in range(max(1, 1 - m), bound - m + 1):
        op.add_term(Coefficient.rational(k), TimeMonomial.var(k), TimeMonomial.var(k + m))
    if 2 <= m <= bound:
        for a in range(1, m):
            op.add_term(
                Coefficient.rational(half),
                MONO_ONE,
                TimeMonomial.var(a) * TimeMonomial.var(m - a),
            )
    return op


def cubic(k: int, bound: int) -> DiffOperator:
    """M_k materialized to derivative weight <= bound."""
    op = DiffOperator({})
    third = QQ(1, 3)
    if k <= -3:
        for a in range(1, -k - 1):
            for b in range(1, -k - a):
                c = -k - a - b
                op.add_term(
                    Coefficient.rational(third * a * b * c),
                    TimeMonomial.var(a) * TimeMonomial.var(b) * TimeMonomial.var(c),
                    MONO_ONE,
                )
    # a b t_a t_b d_c with c = a + b + k
    for c in range(1, bound + 1):
        s = c - k  # = a + b
        for a in range(1, s):
            b = s - a
            op.add_term(
                Coefficient.rational(a * b),
                TimeMonomial.var(a) * TimeMonomial.var(b),
                TimeMonomial.var(c),
            )
    # a t_a d_b d_c with a = b + c - k
    for b in range(1, bound):
        for c in range(1, bound - b + 1):
            a = b + c - k
            if a >= 1:
                op.add_term(
                    Coefficient.rational(a),
                    TimeMonomial.var(a),
                    TimeMonomial.var(b) * TimeMonomial.var(c),
                )
    if 3 <= k <= bound:
        for a in range(1, k - 1):
            for b in range(1, k - a):
                c = k - a - b
                op.add_term(
                    Coefficient.rational(third),
                    MONO_ONE,
                    TimeMonomial.var(a) * TimeMonomial.var(b) * TimeMonomial.var(c),
                )
    return op


def euler(bound: int) -> DiffOperator:
    """The grading operator sum k t_k d/dt_k (equals L_0)."""
    return virasoro(0, bound)


CURRENTS = OperatorFamily(lambda k, d: current(k), 0)
VIRASORO = OperatorFamily(virasoro, 0)
CUBIC = OperatorFamily(cubic, 0)


# ---------------------------------------------------------------------------
# W3 constraint operators for the (generalized) higher BGW tau-functions


def c_constant(m: int, N) -> Coefficient:
    """C_{m,N} = m(m+2)/12 - N^2 m."""
    nc = n_coeff(N)
    return Coefficient.rational(QQ(m * (m + 2), 12)) - (nc * nc).scale(m)


def a_constant(m: int, N) -> Coefficient:
    """A_{m,N} = N (m-1)."""
    return n_coeff(N).scale(m - 1)


def constraint(m: int, N, kind: str, k: int, bound: int) -> DiffOperator:
    """The operator annihilating tau^(m,N): kind "J" (k>=1), "L" (k>=0) or
    "M" (k>=-1), including the 1/h and 1/h^2 pieces and the delta_{k,0}
    constants.  N=0 gives the undeformed family."""
    if kind == "J":
        if k < 1:
            raise ValueError("constraint index out of range: J needs k >= 1")
        return current((m + 1) * k).scale(QQ(1, m + 1))
    if kind == "L":
        if k < 0:
            raise ValueError("constraint index out of range: L needs k >= 0")
        op = virasoro((m + 1) * k, bound)
        op = op - current((m + 1) * k + m).scale(Coefficient.monomial(1, h=-1))
        if k == 0:
            op = op + DiffOperator.identity(c_constant(m, N).scale(QQ(1, 2)))
        return op.scale(QQ(1, m + 1))
    if kind == "M":
        if k < -1:
            raise ValueError("constraint index out of range: M needs k >= -1")
        cmn = c_constant(m, N)
        amn = a_constant(m, N)
        op = cubic((m + 1) * k, bound)
        op = op - virasoro((m + 1) * k + m, bound).scale(Coefficient.monomial(2, h=-1))
        op = op + current((m + 1) * k + 2 * m).scale(Coefficient.monomial(1, h=-2))
        op = op + current((m + 1) * k).scale(cmn)
        op = op - virasoro((m + 1) * k, bound).scale(amn)
        op = op + current((m + 1) * k + m).scale(amn * Coefficient.monomial(1, h=-1))
        if k == 0:
            const = amn.scale(QQ(-1, 3)) * (
                cmn.scale(QQ(1, 2)) + Coefficient.rational(QQ(m * m + 2 * m, 12))
            )
            op = op + DiffOperator.identity(const)
        return op.scale(QQ(1, m + 1))
    raise ValueError(f"unknown constraint kind {kind!r}")


def constraint_index_bound(m: int, max_degree: int) -> int:
    """Largest k for which some piece of the J/L/M constraint can act
    nontrivially on polynomials of weighted degree <= max_degree (the pure
    annihilator J_{(m+1)k} is the last to die)."""
    return max_degree // (m + 1)
