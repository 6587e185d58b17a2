"""Sparse exact polynomial arithmetic over QQ[N,j][h,h^-1] in the KP times.

Representation:

  Coefficient     dict (h_exp, N_exp, j_exp) -> rational, no zero entries.
                  h_exp may be negative (constraint operators carry 1/h and
                  1/h^2); N_exp and j_exp are >= 0.
  TimeMonomial    sorted tuple ((k, e), ...) for t_k^e with k >= 1, e >= 1;
                  the empty tuple is the unit monomial.  weighted degree is
                  sum k*e.
  TimePolynomial  dict TimeMonomial -> Coefficient, no zero coefficients.

All arithmetic is exact; there is no floating point anywhere in this module.

Canonical text grammar (also the golden-file format):

  term    ::= rat ['*' factors]
  factors ::= ('t'INT['^'INT] | 'h'['^'INT] | 'N'['^'INT] | 'j'['^'INT]) {'*' ...}

terms joined by '+'/'-', rationals printed as "p/q" in lowest terms,
negative exponents allowed for h ("h^-2").  The zero polynomial prints "0".
"""

from __future__ import annotations

import re

from .rational import QQ, QQ0, QQ1, rat_str

INHOMOGENEOUS = "inhomogeneous"

# Exponent triples (h_exp, N_exp, j_exp) are packed into one int so that
# multiplying monomials is a single integer addition:
#   key = (h_exp + 2^15) << 32 | N_exp << 16 | j_exp
# h_exp may be negative (|h_exp| < 2^15); N_exp, j_exp in [0, 2^16).
_HOFF = 1 << 15
_HBASE = _HOFF << 32
_MASK16 = (1 << 16) - 1


def _ckey(h: int, n: int, j: int) -> int:
    if not (-_HOFF < h < _HOFF and 0 <= n < _MASK16 and 0 <= j < _MASK16):
        raise ValueError(f"exponent out of packing range: {(h, n, j)}")
    return ((h + _HOFF) << 32) | (n << 16) | j


def _cunpack(key: int) -> tuple[int, int, int]:
    return (key >> 32) - _HOFF, (key >> 16) & _MASK16, key & _MASK16


_KEY1 = _ckey(0, 0, 0)


class Coefficient:
    """Element of QQ[N,j][h,h^-1]; terms maps packed exponent keys to
    nonzero rationals (see _ckey)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms must already be canonical (no zero rationals)
        self.terms: dict[int, object] = terms if terms is not None else {}

    @classmethod
    def rational(cls, q) -> "Coefficient":
        q = QQ(q)
        return cls({_KEY1: q} if q else {})

    @classmethod
    def monomial(cls, q, h: int = 0, n: int = 0, j: int = 0) -> "Coefficient":
        if n < 0 or j < 0:
            raise ValueError("N and j exponents must be nonnegative")
        q = QQ(q)
        return cls({_ckey(h, n, j): q} if q else {})

    @classmethod
    def zero(cls) -> "Coefficient":
        return cls({})

    @classmethod
    def one(cls) -> "Coefficient":
        return cls({_KEY1: QQ1})

    def items_hnj(self):
        """Iterate ((h_exp, N_exp, j_exp), rational) pairs."""
        for k, q in self.terms.items():
            yield _cunpack(k), q

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Coefficient):
            return self.terms == other.terms
        if isinstance(other, (int, str)) or hasattr(other, "denominator"):
            return self.terms == Coefficient.rational(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Coefficient") -> "Coefficient":
        out = dict(self.terms)
        get = out.get
        for k, q in other.terms.items():
            s = get(k)
            if s is None:
                out[k] = q
            else:
                s = s + q
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Coefficient(out)

    def __neg__(self) -> "Coefficient":
        return Coefficient({k: -q for k, q in self.terms.items()})

    def __sub__(self, other: "Coefficient") -> "Coefficient":
        return self + (-other)

    def __mul__(self, other) -> "Coefficient":
        if not isinstance(other, Coefficient):
            return self.scale(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return Coefficient({})
        if len(b) < len(a):
            a, b = b, a
        if len(a) == 1:
            (ka, qa), = a.items()
            if ka == _KEY1:
                return Coefficient({k: v * qa for k, v in b.items()})
            off = ka - _HBASE
            return Coefficient({k + off: qa * q for k, q in b.items()})
        out: dict[int, object] = {}
        get = out.get
        bitems = list(b.items())
        for k1, q1 in a.items():
            off = k1 - _HBASE
            for k2, q2 in bitems:
                k = k2 + off
                s = get(k)
                out[k] = q1 * q2 if s is None else s + q1 * q2
        return Coefficient({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def scale(self, q) -> "Coefficient":
        q = QQ(q)
        if not q:
            return Coefficient({})
        return Coefficient({k: v * q for k, v in self.terms.items()})

    def __pow__(self, e: int) -> "Coefficient":
        if e < 0:
            raise ValueError("negative powers of coefficients are not defined")
        out = Coefficient.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def times_h(self, k: int) -> "Coefficient":
        """Multiply by h^k (k may be negative)."""
        off = k << 32
        return Coefficient({key + off: q for key, q in self.terms.items()})

    def h_part(self, p: int) -> "Coefficient":
        """Terms multiplying h^p, with the h-power stripped."""
        off = p << 32
        return Coefficient(
            {k - off: q for k, q in self.terms.items() if (k >> 32) - _HOFF == p}
        )

    def h_range(self) -> tuple[int, int]:
        hs = [(k >> 32) - _HOFF for k in self.terms]
        return (min(hs), max(hs)) if hs else (0, 0)

    def is_rational(self) -> bool:
        return not self.terms or set(self.terms) == {_KEY1}

    def as_rational(self):
        if not self.terms:
            return QQ0
        if set(self.terms) != {_KEY1}:
            raise ValueError("coefficient is not a plain rational: %r" % self)
        return self.terms[_KEY1]

    def substitute(self, n=None, j=None, h=None) -> "Coefficient":
        """Bind N, j, h.  n and h bind to rationals; j to a rational or a
        Coefficient (polynomial in N).  h=0 with a stored negative h-power
        raises (pole at h=0)."""
        out = Coefficient.zero()
        jpoly = j if isinstance(j, Coefficient) else None
        jpowers = [COEFF_ONE] if jpoly is not None else None
        for (he, ne, je), q in self.items_hnj():
            if h is not None:
                hq = QQ(h)
                if not hq and he < 0:
                    raise ValueError("pole at h=0")
                q = q * hq ** he if he >= 0 else q / hq ** (-he)
                he = 0
            if n is not None:
                q = q * QQ(n) ** ne
                ne = 0
            if j is not None and jpoly is None:
                q = q * QQ(j) ** je
                je = 0
            term = Coefficient({_ckey(he, ne, je): q} if q else {})
            if jpoly is not None and je:
                while len(jpowers) <= je:
                    jpowers.append(jpowers[-1] * jpoly)
                term = Coefficient({_ckey(he, ne, 0): q} if q else {}) * jpowers[je]
            out = out + term
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (h, n, j), q in sorted(self.items_hnj()):
            s = rat_str(q)
            for name, e in (("h", h), ("N", n), ("j", j)):
                if e:
                    s += f"*{name}" + (f"^{e}" if e != 1 else "")
            bits.append(s)
        return "+".join(bits).replace("+-", "-")


COEFF_ZERO = Coefficient.zero()
COEFF_ONE = Coefficient.one()


class TimeMonomial:
    """Monomial in the times t_1, t_2, ...; exps is a sorted tuple of
    (variable index, positive exponent) pairs."""

    __slots__ = ("exps",)

    def __init__(self, exps=()):
        self.exps: tuple[tuple[int, int], ...] = tuple(exps)

    @classmethod
    def var(cls, k: int, e: int = 1) -> "TimeMonomial":
        if k < 1 or e < 1:
            raise ValueError("variable index and exponent must be positive")
        return cls(((k, e),))

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "TimeMonomial":
        return cls(tuple(sorted((k, e) for k, e in d.items() if e)))

    @property
    def degree(self) -> int:
        return sum(k * e for k, e in self.exps)

    def __mul__(self, other: "TimeMonomial") -> "TimeMonomial":
        if not self.exps:
            return other
        if not other.exps:
            return self
        d = dict(self.exps)
        for k, e in other.exps:
            d[k] = d.get(k, 0) + e
        return TimeMonomial(tuple(sorted(d.items())))

    def exponent(self, k: int) -> int:
        for kk, e in self.exps:
            if kk == k:
                return e
        return 0

    def __eq__(self, other):
        return isinstance(other, TimeMonomial) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __repr__(self):
        if not self.exps:
            return "1"
        return "*".join(f"t{k}" + (f"^{e}" if e > 1 else "") for k, e in self.exps)


MONO_ONE = TimeMonomial()


class TimePolynomial:
    """Sparse polynomial in the times over QQ[N,j][h,h^-1]."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[TimeMonomial, Coefficient] = terms if terms is not None else {}

    @classmethod
    def zero(cls) -> "TimePolynomial":
        return cls({})

    @classmethod
    def one(cls) -> "TimePolynomial":
        return cls({MONO_ONE: Coefficient.one()})

    @classmethod
    def constant(cls, c) -> "TimePolynomial":
        c = c if isinstance(c, Coefficient) else Coefficient.rational(c)
        return cls({MONO_ONE: c} if c else {})

    @classmethod
    def var(cls, k: int, e: int = 1) -> "TimePolynomial":
        return cls({TimeMonomial.var(k, e): Coefficient.one()})

    @classmethod
    def term(cls, coeff, mono: TimeMonomial) -> "TimePolynomial":
        c = coeff if isinstance(coeff, Coefficient) else Coefficient.rational(coeff)
        return cls({mono: c} if c else {})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TimePolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((m, frozenset(c.terms.items())) for m, c in self.terms.items()))

    def add_term(self, mono: TimeMonomial, coeff: Coefficient) -> None:
        # in-place accumulation used by the hot loops; keeps canonical form
        cur = self.terms.get(mono)
        if cur is None:
            if coeff:
                self.terms[mono] = coeff
        else:
            s = cur + coeff
            if s:
                self.terms[mono] = s
            else:
                del self.terms[mono]

    def __add__(self, other: "TimePolynomial") -> "TimePolynomial":
        out = TimePolynomial(dict(self.terms))
        for m, c in other.terms.items():
            out.add_term(m, c)
        return out

    def __neg__(self) -> "TimePolynomial":
        return TimePolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "TimePolynomial") -> "TimePolynomial":
        return self + (-other)

    def __mul__(self, other: "TimePolynomial") -> "TimePolynomial":
        out = TimePolynomial({})
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out.add_term(m1 * m2, c1 * c2)
        return out

    def scale(self, c) -> "TimePolynomial":
        c = c if isinstance(c, Coefficient) else Coefficient.rational(c)
        if not c:
            return TimePolynomial({})
        out = TimePolynomial({})
        for m, c0 in self.terms.items():
            out.add_term(m, c0 * c)
        return out

    def times_h(self, k: int) -> "TimePolynomial":
        return TimePolynomial({m: c.times_h(k) for m, c in self.terms.items()})

    def derivative(self, k: int, order: int = 1) -> "TimePolynomial":
        """order-th partial derivative by t_k."""
        out = TimePolynomial({})
        for m, c in self.terms.items():
            e = m.exponent(k)
            if e < order:
                continue
            fac = 1
            for i in range(order):
                fac *= e - i
            d = dict(m.exps)
            if e == order:
                del d[k]
            else:
                d[k] = e - order
            out.add_term(TimeMonomial(tuple(sorted(d.items()))), c.scale(fac))
        return out

    def h_coefficient(self, p: int) -> "TimePolynomial":
        """Polynomial multiplying h^p, with the h-power stripped."""
        out = TimePolynomial({})
        for m, c in self.terms.items():
            sel = c.h_part(p)
            if sel:
                out.add_term(m, sel)
        return out

    def h_range(self) -> tuple[int, int]:
        lo, hi = None, None
        for c in self.terms.values():
            l, h = c.h_range()
            lo = l if lo is None else min(lo, l)
            hi = h if hi is None else max(hi, h)
        return (0, 0) if lo is None else (lo, hi)

    def variables(self) -> set[int]:
        out: set[int] = set()
        for m in self.terms:
            out.update(k for k, _ in m.exps)
        return out

    def max_degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def substitute(self, n=None, j=None, h=None) -> "TimePolynomial":
        out = TimePolynomial({})
        for m, c in self.terms.items():
            out.add_term(m, c.substitute(n=n, j=j, h=h))
        return out

    def eval_times(self, values: dict[int, object]) -> Coefficient:
        """Evaluate at rational time values (all variables must be bound)."""
        out = Coefficient.zero()
        for m, c in self.terms.items():
            q = QQ1
            for k, e in m.exps:
                if k not in values:
                    raise KeyError(f"no value for t{k}")
                q = q * QQ(values[k]) ** e
            out = out + c.scale(q)
        return out

    def __repr__(self):
        return canonical_text(self)


# ---------------------------------------------------------------------------
# spec-level operations


def poly_mul(a: TimePolynomial, b: TimePolynomial) -> TimePolynomial:
    return a * b


def weighted_degree(p: TimePolynomial):
    """Common weighted degree of all terms (deg t_k = k), the string
    "inhomogeneous" if terms disagree; the zero polynomial has no degree."""
    if not p.terms:
        raise ValueError("undefined degree: zero polynomial")
    degs = {m.degree for m in p.terms}
    return degs.pop() if len(degs) == 1 else INHOMOGENEOUS


def substitute(p: TimePolynomial, bindings: dict) -> TimePolynomial:
    """Bind any of {"N": rational, "j": rational or Coefficient, "h": rational}."""
    unknown = set(bindings) - {"N", "j", "h"}
    if unknown:
        raise ValueError(f"unknown binding(s): {sorted(unknown)}")
    return p.substitute(n=bindings.get("N"), j=bindings.get("j"), h=bindings.get("h"))


def _atoms(p: TimePolynomial):
    for m, c in p.terms.items():
        for (h, n, j), q in c.items_hnj():
            yield (h, m.degree, m.exps, -n, -j), (h, n, j, m, q)


def canonical_text(p: TimePolynomial) -> str:
    """Deterministic serialization; parses back to an equal polynomial.

    Atom order: h-exponent asc, weighted degree asc, lexicographic on the
    (variable, exponent) pairs, then N- and j-exponent descending.
    """
    atoms = sorted(_atoms(p), key=lambda kv: kv[0])
    if not atoms:
        return "0"
    bits = []
    for _, (h, n, j, m, q) in atoms:
        s = rat_str(q)
        for name, e in (("h", h), ("N", n), ("j", j)):
            if e:
                s += f"*{name}" + (f"^{e}" if e != 1 else "")
        for k, e in m.exps:
            s += f"*t{k}" + (f"^{e}" if e != 1 else "")
        if bits and not s.startswith("-"):
            bits.append("+")
        bits.append(s)
    return "".join(bits)


_TERM_RE = re.compile(r"^([+-]?\d+(?:/\d+)?)((?:\*(?:t\d+|[hNj])(?:\^-?\d+)?)*)$")
_FACTOR_RE = re.compile(r"\*(t(\d+)|[hNj])(?:\^(-?\d+))?")


def parse_polynomial(text: str) -> TimePolynomial:
    """Parse the canonical text grammar (bare integers allowed as rationals)."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return TimePolynomial.zero()
    # split into signed terms; a '-' directly after '^' is an exponent sign
    pieces, cur = [], ""
    for i, ch in enumerate(s):
        if ch in "+-" and cur and not cur.endswith("^"):
            pieces.append(cur)
            cur = ch if ch == "-" else ""
        else:
            cur += ch
    pieces.append(cur)
    out = TimePolynomial.zero()
    for piece in pieces:
        mt = _TERM_RE.match(piece)
        if not mt:
            raise ValueError(f"bad term {piece!r}")
        q = QQ(mt.group(1))
        h = n = j = 0
        tvars: dict[int, int] = {}
        for fm in _FACTOR_RE.finditer(mt.group(2)):
            name, tidx, exp = fm.group(1), fm.group(2), fm.group(3)
            e = int(exp) if exp is not None else 1
            if tidx is not None:
                k = int(tidx)
                if e < 1:
                    raise ValueError(f"bad t-exponent in {piece!r}")
                tvars[k] = tvars.get(k, 0) + e
            elif name == "h":
                h += e
            elif name == "N":
                if e < 0:
                    raise ValueError("negative N exponent")
                n += e
            else:
                if e < 0:
                    raise ValueError("negative j exponent")
                j += e
        out.add_term(TimeMonomial.from_dict(tvars), Coefficient.monomial(q, h=h, n=n, j=j))
    return out
