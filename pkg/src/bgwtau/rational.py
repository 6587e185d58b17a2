"""Exact rational scalars.

gmpy2.mpq is used when available (it is several times faster on the large
numerators the tau recursions produce); fractions.Fraction is a drop-in
fallback.  Only the shared API is used: construction from ints/strings,
arithmetic, comparison, hashing, .numerator/.denominator.
"""

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ

QQ0 = QQ(0)
QQ1 = QQ(1)


def rat_str(q) -> str:
    """Canonical p/q form, lowest terms, explicit denominator."""
    return f"{q.numerator}/{q.denominator}"
