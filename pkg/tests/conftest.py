"""Shared helpers: monomial enumeration and the linear-independence marker
trick for checking operator identities on a whole degree window at once."""

from __future__ import annotations

from bgwtau.algebra import Coefficient, TimeMonomial, TimePolynomial
from bgwtau.schur import partitions


def monomials_up_to(maxdeg: int, variable_filter=None) -> list[TimeMonomial]:
    out = [TimeMonomial()]
    for n in range(1, maxdeg + 1):
        for mu in partitions(n):
            if variable_filter is not None and not all(variable_filter(p) for p in mu):
                continue
            d: dict[int, int] = {}
            for p in mu:
                d[p] = d.get(p, 0) + 1
            out.append(TimeMonomial.from_dict(d))
    return out


def marker_poly(monomials) -> TimePolynomial:
    """sum_i j^i * m_i: operator linearity makes one application on this
    polynomial equivalent to applications on every monomial separately."""
    p = TimePolynomial({})
    for i, m in enumerate(monomials):
        p.add_term(m, Coefficient.monomial(1, j=i))
    return p


def ops_agree_on(a, b, probe: TimePolynomial) -> bool:
    return a.apply(probe) == b.apply(probe)
