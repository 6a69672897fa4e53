"""Multivariate gcd: recursive contents plus a subresultant remainder sequence."""

from __future__ import annotations

from fractions import Fraction

from multistat.polycore import dense
from multistat.polycore.multipoly import MultiPoly
from multistat.polycore.unipoly import UniPoly


def _coeff_list(p, var):
    parts = p.coefficients_in(var)
    top = max(parts) if parts else -1
    zero = MultiPoly.zero(p.variables)
    return [parts.get(d, zero) for d in range(top + 1)]


def content_in(p, var):
    """gcd of the coefficients of ``p`` viewed as a polynomial in ``var``."""
    coeffs = [c for c in _coeff_list(p, var) if c]
    if not coeffs:
        return MultiPoly.zero(p.variables)
    g = coeffs[0].primitive()
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = poly_gcd(g, c)
    if g.is_constant():
        return MultiPoly.constant(p.variables, 1)
    return g




def _images_coprime(a, b, var, others, tries=8):
    """True when one specialization of ``others`` proves ``a``, ``b`` coprime in ``var``.

    If both leading coefficients survive the specialization, a common factor
    of positive degree in ``var`` keeps its degree in the images, so coprime
    images certify coprime primitive parts.  False means undecided.
    """
    la = a.coefficients_in(var)[a.degree(var)]
    lb = b.coefficients_in(var)[b.degree(var)]
    for t in range(tries):
        point = {v: Fraction(2 + i + 5 * t, 1 + (i + t) % 3) for i, v in enumerate(others)}
        if not la.substitute_values(point) or not lb.substitute_values(point):
            continue
        ia = UniPoly.from_multipoly(a.substitute_values(point), var).rational_coeffs()
        ib = UniPoly.from_multipoly(b.substitute_values(point), var).rational_coeffs()
        return len(dense.gcd(ia, ib)) == 1
    return False


def poly_gcd(a, b):
    """Greatest common divisor, primitive with positive leading coefficient."""
    if a.variables != b.variables:
        raise ValueError("gcd requires a common variable list")
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    used = [v for v in a.variables if v in set(a.used_variables()) | set(b.used_variables())]
    if not used:
        return MultiPoly.constant(a.variables, 1)
    if len(used) < len(a.variables):
        ring = tuple(used)
        return poly_gcd(a.align(ring), b.align(ring)).align(a.variables)
    ma, mb = a.monomial_content(), b.monomial_content()
    if any(ma) or any(mb):
        mono = tuple(min(x, y) for x, y in zip(ma, mb))
        g = poly_gcd(a.strip_monomials(), b.strip_monomials())
        return g * MultiPoly._from_clean(a.variables, {mono: 1}) if any(mono) else g
    var = used[0]
    ca = content_in(a, var)
    cb = content_in(b, var)
    c = poly_gcd(ca, cb)
    pa = a.exact_div(ca)
    pb = b.exact_div(cb)
    if pa.degree(var) == 0 or pb.degree(var) == 0:
        return c.primitive()
    if _images_coprime(pa, pb, var, used[1:]):
        return c.primitive()
    from multistat.polycore.resultants import subresultant_prs

    chain, _ = subresultant_prs(UniPoly.from_multipoly(pa, var), UniPoly.from_multipoly(pb, var))
    last = next(p for p in reversed(chain) if not p.is_zero())
    if last.degree == 0:
        return c.primitive()
    g = last.to_multipoly(a.variables)
    g = g.exact_div(content_in(g, var))
    return (c * g).primitive()


def poly_lcm(a, b):
    return (a * b).exact_div(poly_gcd(a, b)).primitive()
