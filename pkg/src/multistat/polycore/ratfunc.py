"""Rational functions and polynomial substitution."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from multistat.exactnum import as_rational
from multistat.polycore.gcd import poly_gcd
from multistat.polycore.multipoly import MultiPoly, StructuralError


class RationalFunction:
    """Reduced quotient ``numerator / denominator`` of polynomials over one ring.

    Constant denominators are folded into the numerator; otherwise the
    denominator is an integer primitive polynomial with positive leading
    coefficient.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=None, reduce=True):
        if not isinstance(numerator, MultiPoly):
            raise TypeError("numerator must be a MultiPoly")
        if denominator is None:
            denominator = MultiPoly.constant(numerator.variables, 1)
        elif not isinstance(denominator, MultiPoly):
            denominator = MultiPoly.constant(numerator.variables, denominator)
        if numerator.variables != denominator.variables:
            raise StructuralError("numerator and denominator over different variables")
        if denominator.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        if reduce and not denominator.is_constant() and not numerator.is_zero():
            g = poly_gcd(numerator, denominator)
            if not g.is_constant():
                numerator = numerator.exact_div(g)
                denominator = denominator.exact_div(g)
        if numerator.is_zero():
            denominator = MultiPoly.constant(numerator.variables, 1)
        elif denominator.is_constant():
            numerator = numerator * (Fraction(1) / denominator.constant_value())
            denominator = MultiPoly.constant(numerator.variables, 1)
        else:
            prim = denominator.primitive()
            k = Fraction(denominator.leading_coefficient()) / prim.leading_coefficient()
            if k != 1:
                numerator = numerator * (1 / k)
            denominator = prim
        self.numerator = numerator
        self.denominator = denominator

    @classmethod
    def from_poly(cls, p):
        return cls(p, None, reduce=False)

    @property
    def variables(self):
        return self.numerator.variables

    def is_polynomial(self):
        return self.denominator.is_constant()

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            other = RationalFunction.from_poly(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self.numerator * other.denominator - other.numerator * self.denominator).is_zero()

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"

    def to_text(self):
        if self.is_polynomial():
            return self.numerator.to_text()
        return f"({self.numerator.to_text()}) / ({self.denominator.to_text()})"

    __str__ = to_text

    def align(self, variables):
        return RationalFunction(self.numerator.align(variables), self.denominator.align(variables), reduce=False)

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return RationalFunction.from_poly(other)
        return RationalFunction.from_poly(MultiPoly.constant(self.variables, other))

    def __add__(self, other):
        o = self._lift(other)
        return RationalFunction(self.numerator * o.denominator + o.numerator * self.denominator,
                                self.denominator * o.denominator)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator, reduce=False)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.numerator.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.numerator * o.denominator, self.denominator * o.numerator)

    def evaluate(self, values):
        d = self.denominator.evaluate(values)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the given point")
        return Fraction(self.numerator.evaluate(values)) / d

    def evaluate_interval(self, boxes):
        num = self.numerator.evaluate_interval(boxes)
        if self.is_polynomial():
            return num
        return num / self.denominator.evaluate_interval(boxes)

    def used_variables(self):
        used = set(self.numerator.used_variables()) | set(self.denominator.used_variables())
        return [v for v in self.variables if v in used]


def _binding(value, variables):
    if isinstance(value, RationalFunction):
        return value.align(variables) if value.variables != variables else value
    if isinstance(value, MultiPoly):
        return RationalFunction.from_poly(value.align(variables) if value.variables != variables else value)
    return RationalFunction.from_poly(MultiPoly.constant(variables, as_rational(value)))


def substitute_parts(p, bindings):
    """Unreduced ``(numerator, denominator)`` of ``p`` under simultaneous ``bindings``."""
    variables = p.variables
    extra = []
    for v, r in bindings.items():
        if v in variables and isinstance(r, (MultiPoly, RationalFunction)):
            extra.extend(w for w in r.variables if w not in variables and w not in extra)
    if extra:
        variables = variables + tuple(extra)
        p = p.align(variables)
    binds = {v: _binding(r, variables) for v, r in bindings.items() if v in variables}
    idx = {v: variables.index(v) for v in binds}
    maxdeg = {v: p.degree(v) for v in binds}
    binds = {v: r for v, r in binds.items() if maxdeg[v] > 0}
    if not binds:
        return p, MultiPoly.constant(variables, 1)
    num_pow = {}
    den_pow = {}

    def power(cache, v, base, e):
        key = (v, e)
        if key not in cache:
            cache[key] = base ** e
        return cache[key]

    grouped = {}
    for exps, c in p.terms.items():
        key = tuple(exps[idx[v]] for v in binds)
        rest = list(exps)
        for v in binds:
            rest[idx[v]] = 0
        grouped.setdefault(key, {})[tuple(rest)] = c
    numerator = MultiPoly.zero(variables)
    for key, terms in grouped.items():
        t = MultiPoly._from_clean(variables, terms)
        for (v, r), e in zip(binds.items(), key):
            m = maxdeg[v]
            if e:
                t = t * power(num_pow, v, r.numerator, e)
            if m - e and not r.denominator.is_constant():
                t = t * power(den_pow, v, r.denominator, m - e)
        numerator = numerator + t
    denominator = MultiPoly.constant(variables, 1)
    for v, r in binds.items():
        if not r.denominator.is_constant():
            denominator = denominator * r.denominator ** maxdeg[v]
    return numerator, denominator


def substitute(p, bindings):
    """Apply ``bindings`` (variable -> RationalFunction/MultiPoly/rational) to ``p``."""
    if isinstance(p, RationalFunction):
        n1, d1 = substitute_parts(p.numerator, bindings)
        n2, d2 = substitute_parts(p.denominator, bindings)
        return RationalFunction(n1 * d2, d1 * n2)
    num, den = substitute_parts(p, bindings)
    return RationalFunction(num, den)


def clear_denominators(r):
    """Integer-coefficient ``(numerator, denominator)`` with the same quotient.

    Each polynomial is scaled to primitive integer form and the remaining
    rational factor ``p/q`` is distributed as ``(p*N, q*D)``.
    """
    if isinstance(r, MultiPoly):
        r = RationalFunction.from_poly(r)
    num, den = r.numerator, r.denominator
    if num.is_zero():
        return num, MultiPoly.constant(num.variables, 1)
    cn = _signed_content(num)
    cd = _signed_content(den)
    k = Fraction(cn) / cd
    n_prim = num * (Fraction(1) / cn)
    d_prim = den * (Fraction(1) / cd)
    return n_prim * k.numerator, d_prim * k.denominator


def _signed_content(p):
    nums = [c.numerator for c in p.terms.values()]
    dens = [c.denominator for c in p.terms.values()]
    g = 0
    for n in nums:
        g = gcd(g, n)
    l = 1
    for d in dens:
        l = lcm(l, d)
    return Fraction(g, l)
