"""Univariate polynomials whose coefficients are polynomials in parameters."""

from __future__ import annotations

from multistat.exactnum import as_rational, normalize
from multistat.polycore import dense
from multistat.polycore.multipoly import DomainError, MultiPoly, StructuralError


class UniPoly:
    """``sum(coeffs[i] * variable**i)`` with ``coeffs`` over the ``params`` ring.

    The parameter-free case uses ``params == ()`` and constant coefficients.
    """

    __slots__ = ("variable", "params", "coeffs")

    def __init__(self, variable, coeffs, params=None):
        coeffs = list(coeffs)
        if params is None:
            params = coeffs[0].variables if coeffs and isinstance(coeffs[0], MultiPoly) else ()
        params = tuple(params)
        if variable in params:
            raise StructuralError(f"main variable {variable!r} cannot also be a parameter")
        lifted = []
        for c in coeffs:
            if isinstance(c, MultiPoly):
                if c.variables != params:
                    c = c.align(params)
                lifted.append(c)
            else:
                lifted.append(MultiPoly.constant(params, c))
        while lifted and lifted[-1].is_zero():
            lifted.pop()
        self.variable = variable
        self.params = params
        self.coeffs = lifted

    @classmethod
    def from_rationals(cls, variable, coeffs):
        return cls(variable, [as_rational(c) for c in coeffs], ())

    @classmethod
    def from_multipoly(cls, p, variable):
        params = tuple(v for v in p.variables if v != variable)
        i = p.variables.index(variable)
        buckets = {}
        for exps, c in p.terms.items():
            buckets.setdefault(exps[i], {})[exps[:i] + exps[i + 1:]] = c
        top = max(buckets) if buckets else -1
        coeffs = [MultiPoly._from_clean(params, buckets.get(d, {})) for d in range(top + 1)]
        return cls(variable, coeffs, params)

    def to_multipoly(self, variables=None):
        if variables is None:
            variables = (self.variable,) + self.params
        variables = tuple(variables)
        pos = variables.index(self.variable)
        idx = [variables.index(p) for p in self.params]
        terms = {}
        n = len(variables)
        for d, c in enumerate(self.coeffs):
            for exps, v in c.terms.items():
                new = [0] * n
                new[pos] = d
                for j, e in zip(idx, exps):
                    new[j] = e
                terms[tuple(new)] = v
        return MultiPoly._from_clean(variables, terms)

    # queries -------------------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading_coefficient(self):
        return self.coeffs[-1] if self.coeffs else MultiPoly.zero(self.params)

    lc = leading_coefficient

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else MultiPoly.zero(self.params)

    def is_rational(self):
        return all(c.is_constant() for c in self.coeffs)

    def rational_coeffs(self):
        if not self.is_rational():
            raise StructuralError("coefficients still depend on parameters")
        return [c.constant_value() for c in self.coeffs]

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.variable == other.variable and self.params == other.params and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.variable, self.params, tuple(self.coeffs)))

    def __repr__(self):
        return f"UniPoly({self.to_text()!r}, variable={self.variable!r})"

    def to_text(self):
        return self.to_multipoly().to_text()

    __str__ = to_text

    # arithmetic --------------------------------------------------------------
    def _zero(self):
        return MultiPoly.zero(self.params)

    def _same(self, other):
        if self.variable != other.variable or self.params != other.params:
            raise StructuralError("univariate polynomials over different rings")

    def __add__(self, other):
        self._same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.variable, [self.coeff(i) + other.coeff(i) for i in range(n)], self.params)

    def __sub__(self, other):
        self._same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.variable, [self.coeff(i) - other.coeff(i) for i in range(n)], self.params)

    def __neg__(self):
        return UniPoly(self.variable, [-c for c in self.coeffs], self.params)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return self.scale(other)
        self._same(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly(self.variable, [], self.params)
        out = [self._zero() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return UniPoly(self.variable, out, self.params)

    def scale(self, c):
        if isinstance(c, MultiPoly) and c.variables != self.params:
            c = c.align(self.params)
        return UniPoly(self.variable, [a * c for a in self.coeffs], self.params)

    def shift(self, k):
        """Multiply by ``variable**k``."""
        return UniPoly(self.variable, [self._zero()] * k + self.coeffs, self.params)

    def exact_div_scalar(self, c):
        return UniPoly(self.variable, [a.exact_div(c) for a in self.coeffs], self.params)

    def derivative(self):
        return UniPoly(self.variable, [self.coeffs[i] * i for i in range(1, len(self.coeffs))], self.params)

    def prem(self, other):
        """Pseudo-remainder ``lc(other)**(deg self - deg other + 1) * self mod other``."""
        self._same(other)
        if other.is_zero():
            raise ZeroDivisionError("pseudo-division by zero polynomial")
        db = other.degree
        if self.degree < db:
            return self
        lb = other.coeffs[-1]
        r = list(self.coeffs)
        e = len(r) - 1 - db + 1
        while r and len(r) - 1 >= db:
            k = len(r) - 1 - db
            la = r[-1]
            r = [lb * x for x in r]
            for i, y in enumerate(other.coeffs):
                if not y.is_zero():
                    r[i + k] = r[i + k] - la * y
            while r and r[-1].is_zero():
                r.pop()
            e -= 1
        if e > 0 and r:
            f = lb ** e
            r = [f * x for x in r]
        return UniPoly(self.variable, r, self.params)

    def substitute_params(self, values):
        """Substitute rationals for parameters; fully bound results use ``params == ()``."""
        coeffs = [c.substitute_values(values) for c in self.coeffs]
        left = tuple(p for p in self.params if p not in values)
        return UniPoly(self.variable, [c.align(left) if left != self.params else c for c in coeffs], left)

    def dense(self):
        """Rational coefficient list, low degree first."""
        return self.rational_coeffs()

    def primitive(self):
        """Divide out rational content; positive leading coefficient (rational case)."""
        if self.is_rational():
            return UniPoly(self.variable, dense.primitive_int(self.rational_coeffs()), ())
        poly = self.to_multipoly().primitive()
        lead = UniPoly.from_multipoly(poly, self.variable)
        if lead.coeffs and lead.coeffs[-1].leading_coefficient() < 0:
            lead = -lead
        return UniPoly(self.variable, lead.coeffs, lead.params).align_params(self.params)

    def align_params(self, params):
        params = tuple(params)
        if params == self.params:
            return self
        return UniPoly(self.variable, [c.align(params) for c in self.coeffs], params)

    def evaluate(self, x):
        """Exact value at a rational (parameter-free case)."""
        return normalize(dense.eval_exact(self.rational_coeffs(), as_rational(x)))


def rational_unipoly(variable, coeffs):
    return UniPoly.from_rationals(variable, coeffs)


def univariate_gcd(a, b):
    """Monic gcd of two rational univariate polynomials."""
    if a.variable != b.variable:
        raise StructuralError("gcd of polynomials in different variables")
    g = dense.gcd(a.rational_coeffs(), b.rational_coeffs())
    return UniPoly.from_rationals(a.variable, g)


def squarefree_part(p):
    """``p / gcd(p, p')``, primitive with positive leading coefficient."""
    if p.is_zero():
        raise DomainError("zero polynomial has no squarefree part")
    return UniPoly.from_rationals(p.variable, dense.squarefree_part(p.rational_coeffs()))

