"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

from multistat.exactnum import Interval, as_rational, normalize


class StructuralError(ValueError):
    """Raised when polynomials over different variable lists are combined."""


class DomainError(ValueError):
    """An operation is undefined for this input (zero polynomial, degree 0, ...)."""


def _glex_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    """Polynomial over an ordered tuple of variables.

    ``terms`` maps exponent tuples to nonzero rational coefficients (``int``
    when integral, ``Fraction`` otherwise).  Instances are treated as
    immutable; every operation returns a new polynomial.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        clean = {}
        n = len(self.variables)
        if terms:
            for exps, c in terms.items():
                if len(exps) != n:
                    raise StructuralError(f"exponent vector {exps} does not match variables {self.variables}")
                if c:
                    clean[tuple(exps)] = normalize(as_rational(c))
        self.terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, variables, terms):
        obj = object.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        c = normalize(as_rational(c))
        return cls._from_clean(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def zero(cls, variables):
        return cls._from_clean(tuple(variables), {})

    @classmethod
    def var(cls, variables, name):
        variables = tuple(variables)
        exps = [0] * len(variables)
        exps[variables.index(name)] = 1
        return cls._from_clean(variables, {tuple(exps): 1})

    # basic queries -----------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if not self.terms:
            return 0
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def used_variables(self):
        used = set()
        for exps in self.terms:
            for v, e in zip(self.variables, exps):
                if e:
                    used.add(v)
        return [v for v in self.variables if v in used]

    def degree(self, var):
        if not self.terms:
            return -1
        i = self.variables.index(var)
        return max(exps[i] for exps in self.terms)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(exps) for exps in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _glex_key(t[0]), reverse=True)

    def leading_term(self):
        return max(self.terms.items(), key=lambda t: _glex_key(t[0]))

    def leading_coefficient(self):
        return self.leading_term()[1] if self.terms else 0

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if self.variables == other.variables:
                return self.terms == other.terms
            if set(other.used_variables()) != set(self.used_variables()):
                return False
            return self.terms == other.align(self.variables).terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r}, variables={self.variables})"

    def __str__(self):
        return self.to_text()

    # ring alignment ----------------------------------------------------
    def align(self, variables):
        """Re-express over ``variables`` (a superset of the variables in use)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        idx = []
        for i, v in enumerate(self.variables):
            if v in pos:
                idx.append((i, pos[v]))
        used = self.used_variables()
        missing = [v for v in used if v not in pos]
        if missing:
            raise StructuralError(f"cannot drop variables {missing} that occur in the polynomial")
        n = len(variables)
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * n
            for i, j in idx:
                new[j] = exps[i]
            terms[tuple(new)] = c
        return MultiPoly._from_clean(variables, terms)

    def _check(self, other):
        if self.variables != other.variables:
            raise StructuralError(f"variable lists differ: {self.variables} vs {other.variables}")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.variables, other)

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            v = terms.get(exps)
            if v is None:
                terms[exps] = c
            else:
                v = v + c
                if v:
                    terms[exps] = normalize(v) if isinstance(v, Fraction) else v
                else:
                    del terms[exps]
        return MultiPoly._from_clean(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._from_clean(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = normalize(as_rational(other))
            if not c:
                return MultiPoly._from_clean(self.variables, {})
            if c == 1:
                return self
            return MultiPoly._from_clean(self.variables, {e: normalize(v * c) for e, v in self.terms.items()})
        self._check(other)
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        terms = {}
        get = terms.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = get(e)
                terms[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly._from_clean(self.variables, {e: normalize(v) if isinstance(v, Fraction) else v for e, v in terms.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c):
        return self * c

    def exact_div(self, other):
        """Quotient of an exact division; raises ``ArithmeticError`` otherwise."""
        if not isinstance(other, MultiPoly):
            return self * (Fraction(1) / as_rational(other))
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_constant():
            return self * (Fraction(1) / other.constant_value())
        q, r = self.divmod_lead(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def divmod_lead(self, other):
        """Multivariate division by leading terms (graded lex)."""
        lt_exps, lt_c = other.leading_term()
        rest = MultiPoly._from_clean(other.variables, {e: c for e, c in other.terms.items() if e != lt_exps})
        rem = dict(self.terms)
        quot = {}
        leftover = {}
        while rem:
            exps, c = max(rem.items(), key=lambda t: _glex_key(t[0]))
            shift = tuple(a - b for a, b in zip(exps, lt_exps))
            if min(shift) < 0:
                leftover[exps] = c
                del rem[exps]
                continue
            if isinstance(c, int) and isinstance(lt_c, int) and c % lt_c == 0:
                qc = c // lt_c
            else:
                qc = normalize(Fraction(c) / lt_c)
            quot[shift] = qc
            del rem[exps]
            for e, rc in rest.terms.items():
                ne = tuple(a + b for a, b in zip(e, shift))
                v = rem.get(ne, 0) - qc * rc
                if v:
                    rem[ne] = normalize(v) if isinstance(v, Fraction) else v
                else:
                    rem.pop(ne, None)
        return MultiPoly._from_clean(self.variables, quot), MultiPoly._from_clean(self.variables, leftover)

    # calculus / substitution -------------------------------------------
    def derivative(self, var):
        i = self.variables.index(var)
        terms = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                ne = exps[:i] + (e - 1,) + exps[i + 1:]
                terms[ne] = c * e
        return MultiPoly._from_clean(self.variables, terms)

    def coefficients_in(self, var):
        """Map ``degree -> coefficient polynomial`` w.r.t. ``var`` (same ring)."""
        i = self.variables.index(var)
        out = {}
        for exps, c in self.terms.items():
            d = exps[i]
            out.setdefault(d, {})[exps[:i] + (0,) + exps[i + 1:]] = c
        return {d: MultiPoly._from_clean(self.variables, t) for d, t in out.items()}

    def substitute_values(self, values):
        """Substitute exact rationals for some variables; the ring is unchanged."""
        idx = [(self.variables.index(v), as_rational(q)) for v, q in values.items() if v in self.variables]
        if not idx:
            return self
        terms = {}
        for exps, c in self.terms.items():
            new = list(exps)
            val = c
            for i, q in idx:
                if new[i]:
                    val = val * q ** new[i]
                    new[i] = 0
            if val:
                key = tuple(new)
                v = terms.get(key, 0) + val
                if v:
                    terms[key] = normalize(v) if isinstance(v, Fraction) else v
                else:
                    terms.pop(key, None)
        return MultiPoly._from_clean(self.variables, terms)

    def evaluate(self, values):
        """Exact rational value; ``values`` must cover the variables in use."""
        total = 0
        for exps, c in self.terms.items():
            t = c
            for v, e in zip(self.variables, exps):
                if e:
                    t = t * values[v] ** e
            total += t
        return normalize(as_rational(total))

    def evaluate_interval(self, boxes):
        """Interval enclosure over ``boxes`` (variable -> Interval)."""
        total = Interval.point(0)
        cache = {}
        for exps, c in self.terms.items():
            t = Interval.point(c)
            for v, e in zip(self.variables, exps):
                if e:
                    key = (v, e)
                    pw = cache.get(key)
                    if pw is None:
                        pw = boxes[v] ** e
                        cache[key] = pw
                    t = t * pw
            total = total + t
        return total

    def compose(self, var, poly):
        """Substitute the polynomial ``poly`` (same ring) for ``var``."""
        self._check(poly)
        parts = self.coefficients_in(var)
        top = max(parts) if parts else 0
        result = MultiPoly.zero(self.variables)
        for d in range(top, -1, -1):
            result = result * poly
            if d in parts:
                result = result + parts[d]
        return result

    # normalization -----------------------------------------------------
    def content(self):
        """Positive rational ``c`` such that ``self / c`` has coprime integer coefficients."""
        if not self.terms:
            return 0
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        g = reduce(math.gcd, nums)
        l = reduce(lambda a, b: a * b // math.gcd(a, b), dens)
        return normalize(Fraction(abs(g), l))

    def primitive(self):
        """Integer-coefficient, content-free, positive leading coefficient (graded lex)."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        if c == 1:
            return self
        inv = Fraction(1) / c
        return MultiPoly._from_clean(self.variables, {e: normalize(v * inv) for e, v in self.terms.items()})

    def monomial_content(self):
        if not self.terms:
            return (0,) * len(self.variables)
        it = iter(self.terms)
        m = list(next(it))
        for exps in it:
            for i, e in enumerate(exps):
                if e < m[i]:
                    m[i] = e
        return tuple(m)

    def strip_monomials(self, variables=None):
        """Divide out the largest monomial factor (restricted to ``variables``)."""
        m = list(self.monomial_content())
        if variables is not None:
            allowed = set(variables)
            m = [e if v in allowed else 0 for v, e in zip(self.variables, m)]
        if not any(m):
            return self
        return MultiPoly._from_clean(self.variables, {tuple(a - b for a, b in zip(e, m)): c for e, c in self.terms.items()})

    def is_integral(self):
        return all(isinstance(c, int) for c in self.terms.values())

    # text ----------------------------------------------------------------
    def to_text(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = []
            for v, e in zip(self.variables, exps):
                if e == 1:
                    mono.append(v)
                elif e:
                    mono.append(f"{v}^{e}")
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = "*".join(mono) if a == 1 else f"{_rat_text(a)}*" + "*".join(mono)
            else:
                body = _rat_text(a)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)


def _rat_text(q):
    if isinstance(q, Fraction) and q.denominator != 1:
        return f"{q.numerator}/{q.denominator}"
    return str(int(q))


def poly_arith(a, b, op):
    """Exact ``add``/``sub``/``mul`` of two polynomials over the same variables."""
    if not isinstance(a, MultiPoly) or not isinstance(b, MultiPoly):
        raise StructuralError("poly_arith expects two MultiPoly operands")
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def common_ring(*polys):
    """Union of the variable lists, keeping first-seen order."""
    seen = []
    for p in polys:
        for v in p.variables:
            if v not in seen:
                seen.append(v)
    return tuple(seen)
