"""Real root isolation and exact real algebraic numbers.

Isolation runs Descartes bisection (Vincent-Collins-Akritas) on the
squarefree integer part; every interval it returns is then certified with a
Sturm count.  Comparison and sign determination refine intervals and fall
back on exact gcd/resultant tests once refinement alone stalls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from multistat.exactnum import Interval, as_rational, format_decimal, normalize
from multistat.polycore import dense
from multistat.polycore.multipoly import MultiPoly, StructuralError
from multistat.polycore.unipoly import UniPoly

ALL_REALS = "all-reals"
POSITIVE_ONLY = "positive-only"

LESS = "less"
EQUAL = "equal"
GREATER = "greater"

NEGATIVE = "negative"
ZERO = "zero"
POSITIVE = "positive"

MAX_REFINE_STEPS = 10_000
# halving rounds of plain interval refinement before the exact fallback runs
FALLBACK_AFTER = 64


class EndpointRootError(ValueError):
    """An interval endpoint is itself a root; move it by an exact rational step."""

    def __init__(self, endpoint):
        self.endpoint = endpoint
        super().__init__(f"interval endpoint {endpoint} is a root; shift it by a small rational step and retry")


class RootDomainError(ValueError):
    pass


def _coeffs(p):
    if isinstance(p, UniPoly):
        return dense.trim(p.rational_coeffs())
    if isinstance(p, MultiPoly):
        used = p.used_variables()
        if len(used) > 1:
            raise StructuralError(f"expected a univariate polynomial, got variables {used}")
        if not used:
            return dense.trim([p.constant_value()])
        return dense.trim(UniPoly.from_multipoly(p.align(tuple(used)), used[0]).rational_coeffs())
    return dense.trim(list(p))


def _variable(p, default="x"):
    if isinstance(p, UniPoly):
        return p.variable
    if isinstance(p, MultiPoly):
        used = p.used_variables()
        return used[0] if used else default
    return default


def _content_positive(c):
    """Divide by the positive rational content, keeping every sign."""
    ints = dense.primitive_int(c)
    if ints and (ints[-1] > 0) != (c[-1] > 0):
        ints = [-x for x in ints]
    return ints


@lru_cache(maxsize=256)
def _sturm_chain(coeffs):
    c = list(coeffs)
    chain = [_content_positive(c)]
    d = dense.derivative(c)
    if d:
        chain.append(_content_positive(d))
    while len(chain[-1]) > 1:
        _, r = dense.divmod_field(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_content_positive([-x for x in r]))
    return tuple(tuple(s) for s in chain)


def sturm_sequence(p):
    return [list(s) for s in _sturm_chain(tuple(_coeffs(p)))]


def _variations_at(chain, x):
    return dense.sign_variations([dense.sign_at(s, x) for s in chain])


def _variations_at_infinity(chain, sign):
    out = []
    for s in chain:
        lead = 1 if s[-1] > 0 else -1
        if sign < 0 and (len(s) - 1) % 2:
            lead = -lead
        out.append(lead)
    return dense.sign_variations(out)


def sturm_count(p, interval):
    """Distinct real roots of the squarefree ``p`` in the open ``interval``.

    ``interval`` may be an Interval or a ``(lo, hi)`` pair; ``None`` for an
    endpoint means infinity.
    """
    c = _coeffs(p)
    if not c:
        raise RootDomainError("zero polynomial has no finite root count")
    lo, hi = (interval.lo, interval.hi) if isinstance(interval, Interval) else interval
    for e in (lo, hi):
        if e is not None and dense.sign_at(c, as_rational(e)) == 0:
            raise EndpointRootError(e)
    if lo is not None and hi is not None and lo == hi:
        return 0
    chain = _sturm_chain(tuple(c))
    vlo = _variations_at_infinity(chain, -1) if lo is None else _variations_at(chain, as_rational(lo))
    vhi = _variations_at_infinity(chain, 1) if hi is None else _variations_at(chain, as_rational(hi))
    return vlo - vhi


def _roots_in_closed(c, lo, hi):
    """Root count of squarefree ``c`` on the closed interval ``[lo, hi]``.

    For a squarefree polynomial ``V(lo) - V(hi)`` counts the roots in
    ``(lo, hi]`` even when an endpoint is itself a root.
    """
    at_lo = 1 if dense.sign_at(c, lo) == 0 else 0
    if lo == hi:
        return at_lo
    chain = _sturm_chain(tuple(c))
    return at_lo + _variations_at(chain, lo) - _variations_at(chain, hi)


# ---------------------------------------------------------------------------
# Real algebraic numbers


class RealAlgebraicNumber:
    """Root of a squarefree integer polynomial pinned by an isolating interval.

    A degenerate interval ``[q, q]`` marks an exactly known rational root.
    """

    __slots__ = ("defining", "isolation", "_c", "_slo")

    def __init__(self, defining, isolation, check=True):
        c = dense.primitive_int(_coeffs(defining))
        if len(c) < 2:
            raise RootDomainError("defining polynomial must have positive degree")
        if not isinstance(defining, UniPoly):
            defining = UniPoly.from_rationals(_variable(defining), c)
        elif defining.params:
            raise StructuralError("defining polynomial must have rational coefficients")
        if not isinstance(isolation, Interval):
            isolation = Interval(*isolation)
        self.defining = UniPoly.from_rationals(defining.variable, c)
        self.isolation = isolation
        self._c = c
        self._slo = dense.sign_at(c, isolation.lo)
        if check:
            if isolation.is_point():
                if self._slo != 0:
                    raise RootDomainError("point isolation is not a root")
            elif self._slo == 0 or dense.sign_at(c, isolation.hi) == 0:
                if _roots_in_closed(c, isolation.lo, isolation.hi) != 1:
                    raise RootDomainError("interval does not isolate exactly one root")
            elif sturm_count(c, isolation) != 1:
                raise RootDomainError("interval does not isolate exactly one root")

    @classmethod
    def from_rational(cls, q, variable="x"):
        q = as_rational(q)
        return cls(UniPoly.from_rationals(variable, [-q, 1]), Interval.point(q), check=False)

    @property
    def coefficients(self):
        return list(self._c)

    def is_rational(self):
        return self.isolation.is_point()

    def rational_value(self):
        if self.isolation.is_point():
            return self.isolation.lo
        if len(self._c) == 2:
            return normalize(Fraction(-self._c[0], self._c[1]))
        return None

    def _with(self, lo, hi):
        obj = object.__new__(RealAlgebraicNumber)
        obj.defining = self.defining
        obj._c = self._c
        obj.isolation = Interval(lo, hi)
        obj._slo = dense.sign_at(self._c, lo)
        return obj

    def _bisect(self):
        """One halving step; returns a new number (possibly a rational point)."""
        iv = self.isolation
        if iv.is_point():
            return self
        lo, hi = iv.lo, iv.hi
        if self._slo == 0:
            return self._with(lo, lo)
        if dense.sign_at(self._c, hi) == 0:
            return self._with(hi, hi)
        m = Fraction(lo + hi, 2)
        sm = dense.sign_at(self._c, m)
        if sm == 0:
            return self._with(m, m)
        if sm == self._slo:
            return self._with(m, hi)
        return self._with(lo, m)

    def refine(self, width):
        return refine(self, width)

    def approx(self, digits=6):
        """Decimal string correct to ``digits`` significant digits."""
        a = self
        for _ in range(MAX_REFINE_STEPS):
            iv = a.isolation
            if iv.is_point():
                return format_decimal(iv.lo, digits)
            s_lo = format_decimal(iv.lo, digits)
            if s_lo == format_decimal(iv.hi, digits):
                return s_lo
            mag = max(abs(iv.lo), abs(iv.hi))
            if iv.width * 10 ** (digits + 3) < mag:
                # straddles a rounding boundary; midpoint is good to within half an ulp
                return format_decimal(iv.midpoint, digits)
            a = a._bisect()
        return format_decimal(a.isolation.midpoint, digits)

    def __float__(self):
        a = refine(self, Fraction(1, 2**60) * max(1, abs(self.isolation.lo)))
        return float(a.isolation.midpoint)

    def render(self, digits=6):
        iv = self.isolation
        poly = self.defining.to_text()
        return (f"root of {poly} in ({format_decimal(iv.lo, max(digits, 8))}, "
                f"{format_decimal(iv.hi, max(digits, 8))}) ≈ {self.approx(digits)}")

    __str__ = render

    def __repr__(self):
        return f"RealAlgebraicNumber({self.defining.to_text()!r}, ({self.isolation.lo}, {self.isolation.hi}))"

    # ordering via compare()
    def __eq__(self, other):
        if isinstance(other, (RealAlgebraicNumber, int, Fraction)):
            return compare(self, other) == EQUAL
        return NotImplemented

    def __lt__(self, other):
        return compare(self, other) == LESS

    def __le__(self, other):
        return compare(self, other) != GREATER

    def __gt__(self, other):
        return compare(self, other) == GREATER

    def __ge__(self, other):
        return compare(self, other) != LESS

    def __hash__(self):
        # equal numbers may carry different defining polynomials
        return hash(round(float(self), 9))


@dataclass(frozen=True)
class IsolationResult:
    roots: tuple
    multiplicity_free: bool

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __getitem__(self, i):
        return self.roots[i]


def _secant_step(a, n):
    """Try to jump into a window of width ``width/n`` around the secant root.

    Returns the narrowed number, or None when the window misses the root.
    """
    iv = a.isolation
    lo, hi = Fraction(iv.lo), Fraction(iv.hi)
    flo, fhi = dense.eval_exact(a._c, lo), dense.eval_exact(a._c, hi)
    if flo == 0 or fhi == 0 or flo == fhi:
        return None
    w = (hi - lo) / n
    x = lo - flo * (hi - lo) / (fhi - flo)
    k = round((x - lo) / w)
    wlo, whi = max(lo, lo + (k - 1) * w), min(hi, lo + (k + 1) * w)
    if wlo >= whi:
        return None
    slo, shi = dense.sign_at(a._c, wlo), dense.sign_at(a._c, whi)
    if slo == 0:
        return a._with(wlo, wlo)
    if shi == 0:
        return a._with(whi, whi)
    if slo != shi:
        return a._with(wlo, whi)
    return None


def refine(a, width):
    """Shrink the isolating interval to width at most ``width``.

    Quadratic interval refinement: secant-guided windows whose relative size
    squares after each hit, with plain bisection after a miss.
    """
    width = as_rational(width)
    if width <= 0:
        raise ValueError("refinement width must be positive")
    n = 4
    for _ in range(MAX_REFINE_STEPS):
        if a.isolation.width <= width:
            return a
        b = _secant_step(a, n) if n > 2 else None
        if b is None:
            n = max(2, int(n ** 0.5))
            a = a._bisect()
        else:
            n = min(n * n, 2 ** 64)
            a = b
    return a


# ---------------------------------------------------------------------------
# Isolation


def _descartes_positive_intervals(c):
    """Isolate the roots of squarefree integer ``c`` in ``(0, inf)``.

    Returns a list of ``(lo, hi)`` rationals; ``lo == hi`` for exact roots.
    """
    n = len(c) - 1
    if n < 1:
        return []
    bound = dense.cauchy_bound(c)
    k = max(0, math.ceil(math.log2(bound)) if bound > 1 else 0)
    scale = 2**k
    # q(x) = c(scale * x): roots now in (0, 1)
    q = [a * scale**i for i, a in enumerate(c)]
    g = math.gcd(*q)
    q = [a // g for a in q]
    out = []
    stack = [(q, 0, 0)]  # polynomial, numerator a, level j: interval [a/2^j, (a+1)/2^j]
    while stack:
        p, a, j = stack.pop()
        if p[0] == 0:
            # root at the left endpoint (only possible after a split; recorded there)
            p = p[1:]
        rev = list(reversed(p))
        v = dense.sign_variations(dense.taylor_shift(rev, 1))
        if v == 0:
            continue
        lo = Fraction(a * scale, 2**j)
        hi = Fraction((a + 1) * scale, 2**j)
        if v == 1:
            out.append((lo, hi))
            continue
        # halve: left(x) = 2^n p(x/2), right(x) = left(x + 1)
        m = len(p) - 1
        left = [coef * 2 ** (m - i) for i, coef in enumerate(p)]
        right = dense.taylor_shift(left, 1)
        if right[0] == 0:
            out.append((Fraction((2 * a + 1) * scale, 2 ** (j + 1)),) * 2)
        stack.append((right, 2 * a + 1, j + 1))
        stack.append((left, 2 * a, j + 1))
    out.sort(key=lambda t: t[0])
    return out


def _normalize_domain(domain):
    if domain in (ALL_REALS, None):
        return ALL_REALS, None
    if domain == POSITIVE_ONLY:
        return POSITIVE_ONLY, None
    if isinstance(domain, Interval):
        return "interval", domain
    if isinstance(domain, tuple) and len(domain) == 2:
        return "interval", Interval(*domain)
    raise ValueError(f"unknown domain {domain!r}")


def isolate_real_roots(p, domain=ALL_REALS):
    """Isolate every real root of ``p`` in ``domain``.

    ``domain`` is ``"all-reals"``, ``"positive-only"`` (roots > 0) or an
    Interval (closed; roots on its boundary are kept).
    """
    raw = _coeffs(p)
    if not raw:
        raise RootDomainError("cannot isolate roots of the zero polynomial")
    var = _variable(p)
    kind, box = _normalize_domain(domain)
    sf = dense.squarefree_part(raw)
    multiplicity_free = len(sf) == len(raw)
    if len(sf) < 2:
        return IsolationResult((), multiplicity_free)
    zero_root = sf[0] == 0
    core = sf[1:] if zero_root else sf
    pieces = []
    for lo, hi in _descartes_positive_intervals(core):
        pieces.append((lo, hi))
    if kind != POSITIVE_ONLY:
        neg = [a if i % 2 == 0 else -a for i, a in enumerate(core)]
        for lo, hi in _descartes_positive_intervals(neg):
            pieces.append((-hi, -lo))
        if zero_root:
            pieces.append((Fraction(0), Fraction(0)))
    # Descartes bound: positive roots never exceed coefficient sign variations
    n_pos = sum(1 for lo, hi in pieces if lo >= 0 and hi > 0)
    if n_pos > dense.sign_variations(sf):
        raise ArithmeticError("Descartes bound violated; isolation is unsound")
    pieces.sort(key=lambda t: (t[0], t[1]))
    roots = []
    for lo, hi in pieces:
        if lo != hi:
            lo, hi = _shrink_off_roots(sf, lo, hi)
        r = RealAlgebraicNumber(UniPoly.from_rationals(var, sf), Interval(lo, hi), check=True)
        roots.append(r)
    if kind == "interval":
        roots = [r for r in (_clip(r, box) for r in roots) if r is not None]
    return IsolationResult(tuple(roots), multiplicity_free)


def _shrink_off_roots(c, lo, hi):
    """Pull endpoints that are roots (0, split points) into the open interval."""
    a, b = lo, hi
    j = 1
    while dense.sign_at(c, a) == 0 or dense.sign_at(c, b) == 0 or sturm_count(c, (a, b)) != 1:
        j += 1
        w = (hi - lo) / 2**j
        if dense.sign_at(c, lo) == 0:
            a = lo + w
        if dense.sign_at(c, hi) == 0:
            b = hi - w
    return a, b


def _clip(r, box):
    """Restrict ``r`` to ``box``; ``None`` if its root lies outside."""
    for _ in range(MAX_REFINE_STEPS):
        iv = r.isolation
        if iv.hi < box.lo or iv.lo > box.hi:
            return None
        if box.lo <= iv.lo and iv.hi <= box.hi:
            return r
        if iv.is_point():
            return r if box.contains(iv.lo) else None
        for e in (box.lo, box.hi):
            if iv.lo < e < iv.hi:
                s = dense.sign_at(r._c, e)
                if s == 0:
                    return r._with(e, e)
                if s == r._slo:
                    r = r._with(e, iv.hi)
                else:
                    r = r._with(iv.lo, e)
                iv = r.isolation
    return r


# ---------------------------------------------------------------------------
# Comparison and sign determination


def _as_ran(x):
    if isinstance(x, RealAlgebraicNumber):
        return x
    return RealAlgebraicNumber.from_rational(as_rational(x))


def _compare_rational(a, q):
    iv = a.isolation
    if iv.is_point():
        v = iv.lo
        return LESS if v < q else GREATER if v > q else EQUAL
    if q < iv.lo:
        return GREATER
    if q > iv.hi:
        return LESS
    s = dense.sign_at(a._c, q)
    if s == 0:
        return EQUAL
    if q == iv.lo:
        return GREATER
    if q == iv.hi:
        return LESS
    # root lies between lo and q exactly when the sign flips there
    return LESS if s != a._slo else GREATER


def compare(a, b):
    """Exact order of two real algebraic numbers (or rationals)."""
    if not isinstance(a, RealAlgebraicNumber) and not isinstance(b, RealAlgebraicNumber):
        a, b = as_rational(a), as_rational(b)
        return LESS if a < b else GREATER if a > b else EQUAL
    if not isinstance(b, RealAlgebraicNumber):
        return _compare_rational(a, as_rational(b))
    if not isinstance(a, RealAlgebraicNumber):
        flip = _compare_rational(b, as_rational(a))
        return {LESS: GREATER, GREATER: LESS, EQUAL: EQUAL}[flip]
    if a.isolation.is_point():
        flip = _compare_rational(b, a.isolation.lo)
        return {LESS: GREATER, GREATER: LESS, EQUAL: EQUAL}[flip]
    if b.isolation.is_point():
        return _compare_rational(a, b.isolation.lo)
    g = dense.gcd(a._c, b._c)
    g = dense.primitive_int(g) if len(g) > 1 else None
    for _ in range(MAX_REFINE_STEPS):
        ia, ib = a.isolation, b.isolation
        if ia.hi < ib.lo:
            return LESS
        if ib.hi < ia.lo:
            return GREATER
        if ia.is_point() or ib.is_point():
            return compare(a, b)
        if g is not None:
            lo, hi = max(ia.lo, ib.lo), min(ia.hi, ib.hi)
            # a common root inside the overlap is the root of both intervals
            if _roots_in_closed(g, lo, hi) > 0:
                return EQUAL
        if ia.width >= ib.width:
            a = a._bisect()
        else:
            b = b._bisect()
    raise ArithmeticError("comparison did not terminate")


def _point_value(x):
    if isinstance(x, RealAlgebraicNumber):
        return x
    return as_rational(x)


def _boxes(point):
    return {v: (x.isolation if isinstance(x, RealAlgebraicNumber) else Interval.point(x)) for v, x in point.items()}


def _sign_label(s):
    return NEGATIVE if s < 0 else POSITIVE if s > 0 else ZERO


def sign_of_poly_at(p, point):
    """Exact sign of the MultiPoly ``p`` at ``point`` (variable -> number).

    Interval evaluation with refinement first; once refinement stalls the
    value is pinned against the roots of an eliminating resultant.
    """
    point = {v: _point_value(x) for v, x in point.items()}
    missing = [v for v in p.used_variables() if v not in point]
    if missing:
        raise StructuralError(f"point does not bind {missing}")
    used = p.used_variables()
    point = {v: point[v] for v in used}
    alg = {v: x for v, x in point.items() if isinstance(x, RealAlgebraicNumber) and not x.isolation.is_point()}
    exact = {v: (x.isolation.lo if isinstance(x, RealAlgebraicNumber) else x) for v, x in point.items() if v not in alg}
    if exact:
        p = p.substitute_values(exact)
    if not alg:
        return _sign_label(Fraction(p.evaluate({})) if p.is_constant() else 0) if p.is_constant() else \
            _sign_label(p.evaluate(exact))
    for step in range(FALLBACK_AFTER):
        val = p.evaluate_interval(_boxes(alg))
        if val.lo > 0:
            return POSITIVE
        if val.hi < 0:
            return NEGATIVE
        if val.lo == val.hi == 0:
            return ZERO
        alg = {v: x._bisect() for v, x in alg.items()}
        if any(x.isolation.is_point() for x in alg.values()):
            return sign_of_poly_at(p, alg)
    return _exact_sign(p, alg)


def _exact_sign(p, alg):
    variables = tuple(alg)
    if len(variables) == 1:
        v = variables[0]
        a = alg[v]
        uni = UniPoly.from_multipoly(p.align((v,)), v)
        c = dense.trim(uni.rational_coeffs())
        g = dense.gcd(c, a._c)
        if len(g) > 1 and _roots_in_closed(dense.primitive_int(g), a.isolation.lo, a.isolation.hi) > 0:
            return ZERO
        delta = None
    else:
        delta = _zero_separation(p, alg)
    for _ in range(MAX_REFINE_STEPS):
        val = p.evaluate_interval(_boxes(alg))
        if val.lo > 0:
            return POSITIVE
        if val.hi < 0:
            return NEGATIVE
        if delta is not None and -delta < val.lo and val.hi < delta:
            return ZERO
        alg = {v: x._bisect() for v, x in alg.items()}
        if any(x.isolation.is_point() for x in alg.values()):
            return sign_of_poly_at(p, alg)
    raise ArithmeticError("sign determination did not terminate")


def _zero_separation(p, alg):
    """Radius around 0 free of other candidate values of ``p``, or ``None`` if 0 is not one.

    The candidates are the roots of ``R(z) = res_x1(d1, res_x2(d2, ... z - p))``.
    """
    from multistat.polycore.resultants import resultant

    z = "_z"
    while z in p.variables:
        z += "_"
    ring = tuple(alg) + (z,)
    expr = MultiPoly.var(ring, z) - p.align(ring)
    for v in reversed(tuple(alg)):
        d = UniPoly.from_rationals(v, alg[v]._c).to_multipoly().align(ring)
        expr = resultant(d, expr, v).align(ring)
    R = dense.trim(UniPoly.from_multipoly(expr.align((z,)), z).rational_coeffs())
    if not R:
        raise ArithmeticError("eliminating resultant vanished identically")
    if R[0] != 0:
        return None
    sf = dense.squarefree_part(R)
    roots = isolate_real_roots(UniPoly.from_rationals(z, sf))
    nearest = None
    for r in roots:
        if r.isolation.is_point() and r.isolation.lo == 0:
            continue
        while r.isolation.lo <= 0 <= r.isolation.hi and not r.isolation.is_point():
            r = r._bisect()
        d = min(abs(r.isolation.lo), abs(r.isolation.hi))
        nearest = d if nearest is None else min(nearest, d)
    return nearest if nearest is not None else Fraction(1)
