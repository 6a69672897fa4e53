"""Positive steady states at a fixed parameter value.

Solutions are assembled from a triangular system: isolate the positive
roots of the eliminated polynomial, then push each root's isolating interval
through the solved formulae bottom-up.  The Cartesian-product filter is an
independent oracle that checks candidate coordinate tuples against the
original equations.
"""

from __future__ import annotations


from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

from multistat.elimination import composed_formulae, back_formulae, triangularize
from multistat.exactnum import Interval, as_rational, format_decimal
from multistat.polycore import MultiPoly, UniPoly, resultant
from multistat.polycore import dense
from multistat.realroots import (
    EQUAL,
    LESS,
    POSITIVE_ONLY,
    RealAlgebraicNumber,
    _sturm_chain,
    _variations_at,
    _variations_at_infinity,
    compare,
    isolate_real_roots,
)

DEFAULT_TARGET_WIDTH = Fraction(1, 10**6)
MAX_ROUNDS = 40


class BlindSpotError(ValueError):
    def __init__(self, value, constraint):
        self.value = value
        self.constraint = constraint
        super().__init__(f"parameter value {value} is a blind spot: {constraint.to_text()} vanishes there")


class CertificationError(ArithmeticError):
    """A coordinate or residual interval could not be made sign-definite."""


# ---------------------------------------------------------------------------
# data


@dataclass
class SteadyState:
    coordinates: dict  # species -> Interval
    residual_width: Fraction
    root: RealAlgebraicNumber  # the main-variable coordinate
    parameter_value: Fraction | None = None
    triangular: object = field(default=None, repr=False)

    def species(self):
        return tuple(self.coordinates)

    def box(self):
        return dict(self.coordinates)

    def values(self, order=None):
        order = order or self.species()
        return [self.coordinates[s] for s in order]

    def midpoints(self, order=None):
        return [iv.midpoint for iv in self.values(order)]

    def refined(self, width):
        """The same steady state with coordinate intervals of width at most ``width``."""
        if all(iv.width <= width for iv in self.coordinates.values()):
            return self
        return assemble(self.triangular, self.root, self.parameter_value, width)

    def approx(self, species, digits=6):
        x = self.coordinates[species]
        if isinstance(x, RealAlgebraicNumber):
            return x.approx(digits)
        if not isinstance(x, Interval):
            return format_decimal(as_rational(x), digits)
        s = self
        for _ in range(MAX_ROUNDS):
            iv = s.coordinates[species]
            a, b = format_decimal(iv.lo, digits), format_decimal(iv.hi, digits)
            if a == b:
                return a
            mag = max(abs(iv.lo), abs(iv.hi))
            if iv.width * 10 ** (digits + 3) < mag:
                return format_decimal(iv.midpoint, digits)
            s = s.refined(iv.width / 1024)
        return format_decimal(s.coordinates[species].midpoint, digits)

    def render(self, digits=6, order=None):
        order = order or self.species()
        return "(" + ", ".join(self.approx(v, digits) for v in order) + ")"


@dataclass
class SolutionSet:
    parameter_value: Fraction | None
    solutions: list
    count_certificate: str
    parameter: str | None = None
    stats: object = None

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]


# ---------------------------------------------------------------------------
# blind spots and counting


def check_parameter(t, value):
    """Validate ``value`` for the free parameter; raises BlindSpotError on a side constraint root."""
    if t.free is None:
        if value is not None:
            raise ValueError("system has no free parameter")
        return None
    value = as_rational(value)
    if value <= 0:
        raise ValueError(f"parameter value must be positive, got {value}")
    for c in tuple(t.side_constraints) + tuple(t.reference_constraints):
        if c.evaluate({t.free: value}) == 0:
            raise BlindSpotError(value, c)
    return value


def _specialized(t, value):
    g = t.at(value) if t.free is not None else t.eliminated
    c = dense.trim(g.rational_coeffs())
    if not c:
        raise ArithmeticError("eliminated polynomial vanishes identically at this parameter value")
    return g, c


def count_positive(t, value=None):
    """Number of positive roots of the eliminated polynomial (Sturm count on (0, inf))."""
    value = check_parameter(t, value)
    _, c = _specialized(t, value)
    if len(c) < 2:
        return 0
    sf = dense.squarefree_part(c)
    chain = _sturm_chain(tuple(sf))
    # V(0) - V(+inf) counts the roots in (0, inf)
    return _variations_at(chain, Fraction(0)) - _variations_at_infinity(chain, 1)


# ---------------------------------------------------------------------------
# back-substitution


def _evaluate_plan(t, plan, root_box, value):
    boxes = {t.main: root_box}
    if t.free is not None:
        boxes[t.free] = Interval.point(value)
    for v, formula, dens in plan:
        den = formula.denominator.evaluate_interval(boxes)
        if den.lo <= 0 <= den.hi:
            return None, v
        boxes[v] = formula.numerator.evaluate_interval(boxes) / den
    return boxes, None


def assemble(t, root, value, target_width=DEFAULT_TARGET_WIDTH):
    """Certified coordinate box for the steady state over ``root``."""
    plan = back_formulae(t)
    target_width = as_rational(target_width)
    a = root
    width = a.isolation.width
    for _ in range(MAX_ROUNDS):
        boxes, bad = _evaluate_plan(t, plan, a.isolation, value)
        if boxes is not None:
            coords = {s: boxes[s] for s in t.system.species}
            if all(iv.width <= target_width and iv.lo > 0 for iv in coords.values()):
                return SteadyState(coords, max(iv.width for iv in coords.values()), a, value, t)
        width = min(width, a.isolation.width) / 256 if width else Fraction(1, 10**12)
        a = a.refine(max(width, Fraction(1, 2**2000)))
        if a.isolation.is_point():
            boxes, bad = _evaluate_plan(t, plan, a.isolation, value)
            if boxes is None:
                raise CertificationError(f"denominator of {bad} vanishes at an exact root")
            coords = {s: boxes[s] for s in t.system.species}
            if any(iv.lo <= 0 for iv in coords.values()):
                raise CertificationError("a coordinate is not positive at an exact root")
            return SteadyState(coords, Fraction(0), a, value, t)
    raise CertificationError(f"coordinates not certified positive within {MAX_ROUNDS} refinement rounds")


def solve_at_parameter(t, value=None, target_width=DEFAULT_TARGET_WIDTH, certify=True):
    """All positive steady states at ``value`` of the free parameter, sorted by the main variable."""
    value = check_parameter(t, value)
    g, c = _specialized(t, value)
    roots = isolate_real_roots(UniPoly.from_rationals(t.main, c), POSITIVE_ONLY)
    sols = []
    for r in roots:
        s = assemble(t, r, value, target_width)
        if certify:
            cert = residual_certificate(s, t.system, target_width, value=value)
            if not cert.ok:
                raise CertificationError(f"residuals do not contain zero: {cert.failed}")
        sols.append(s)
    sf = dense.squarefree_part(c)
    chain = _sturm_chain(tuple(sf))
    n = _variations_at(chain, Fraction(0)) - _variations_at_infinity(chain, 1)
    if n != len(sols):
        raise CertificationError(f"Sturm count {n} disagrees with {len(sols)} assembled solutions")
    poly = UniPoly.from_rationals(t.main, sf).to_text()
    cert = f"Sturm sequence of {poly} has {n} sign-variation drop(s) on (0, inf)"
    return SolutionSet(value, sols, cert, t.free)


# ---------------------------------------------------------------------------
# residuals


@dataclass
class ResidualCertificate:
    residuals: list  # (label, Interval)
    status: str  # "certified", "failed" or "inconclusive"
    failed: list = field(default_factory=list)

    @property
    def ok(self):
        return self.status == "certified"


def _system_boxes(s, sys, value):
    boxes = dict(s.coordinates)
    if sys.free is not None:
        boxes[sys.free] = Interval.point(value)
    return boxes


def residual_certificate(s, sys, width=Fraction(1, 10**8), value=None, max_rounds=MAX_ROUNDS):
    """Per-equation residual intervals of width at most ``width``, each containing 0.

    ``s`` may be a SteadyState (refined as needed) or a plain map of
    species to Interval/rational.
    """
    width = as_rational(width)
    if value is None and isinstance(s, SteadyState):
        value = s.parameter_value
    labels = sys.labels or tuple(f"equation {i}" for i in range(len(sys.equations)))
    coord_width = width
    current = s
    for _ in range(max_rounds):
        if isinstance(current, SteadyState):
            boxes = _system_boxes(current, sys, value)
        else:
            boxes = {k: (v if isinstance(v, Interval) else Interval.point(v)) for k, v in current.items()}
            if sys.free is not None and sys.free not in boxes:
                boxes[sys.free] = Interval.point(value)
        res = [(lab, e.evaluate_interval(boxes)) for lab, e in zip(labels, sys.equations)]
        failed = [lab for lab, iv in res if not (iv.lo <= 0 <= iv.hi)]
        if failed:
            return ResidualCertificate(res, "failed", failed)
        if all(iv.width <= width for _, iv in res):
            return ResidualCertificate(res, "certified")
        if not isinstance(current, SteadyState):
            return ResidualCertificate(res, "inconclusive")
        coord_width = coord_width / 64
        current = current.refined(coord_width)
    return ResidualCertificate(res, "inconclusive")


def verify_symbolically(t):
    """Exact check that every equation vanishes on the triangular solution curve.

    Each equation, with all solved variables replaced by their composed
    formulae, must have a numerator that the eliminated polynomial divides.
    Returns ``{label: bool}``.
    """
    from multistat.polycore import substitute_parts

    comp = composed_formulae(t)
    low = (t.main,) + ((t.free,) if t.free else ())
    F = t.eliminated
    out = {}
    labels = t.system.labels or tuple(str(i) for i in range(len(t.system.equations)))
    for lab, e in zip(labels, t.system.equations):
        num, _ = substitute_parts(e, {v: r for v, r in comp.items()})
        num = num.align(low)
        if num.is_zero():
            out[lab] = True
            continue
        R = UniPoly.from_multipoly(num, t.main)
        out[lab] = R.prem(F).is_zero() if R.degree >= F.degree else R.is_zero()
    return out


# ---------------------------------------------------------------------------
# exact coordinates


def exact_coordinates(t, s):
    """Every coordinate of ``s`` as a RealAlgebraicNumber.

    The defining polynomial of ``y = N(x)/D(x)`` is the squarefree part of
    ``res_x(f(x), N(x) - y*D(x))``; the right root is the one inside the
    certified interval.
    """
    value = s.parameter_value
    comp = composed_formulae(t)
    vals = {t.free: value} if t.free else {}
    f = t.at(value).to_multipoly((t.main,))
    out = {t.main: s.root}
    y = "_y"
    for v, r in comp.items():
        num = r.numerator.substitute_values(vals).align((t.main,))
        den = r.denominator.substitute_values(vals).align((t.main,))
        ring = (t.main, y)
        expr = num.align(ring) - MultiPoly.var(ring, y) * den.align(ring)
        R = resultant(f.align(ring), expr, t.main)
        uni = UniPoly.from_multipoly(R.align((y,)), y)
        rs = isolate_real_roots(UniPoly.from_rationals(v, dense.squarefree_part(uni.rational_coeffs())))
        box = s.coordinates[v]
        hits = [q for q in rs if q.isolation.overlaps(box)]
        cur = s
        while len(hits) != 1:
            cur = cur.refined(cur.coordinates[v].width / 16)
            box = cur.coordinates[v]
            hits = [q.refine(box.width) for q in hits]
            hits = [q for q in hits if q.isolation.overlaps(box)]
            if not hits:
                raise CertificationError(f"no root of the defining polynomial of {v} matches its interval")
        out[v] = hits[0]
    return {sp: out[sp] for sp in t.system.species}


# ---------------------------------------------------------------------------
# Cartesian product filter


@dataclass
class FilterStats:
    total: int  # size of the Cartesian product
    rejected: int
    evaluations: int  # interval evaluations performed
    escalated: int  # tuples sent to the exact test


def _candidate_box(x):
    if isinstance(x, RealAlgebraicNumber):
        return x.isolation
    if isinstance(x, Interval):
        return x
    return Interval.point(as_rational(x))


def _refine_candidate(x):
    if isinstance(x, RealAlgebraicNumber) and not x.isolation.is_point():
        return x.refine(x.isolation.width / 4)
    return x


def _filter_order(variables, eq_vars):
    """Greedy variable order completing as many equations as early as possible."""
    order = []
    left = list(variables)
    while left:
        done = set(order)
        best = max(left, key=lambda v: (sum(1 for ev in eq_vars if v in ev and ev <= done | {v}), -left.index(v)))
        order.append(best)
        left.remove(best)
    return order


def candidate_product_filter(sys, candidates, triangular=None, max_rounds=24):
    """Tuples from the product of ``candidates`` satisfying every equation of ``sys``.

    Depth-first over the variables; an equation is checked as soon as all its
    variables are assigned (fewest variables first), and a subtree is dropped
    on the first sign-definite nonzero residual.  Tuples that are not decided
    exactly by the interval checks are escalated to an exact test against the
    roots of the triangular system.  Returns a SolutionSet whose ``stats``
    records the product size and rejection count.
    """
    if sys.free is not None:
        raise ValueError("candidate filter needs a fully instantiated system")
    used = set()
    for e in sys.equations:
        used.update(e.used_variables())
    missing = [v for v in sys.variables if v in used and v not in candidates]
    if missing:
        raise ValueError(f"no candidates for {missing}")
    variables = [v for v in sys.variables if v in candidates]
    cands = {v: list(candidates[v]) for v in variables}
    for v, xs in cands.items():
        if not xs:
            raise ValueError(f"empty candidate list for {v}")
    total = 1
    for v in variables:
        total *= len(cands[v])
    eqs = [e for e in sys.equations if not e.is_zero()]
    eq_vars = [set(e.used_variables()) for e in eqs]
    order = _filter_order(variables, eq_vars)
    checks = {}
    for e, ev in sorted(zip(eqs, eq_vars), key=lambda p: len(p[1])):
        pos = max((order.index(v) for v in ev), default=0)
        checks.setdefault(pos, []).append(e)
    below = [1] * (len(order) + 1)
    for k in range(len(order) - 1, -1, -1):
        below[k] = below[k + 1] * len(cands[order[k]])
    counters = {"evaluations": 0, "rejected": 0}
    accepted = []

    def verdict(e, assign):
        """False when certified nonzero; True when exactly zero; None when undecided."""
        for _ in range(max_rounds):
            counters["evaluations"] += 1
            iv = e.evaluate_interval({v: _candidate_box(cands[v][i]) for v, i in assign.items()})
            if iv.lo > 0 or iv.hi < 0:
                return False
            if iv.is_point():
                return True
            for v in e.used_variables():
                cands[v][assign[v]] = _refine_candidate(cands[v][assign[v]])
        return None

    def dfs(k, assign, exact):
        if k == len(order):
            accepted.append((dict(assign), exact))
            return
        v = order[k]
        for i in range(len(cands[v])):
            assign[v] = i
            results = []
            for e in checks.get(k, ()):
                r = verdict(e, assign)
                if r is False:
                    break
                results.append(r)
            else:
                dfs(k + 1, assign, exact and all(results))
                del assign[v]
                continue
            counters["rejected"] += below[k + 1]
            del assign[v]

    dfs(0, {}, True)
    tuples = [({v: cands[v][i] for v, i in a.items()}, exact) for a, exact in accepted]
    undecided = [tup for tup, exact in tuples if not exact]
    keep = _confirm_exact(sys, undecided, triangular) if undecided else []
    sols = [tup for tup, exact in tuples if exact] + keep
    counters["rejected"] += len(undecided) - len(keep)
    first = next((v for v in sys.species if v in variables), variables[0] if variables else None)
    sols.sort(key=cmp_to_key(lambda a, b: _cmp(a[first], b[first])))
    states = [SteadyState({v: tup[v] for v in variables}, Fraction(0), tup.get(first)) for tup in sols]
    stats = FilterStats(total, counters["rejected"], counters["evaluations"], len(undecided))
    cert = f"{len(states)} of {total} candidate tuples accepted"
    return SolutionSet(None, states, cert, stats=stats)


def _cmp(a, b):
    return {LESS: -1, EQUAL: 0}.get(compare(a, b), 1)


def _confirm_exact(sys, tuples, triangular):
    """Keep only tuples equal to an exact solution of the triangular system."""
    t = triangular
    if t is None:
        t = triangularize(sys, project=False)
    if not all(verify_symbolically(t).values()):
        raise CertificationError("triangular system does not reproduce every equation")
    exact = [exact_coordinates(t, s) for s in solve_at_parameter(t, None, certify=False)]
    out = []
    for tup in tuples:
        if any(all(_equal(tup[v], sol[v]) for v in tup) for sol in exact):
            out.append(tup)
    return out


def _equal(x, y):
    if isinstance(x, Interval):
        return x.is_point() and compare(y, x.lo) == EQUAL
    return compare(x, y) == EQUAL


# ---------------------------------------------------------------------------
# reports


def solution_report(sol_set, species, digits=6):
    """Parameter value and count, then one coordinate line per solution."""
    head = f"count = {len(sol_set)}"
    if sol_set.parameter is not None:
        head = f"{sol_set.parameter} = {format_decimal(sol_set.parameter_value, 12)}, " + head
    lines = [head]
    for i, s in enumerate(sol_set.solutions, 1):
        lines.append(f"x({i}) = {s.render(digits, species)}")
    return "\n".join(lines) + "\n"


def candidate_lists(solutions, t):
    """Per-coordinate candidate lists (exact numbers) drawn from solutions."""
    exact = [exact_coordinates(t, s) for s in solutions]
    return {v: [e[v] for e in exact] for v in t.system.species}


__all__ = [
    "BlindSpotError",
    "CertificationError",
    "FilterStats",
    "ResidualCertificate",
    "SolutionSet",
    "SteadyState",
    "assemble",
    "candidate_lists",
    "candidate_product_filter",
    "check_parameter",
    "count_positive",
    "exact_coordinates",
    "residual_certificate",
    "solution_report",
    "solve_at_parameter",
    "verify_symbolically",
]


