"""Triangularization of steady-state systems with one free parameter.

Variables are solved one at a time from equations in which they occur
linearly; each solution is substituted into the remaining equations, whose
numerators are kept after stripping content and monomial factors (every
variable is strictly positive, so such factors never vanish).  When no
linear variable is left, the next variable is eliminated from a pair of
equations by a resultant, and its value is read off the degree-1
subresultant.  What remains is a univariate polynomial in the main variable
with coefficients in the free parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cmp_to_key

from multistat.polycore import (
    MultiPoly,
    RationalFunction,
    UniPoly,
    degree_one_subresultant,
    discriminant,
    poly_gcd,
    resultant,
    substitute_parts,
)
from multistat.polycore import dense
from multistat.polycore.gcd import content_in
from multistat.realroots import EQUAL, GREATER, LESS, POSITIVE_ONLY, compare, isolate_real_roots

EXACT_MATCH = "exact-match-up-to-scalar"
DIVIDES = "divides"
ROOT_SET_MATCH = "root-set-match"
MISMATCH = "mismatch"

DEFAULT_PROBES = (200, 500, 1000)


class InfeasibleError(ValueError):
    """A nonzero constant appeared: the system has no solution."""


class DegeneracyError(ArithmeticError):
    """Elimination stalled, e.g. a resultant vanished identically."""


@dataclass(frozen=True)
class EliminationStep:
    variable: str
    source: int  # index of the originating equation in the input system
    formula: RationalFunction
    denominators: tuple  # MultiPoly provisos introduced by this step
    method: str = "linear"  # or "subresultant"


@dataclass(frozen=True)
class TriangularSystem:
    order: tuple  # solve order; the main variable is last
    solved: dict  # variable -> RationalFunction over the system ring
    eliminated: UniPoly  # in the main variable, coefficients in the free parameter
    side_constraints: tuple  # MultiPoly over (free,) derived from the elimination
    main: str
    free: str | None
    system: object = None
    steps: tuple = ()
    reference_constraints: tuple = ()  # ingested from reference data, not derived
    notes: tuple = field(default=())

    @property
    def variables(self):
        return self.system.variables if self.system is not None else None

    def eliminated_poly(self):
        """The eliminated polynomial as a MultiPoly over ``(main, free)``."""
        ring = (self.main,) + ((self.free,) if self.free else ())
        return self.eliminated.to_multipoly(ring)

    def at(self, value):
        """Eliminated polynomial with the free parameter bound to ``value``."""
        if self.free is None:
            return self.eliminated
        return self.eliminated.substitute_params({self.free: Fraction(value)})

    def with_reference_constraints(self, polys):
        ring = (self.free,)
        cleaned = tuple(_normalize_constraint(p.align(ring) if p.variables != ring else p) for p in polys)
        return replace(self, reference_constraints=cleaned)


# ---------------------------------------------------------------------------
# helpers


def _clean(p, positive):
    """Primitive form with monomial factors of positive variables removed."""
    if p.is_zero():
        return p
    p = p.strip_monomials([v for v in positive if v in p.variables])
    return p.primitive()


def _normalize_constraint(p):
    p = p.primitive()
    return p


def _linear_split(p, v):
    """``(a, b)`` with ``p = a*v + b`` when ``p`` has degree 1 in ``v``."""
    parts = p.coefficients_in(v)
    zero = MultiPoly.zero(p.variables)
    return parts.get(1, zero), parts.get(0, zero)


def _same_up_to_scalar(a, b):
    return a.primitive() == b.primitive()


def _dedupe(polys):
    out = []
    for p in polys:
        if p.is_constant():
            continue
        q = p.primitive()
        if not any(q == r for r in out):
            out.append(q)
    return out


def _param_factors(p, free):
    """Squarefree factors (by multiplicity) of a polynomial in the free parameter.

    Monomial factors are dropped: the parameter is strictly positive.
    """
    if free is None or p.is_constant():
        return []
    ring = (free,)
    p = p.align(ring) if p.variables != ring else p
    coeffs = UniPoly.from_multipoly(p, free).rational_coeffs()
    coeffs = dense.trim(coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    out = []
    for fac, _ in dense.squarefree_decomposition(coeffs):
        if len(fac) > 1:
            out.append(UniPoly.from_rationals(free, fac).to_multipoly(ring))
    return out


# ---------------------------------------------------------------------------
# triangularize


def default_order(system, main=None):
    """Species in reverse order with ``main`` (default: the first species) last."""
    species = list(system.species)
    main = species[0] if main is None else main
    rest = [s for s in reversed(species) if s != main]
    return tuple(rest + [main])


def triangularize(system, order_hint=None, main=None, project=True):
    """Triangular form of ``system``; see the module docstring for the strategy.

    ``order_hint`` lists every species in solve order with the main variable
    last.  Ties among equations linear in the chosen variable go to the one
    with the fewest terms, then the lowest total degree, then input order.
    """
    if order_hint is None:
        order_hint = default_order(system, main)
    order_hint = tuple(order_hint)
    if set(order_hint) != set(system.species):
        raise ValueError("order_hint must list every species exactly once")
    main = order_hint[-1]
    free = system.free
    positive = system.positive_variables
    ring = system.variables
    eqs = []
    for i, e in enumerate(system.equations):
        if e.is_zero():
            continue
        e = _clean(e, positive)
        if e.is_constant():
            raise InfeasibleError(f"equation {system.labels[i] if system.labels else i} is a nonzero constant")
        eqs.append((i, e))
    unsolved = list(order_hint[:-1])
    solved = {}
    steps = []
    while unsolved:
        pick = None
        for v in unsolved:
            cands = [(len(e), e.total_degree(), n) for n, (_, e) in enumerate(eqs) if e.degree(v) == 1]
            if cands:
                pick = (v, min(cands)[2])
                break
        if pick is not None:
            v, n = pick
            src, e = eqs.pop(n)
            a, b = _linear_split(e, v)
            formula = RationalFunction(-b, a)
            den = formula.denominator
            steps.append(EliminationStep(v, src, formula, () if den.is_constant() else (den,), "linear"))
        else:
            v = next((u for u in unsolved if any(e.degree(u) > 0 for _, e in eqs)), None)
            if v is None:
                raise DegeneracyError(f"variables {unsolved} do not occur in the remaining equations")
            holding = sorted((e.degree(v), len(e), n) for n, (_, e) in enumerate(eqs) if e.degree(v) > 0)
            if len(holding) < 2:
                raise DegeneracyError(f"only one equation left in {v}; cannot eliminate it")
            n1, n2 = holding[0][2], holding[1][2]
            (s1, e1), (s2, e2) = eqs[n1], eqs[n2]
            r = resultant(e1, e2, v)
            if r.is_zero():
                raise DegeneracyError(f"resultant in {v} of equations {s1} and {s2} vanishes identically")
            sub1 = degree_one_subresultant(e1, e2, v)
            if sub1 is None:
                raise DegeneracyError(f"no degree-1 subresultant in {v} for equations {s1} and {s2}")
            c1 = sub1.coeff(1).align(ring)
            c0 = sub1.coeff(0).align(ring)
            formula = RationalFunction(-c0, c1)
            den = formula.denominator
            provisos = [] if den.is_constant() else [den]
            for lc in (UniPoly.from_multipoly(e1, v).lc(), UniPoly.from_multipoly(e2, v).lc()):
                lc = lc.align(ring)
                if not lc.is_constant():
                    provisos.append(lc)
            steps.append(EliminationStep(v, s1, formula, tuple(provisos), "subresultant"))
            eqs = [eq for k, eq in enumerate(eqs) if k not in (n1, n2)]
            r = _clean(r.align(ring), positive)
            eqs.append((s1, r))
        solved[v] = formula
        unsolved.remove(v)
        new = []
        for src, e in eqs:
            if e.degree(v) > 0:
                num, _ = substitute_parts(e, {v: formula})
                num = num.align(ring) if num.variables != ring else num
                e = _clean(num, positive)
            if e.is_zero():
                continue
            if e.is_constant():
                raise InfeasibleError(f"equation {src} reduces to a nonzero constant after solving {v}")
            new.append((src, e))
        eqs = new
    if not eqs:
        raise DegeneracyError(f"no equation left for the main variable {main}")
    final = eqs[0][1]
    for _, e in eqs[1:]:
        final = poly_gcd(final, e)
    if final.is_constant() or final.degree(main) == 0:
        raise InfeasibleError("remaining equations have no common solution in the main variable")
    sub_ring = (main,) + ((free,) if free else ())
    final = final.align(sub_ring)
    notes = []
    content = content_in(final, main)
    if not content.is_constant():
        final = final.exact_div(content)
        notes.append(f"removed parameter content {content.to_text()}")
    g = poly_gcd(final, final.derivative(main))
    if not g.is_constant() and g.degree(main) > 0:
        final = final.exact_div(g)
    final = _clean(final, sub_ring)
    eliminated = UniPoly.from_multipoly(final, main)
    if free is not None and eliminated.params != (free,):
        eliminated = eliminated.align_params((free,))
    t = TriangularSystem(tuple(order_hint), solved, eliminated, (), main, free, system, tuple(steps), (), tuple(notes))
    constraints = [content] if not content.is_constant() else []
    if project and free is not None:
        constraints += derive_side_constraints(t)
    return replace(t, side_constraints=tuple(_dedupe(constraints)))


# ---------------------------------------------------------------------------
# provisos


def _divide(p, g):
    if any(p.degree(v) < g.degree(v) for v in g.used_variables()):
        return None
    q, r = p.divmod_lead(g)
    return None if r else q


def _cancel(num, den, base):
    """Divide ``num`` and ``den`` by shared factors from ``base`` (trial division)."""
    for g in base:
        while True:
            qn = _divide(num, g)
            qd = _divide(den, g) if qn is not None else None
            if qd is None:
                break
            num, den = qn, qd
    return num, den


def composed_formulae(t):
    """Each solved variable as a reduced RationalFunction in ``(main, free)`` only.

    Common factors mostly come from the formulae substituted in, so those
    are tried by division before the general gcd.
    """
    low = (t.main,) + ((t.free,) if t.free else ())
    comp = {}
    base = []
    for v in reversed(t.order[:-1]):
        f = t.solved[v]
        binds = {u: comp[u] for u in comp if u in f.used_variables()}
        if binds:
            n1, d1 = substitute_parts(f.numerator, binds)
            n2, d2 = substitute_parts(f.denominator, binds)
            num, den = _cancel((n1 * d2).align(low), (d1 * n2).align(low), base)
        else:
            num, den = f.numerator.align(low), f.denominator.align(low)
        r = RationalFunction(num, den)
        for p in (r.numerator, r.denominator):
            p = p.strip_monomials().primitive()
            if not p.is_constant() and p not in base:
                base.append(p)
        comp[v] = r
    return comp


def _project(t, p):
    """Polynomial in the free parameter vanishing where ``p`` meets a root of the eliminated polynomial."""
    low = (t.main,) + ((t.free,) if t.free else ())
    f = t.eliminated_poly()
    p = p.align(low)
    if p.degree(t.main) == 0:
        return p.align((t.free,))
    F = UniPoly.from_multipoly(f, t.main)
    P = UniPoly.from_multipoly(p, t.main)
    if P.degree >= F.degree:
        P = P.prem(F)
        if P.is_zero():
            raise DegeneracyError(f"proviso {p.to_text()} vanishes on the whole solution curve")
    if P.degree == 0:
        return P.lc().align((t.free,))
    r = resultant(F, P)
    if r.is_zero():
        raise DegeneracyError(f"proviso {p.to_text()} shares a factor with the eliminated polynomial")
    return r.align((t.free,))


def derive_side_constraints(t):
    """Discriminant factors, leading coefficient and projected denominators."""
    free = t.free
    out = []
    f = t.eliminated
    if f.degree >= 2:
        out += _param_factors(discriminant(f), free)
    out += _param_factors(f.lc(), free)
    comp = composed_formulae(t)
    low = (t.main, free)
    for step in t.steps:
        for den in step.denominators:
            d = den
            binds = {u: comp[u] for u in comp if u in den.used_variables()}
            if binds:
                num, _ = substitute_parts(den, binds)
                d = num
            d = _clean(d.align(t.system.variables), t.system.positive_variables)
            if d.is_constant():
                continue
            # the composed denominator's own denominators come from lower steps
            out += _param_factors(_project(t, d.align(low)), free)
    return _dedupe(out)


# ---------------------------------------------------------------------------
# queries


def back_formulae(t):
    """Evaluation plan from the main variable upward: ``[(variable, formula, denominators)]``."""
    plan = []
    for v in reversed(t.order[:-1]):
        f = t.solved[v]
        dens = () if f.denominator.is_constant() else (f.denominator,)
        plan.append((v, f, dens))
    return plan


def blind_spots(t, extra_constraints=()):
    """Positive parameter values excluded by side constraints, sorted and deduplicated."""
    if t.free is None:
        return []
    ring = (t.free,)
    polys = list(t.side_constraints) + list(t.reference_constraints)
    polys += [p.align(ring) if p.variables != ring else p for p in extra_constraints]
    roots = []
    for p in polys:
        if p.is_constant():
            continue
        for r in isolate_real_roots(UniPoly.from_multipoly(p, t.free), POSITIVE_ONLY):
            if not any(compare(r, q) == EQUAL for q in roots):
                roots.append(r)
    roots.sort(key=_sort_key)
    return roots


_sort_key = cmp_to_key(lambda a, b: {LESS: -1, EQUAL: 0, GREATER: 1}[compare(a, b)])


def verify_against_reference(t, reference, probes=DEFAULT_PROBES):
    """Graded agreement between the eliminated polynomial and a reference one."""
    ring = (t.main,) + ((t.free,) if t.free else ())
    ours = t.eliminated_poly()
    ref = reference.to_multipoly(ring) if isinstance(reference, UniPoly) else reference.align(ring)
    if _same_up_to_scalar(ours, ref):
        return EXACT_MATCH
    try:
        ours.exact_div(ref)
        return DIVIDES
    except ArithmeticError:
        pass
    if t.free is None:
        probes = (None,)
    for k in probes:
        vals = {} if k is None else {t.free: Fraction(k)}
        a = UniPoly.from_multipoly(ours.substitute_values(vals).align((t.main,)), t.main)
        b = UniPoly.from_multipoly(ref.substitute_values(vals).align((t.main,)), t.main)
        ra = list(isolate_real_roots(a, POSITIVE_ONLY))
        rb = list(isolate_real_roots(b, POSITIVE_ONLY))
        if len(ra) != len(rb) or any(compare(x, y) != EQUAL for x, y in zip(ra, rb)):
            return MISMATCH
    return ROOT_SET_MATCH


def trace_report(t):
    """One paragraph per elimination step, polynomials in the text grammar."""
    labels = t.system.labels if t.system is not None else ()
    out = []
    for n, s in enumerate(t.steps, 1):
        src = labels[s.source] if labels and s.source < len(labels) else f"equation {s.source}"
        lines = [f"step {n}: solve {s.variable} from {src} ({s.method})",
                 f"  {s.variable} = {s.formula.to_text()}"]
        for d in s.denominators:
            lines.append(f"  proviso: {d.to_text()} != 0")
        out.append("\n".join(lines))
    last = [f"eliminated in {t.main}: {t.eliminated.to_text()}"]
    for c in t.side_constraints:
        last.append(f"  side constraint: {c.to_text()} != 0")
    for c in t.reference_constraints:
        last.append(f"  reference constraint: {c.to_text()} != 0")
    for note in t.notes:
        last.append(f"  note: {note}")
    out.append("\n".join(last))
    return "\n\n".join(out) + "\n"
