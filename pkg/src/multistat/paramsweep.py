"""Constant-count decomposition of one parameter axis, break points and grid sampling."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from multistat.elimination import DegeneracyError, InfeasibleError, triangularize
from multistat.exactnum import as_rational, format_decimal, parse_rational
from multistat.model import build_steady_state_system
from multistat.polycore import UniPoly, discriminant
from multistat.polycore import dense
from multistat.realroots import (
    ALL_REALS,
    EQUAL,
    LESS,
    POSITIVE_ONLY,
    RealAlgebraicNumber,
    compare,
    isolate_real_roots,
)
from multistat.steadystate import count_positive

JOBS_ENV = "MULTISTAT_JOBS"
OK = "ok"
BLIND_SPOT = "blind-spot"
ERROR = "error"


class SweepDomainError(ValueError):
    pass


@dataclass
class Cell:
    lower: object  # RealAlgebraicNumber, or 0 for the first cell
    upper: object  # RealAlgebraicNumber, or None for the unbounded cell
    sample: Fraction
    count: int

    def render(self, digits=6):
        lo = "0" if not isinstance(self.lower, RealAlgebraicNumber) else self.lower.approx(digits)
        hi = "inf" if self.upper is None else self.upper.approx(digits)
        return f"({lo}, {hi}): {self.count} (sample {format_decimal(self.sample, digits)})"


@dataclass
class ParameterLineDecomposition:
    parameter: str
    critical_points: list  # sorted positive RealAlgebraicNumbers
    cells: list
    triangular: object = None

    def count_at(self, value):
        """Count on the open cell containing ``value`` (None on a critical point)."""
        value = as_rational(value)
        for c in self.cells:
            above = not isinstance(c.lower, RealAlgebraicNumber) or compare(c.lower, value) == LESS
            below = c.upper is None or compare(value, c.upper) == LESS
            if above and below:
                return c.count
        return None


@dataclass
class BreakPoint:
    location: RealAlgebraicNumber
    count_before: int
    count_after: int


# ---------------------------------------------------------------------------
# decomposition


def _ran_key(a):
    return a.isolation.lo


def _merge_roots(polys, domain):
    roots = []
    for p in polys:
        c = dense.trim(p)
        if len(c) < 2:
            continue
        for r in isolate_real_roots(c, domain):
            if not any(compare(r, q) == EQUAL for q in roots):
                roots.append(r)
    # isolating intervals of distinct roots can be refined until disjoint
    roots = _separate(roots)
    roots.sort(key=_ran_key)
    return roots


def _separate(roots):
    roots = list(roots)
    changed = True
    while changed:
        changed = False
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                a, b = roots[i], roots[j]
                if a.isolation.overlaps(b.isolation):
                    roots[i] = a.refine(a.isolation.width / 2) if a.isolation.width else a
                    roots[j] = b.refine(b.isolation.width / 2) if b.isolation.width else b
                    changed = True
    return roots


def _raw_critical(t):
    if t.free is None:
        raise SweepDomainError("decomposition needs a free parameter")
    f = t.eliminated
    if f.degree < 1:
        raise SweepDomainError("eliminated polynomial has degree 0 in the main variable")
    # a positive root can appear through x = 0 (trailing coefficient) or infinity (leading)
    polys = [f.lc(), f.coeff(0)]
    if f.degree >= 2:
        polys.append(discriminant(f))
    polys += list(t.side_constraints)
    return [dense.trim(UniPoly.from_multipoly(p.align((t.free,)), t.free).rational_coeffs()) for p in polys]


def critical_polynomials(t):
    """Squarefree coefficient lists in the free parameter whose roots bound the cells.

    Factors of the parameter itself are dropped; it is positive.
    """
    out = []
    for c in _raw_critical(t):
        while c and c[0] == 0:
            c = c[1:]
        if len(c) > 1:
            out.append(dense.squarefree_part(c))
    return sorted(out, key=len)


def all_critical_points(t):
    """Critical points on the whole real line, including 0 when a critical polynomial vanishes there."""
    roots = _merge_roots(critical_polynomials(t), ALL_REALS)
    if any(len(c) > 1 and c[0] == 0 for c in _raw_critical(t)):
        roots.append(RealAlgebraicNumber.from_rational(0, t.free))
        roots.sort(key=_ran_key)
    return roots


def simplest_between(lo, hi):
    """Rational with the smallest denominator in the open interval ``(lo, hi)``."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise ValueError("empty interval")
    fl = math.floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    # no integer inside: continue with the reciprocals of the fractional parts
    a, b = lo - fl, hi - fl
    if a == 0:
        return fl + Fraction(1, math.floor(1 / b) + 1)
    return fl + 1 / simplest_between(1 / b, 1 / a)


def _gap(a, b):
    """Rational bounds strictly inside the gap between consecutive critical points."""
    while True:
        lo = a.isolation.hi if isinstance(a, RealAlgebraicNumber) else Fraction(a)
        hi = b.isolation.lo
        if lo < hi:
            return lo, hi
        if isinstance(a, RealAlgebraicNumber):
            a = a.refine(a.isolation.width / 4)
        b = b.refine(b.isolation.width / 4)


def _cell_sample(lower, upper):
    if upper is None:
        top = lower.isolation.hi if isinstance(lower, RealAlgebraicNumber) else Fraction(lower)
        return Fraction(2 * max(math.ceil(top), 1))
    lo, hi = _gap(lower, upper)
    if isinstance(lower, RealAlgebraicNumber) and lower.isolation.is_point():
        lo = lower.isolation.hi
    if upper.isolation.is_point():
        hi = upper.isolation.lo
    return simplest_between(lo, hi)


def cell_count(t, value):
    """Positive-root count off the critical set (no blind-spot screening needed there)."""
    g = t.at(value)
    c = dense.trim(g.rational_coeffs())
    return len(isolate_real_roots(UniPoly.from_rationals(t.main, dense.squarefree_part(c)), POSITIVE_ONLY))


def decompose_parameter_line(t):
    crit = _merge_roots(critical_polynomials(t), POSITIVE_ONLY)
    crit = [r for r in crit if not (r.is_rational() and r.rational_value() <= 0)]
    bounds = [Fraction(0)] + crit + [None]
    cells = []
    for lower, upper in zip(bounds, bounds[1:]):
        sample = _cell_sample(lower, upper)
        cells.append(Cell(lower, upper, sample, cell_count(t, sample)))
    return ParameterLineDecomposition(t.free, crit, cells, t)


def cell_samples(cell, t=None):
    """Rational points at 1/4, 1/2, 3/4 of a bounded cell (the sample and its doubles when unbounded)."""
    if cell.upper is None:
        return [cell.sample, cell.sample * 2, cell.sample * 4]
    lo, hi = _gap(cell.lower, cell.upper)
    return [lo + (hi - lo) * k / 4 for k in (1, 2, 3)]


def find_break_points(d):
    out = []
    for left, right in zip(d.cells, d.cells[1:]):
        if left.count != right.count:
            out.append(BreakPoint(left.upper, left.count, right.count))
    return out


def reanalyze_with(model, rebind, free):
    """Rerun the pipeline with parameters rebound and ``free`` left symbolic."""
    assignment = model.assignment(dict(rebind), free=free)
    t = triangularize(build_steady_state_system(model, assignment))
    return t, decompose_parameter_line(t)


def decomposition_report(d, digits=6):
    """Critical points (exact), cells with counts, then break points by index."""
    lines = [f"parameter {d.parameter}", f"critical points: {len(d.critical_points)}"]
    for i, r in enumerate(d.critical_points, 1):
        lines.append(f"  c{i} = {r.render(digits)}")
    lines.append("cells:")
    for c in d.cells:
        lines.append(f"  {c.render(digits)}")
    bps = find_break_points(d)
    lines.append(f"break points: {len(bps)}")
    for b in bps:
        i = next(k for k, r in enumerate(d.critical_points, 1) if r is b.location)
        lines.append(f"  c{i} ~ {b.location.approx(digits)}: {b.count_before} -> {b.count_after}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# grid sampling


@dataclass
class Axis:
    parameter: str
    lo: Fraction
    hi: Fraction
    steps: int

    def values(self):
        if self.steps == 1:
            return [self.lo]
        return [self.lo + (self.hi - self.lo) * i / (self.steps - 1) for i in range(self.steps)]


def parse_axis(text):
    """``k19=200:1000:81`` -> Axis."""
    try:
        name, rng = text.split("=", 1)
        lo, hi, steps = rng.split(":")
        axis = Axis(name.strip(), parse_rational(lo), parse_rational(hi), int(steps))
    except ValueError as exc:
        raise ValueError(f"axis must look like name=lo:hi:steps, got {text!r}") from exc
    if axis.steps < 1 or axis.lo <= 0 or axis.hi < axis.lo:
        raise ValueError(f"axis {text!r} needs 0 < lo <= hi and steps >= 1")
    return axis


@dataclass
class GridSample:
    axes: tuple  # (Axis, Axis)
    counts: list  # counts[i][j] at axes[0] value i, axes[1] value j (None unless ok)
    status: list

    def rows(self):
        v1, v2 = self.axes[0].values(), self.axes[1].values()
        for i, a in enumerate(v1):
            for j, b in enumerate(v2):
                yield a, b, self.counts[i][j], self.status[i][j]

    def to_csv(self, digits=12):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["param1", "param2", "count", "status"])
        for a, b, c, s in self.rows():
            w.writerow([format_decimal(a, digits), format_decimal(b, digits), "" if c is None else c, s])
        return buf.getvalue()

    def distribution(self):
        out = {}
        for _, _, c, s in self.rows():
            key = c if s == OK else s
            out[key] = out.get(key, 0) + 1
        return out


def _point_task(args):
    model, bindings = args
    try:
        assignment = model.assignment(bindings)
        t = triangularize(build_steady_state_system(model, assignment))
    except DegeneracyError:
        return None, BLIND_SPOT
    except (InfeasibleError, ArithmeticError, ValueError) as exc:
        return None, f"{ERROR}: {exc}"
    try:
        g = t.eliminated
        c = dense.trim(g.rational_coeffs())
        if len(c) > 2 and len(dense.gcd(c, dense.derivative(c))) > 1:
            return None, BLIND_SPOT  # repeated root: tangency of solution branches
        return count_positive(t), OK
    except Exception as exc:  # per-point failures never abort the grid
        return None, f"{ERROR}: {exc}"


def default_jobs():
    env = os.environ.get(JOBS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def grid_sample(model, axis1, axis2, remaining=None, jobs=None):
    """Exact positive-solution counts over a two-parameter grid."""
    axis1 = axis1 if isinstance(axis1, Axis) else Axis(axis1[0], as_rational(axis1[1]), as_rational(axis1[2]), int(axis1[3]))
    axis2 = axis2 if isinstance(axis2, Axis) else Axis(axis2[0], as_rational(axis2[1]), as_rational(axis2[2]), int(axis2[3]))
    if axis1.parameter == axis2.parameter:
        raise ValueError("the two axes must vary different parameters")
    remaining = dict(remaining or {})
    for ax in (axis1, axis2):
        if ax.parameter not in model.parameters:
            raise ValueError(f"unknown parameter {ax.parameter!r}")
        if ax.parameter in remaining:
            raise ValueError(f"{ax.parameter} is both an axis and bound with --set")
    probe = model.assignment({**remaining, axis1.parameter: axis1.lo, axis2.parameter: axis2.lo})
    if probe.free is not None:
        raise ValueError(f"grid points must bind every parameter; {probe.free} is free")
    v1, v2 = axis1.values(), axis2.values()
    tasks = []
    for a in v1:
        for b in v2:
            tasks.append((model, {**remaining, axis1.parameter: a, axis2.parameter: b}))
    jobs = default_jobs() if jobs is None else jobs
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_point_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_point_task(t) for t in tasks]
    counts = [[None] * len(v2) for _ in v1]
    status = [[None] * len(v2) for _ in v1]
    for k, (c, s) in enumerate(results):
        i, j = divmod(k, len(v2))
        counts[i][j], status[i][j] = c, s
    return GridSample((axis1, axis2), counts, status)


__all__ = [
    "Axis",
    "BreakPoint",
    "Cell",
    "GridSample",
    "ParameterLineDecomposition",
    "SweepDomainError",
    "all_critical_points",
    "cell_count",
    "cell_samples",
    "critical_polynomials",
    "decompose_parameter_line",
    "decomposition_report",
    "find_break_points",
    "grid_sample",
    "parse_axis",
    "reanalyze_with",
    "simplest_between",
]
