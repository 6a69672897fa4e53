"""Local stability of steady states from the conservation-reduced Jacobian.

The certified path evaluates the Jacobian on coordinate intervals, expands
the characteristic polynomial division-free (Berkowitz) and runs the Routh
table in interval arithmetic.  A floating-point eigenvalue computation is
kept alongside as an advisory cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from multistat.exactnum import NEGATIVE, POSITIVE, Interval, IntervalDomainError, as_rational, interval_sign
from multistat.model import conservation_reduce

STABLE = "stable"
UNSTABLE = "unstable"
INCONCLUSIVE = "inconclusive"
UNAVAILABLE = "advisory-unavailable"

DEFAULT_ROUNDS = 12
START_WIDTH = Fraction(1, 10**12)


@dataclass
class JacobianMatrix:
    variables: tuple  # row i / column j belong to variables[i] / variables[j]
    entries: list  # rows of MultiPoly, Interval or rationals

    @property
    def dimension(self):
        return len(self.variables)

    def instantiate(self, values):
        """Bind exact parameter values; entries stay polynomial in the remaining variables."""
        return JacobianMatrix(self.variables, [[e.substitute_values(values) for e in row] for row in self.entries])

    def at(self, boxes):
        """Interval matrix at ``boxes`` (variable -> Interval)."""
        rows = [[e.evaluate_interval(boxes) for e in row] for row in self.entries]
        return JacobianMatrix(self.variables, rows)

    def trace(self):
        out = 0
        for i in range(self.dimension):
            out = self.entries[i][i] + out
        return out

    def midpoint_array(self):
        return np.array([[float(_mid(e)) for e in row] for row in self.entries], dtype=float)


def _mid(x):
    return x.midpoint if isinstance(x, Interval) else as_rational(x)


def symbolic_jacobian(reduced):
    """Partial derivatives ``d rhs_i / d x_j`` over the species keyed in ``reduced``."""
    variables = tuple(reduced)
    entries = [[reduced[r].derivative(c) for c in variables] for r in variables]
    return JacobianMatrix(variables, entries)


# ---------------------------------------------------------------------------
# characteristic polynomial


@dataclass
class CharPoly:
    """``sum coeffs[i] * lam**i``; coefficients are Interval or rational."""

    coeffs: list

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coefficient(self, i):
        return self.coeffs[i]

    def max_width(self):
        return max((c.width for c in self.coeffs if isinstance(c, Interval)), default=Fraction(0))


def char_poly(j):
    """``det(lam*I - A)`` by Berkowitz's division-free recurrence."""
    a = j.entries if isinstance(j, JacobianMatrix) else j
    n = len(a)
    if n == 0:
        return CharPoly([Fraction(1)])
    # vector of coefficients, highest degree first
    poly = [Fraction(1), -a[0][0]]
    for r in range(1, n):
        # Toeplitz column from the leading (r+1)x(r+1) block
        R = [a[r][k] for k in range(r)]  # row r, columns < r
        C = [a[k][r] for k in range(r)]  # column r, rows < r
        M = [row[:r] for row in a[:r]]
        col = [Fraction(1), -a[r][r]]
        v = C
        for _ in range(r):
            col.append(-_dot(R, v))
            v = [_dot(M[i], v) for i in range(r)]
        # multiply the lower-triangular Toeplitz matrix by poly
        new = []
        for i in range(r + 2):
            acc = 0
            for k in range(min(i, len(poly) - 1) + 1):
                if i - k < len(col):
                    acc = col[i - k] * poly[k] + acc
            new.append(acc)
        poly = new
    return CharPoly(list(reversed(poly)))


def _dot(u, v):
    acc = 0
    for x, y in zip(u, v):
        acc = x * y + acc
    return acc


# ---------------------------------------------------------------------------
# Routh-Hurwitz


@dataclass
class StabilityReport:
    verdict: str
    positive_real_part_count: object  # int, or (lo, hi) when inconclusive
    method_agreement: bool | None = None
    first_column: list = field(default_factory=list)
    numeric: object = None
    note: str = ""


def _iv(x):
    return x if isinstance(x, Interval) else Interval.point(as_rational(x))


def _is_zero(x):
    return x.lo == 0 and x.hi == 0


def routh_hurwitz(p):
    """Routh table in interval arithmetic.

    ``stable`` needs every first-column entry certified positive; a certified
    sign pattern with changes gives ``unstable`` with the change count.  An
    exactly zero row is replaced by the derivative of its auxiliary
    polynomial; any other zero or zero-straddling pivot is ``inconclusive``.
    """
    coeffs = [_iv(c) for c in (p.coeffs if isinstance(p, CharPoly) else p)]
    while coeffs and _is_zero(coeffs[-1]):
        coeffs.pop()
    n = len(coeffs) - 1
    if n < 0:
        raise ValueError("zero polynomial")
    lead = interval_sign(coeffs[-1])
    if lead not in (POSITIVE, NEGATIVE):
        return StabilityReport(INCONCLUSIVE, (0, n), note="leading coefficient not sign-definite")
    if lead == NEGATIVE:
        coeffs = [-c for c in coeffs]
    if n == 0:
        return StabilityReport(STABLE, 0, first_column=[coeffs[0]])
    top = list(reversed(coeffs))  # a_n, a_{n-1}, ..., a_0
    rows = [top[0::2], top[1::2]]
    axis_roots = False
    for k in range(1, n + 1):
        row = rows[k]
        if not row or all(_is_zero(x) for x in row):
            # auxiliary polynomial from the row above, degree n-k+1 in steps of 2
            deg = n - k + 1
            prev = rows[k - 1]
            row = [prev[i] * (deg - 2 * i) for i in range(len(prev)) if deg - 2 * i > 0]
            rows[k] = row
            axis_roots = True
        pivot = row[0]
        s = interval_sign(pivot)
        if s not in (POSITIVE, NEGATIVE):
            first = [r[0] for r in rows[: k + 1]]
            return StabilityReport(INCONCLUSIVE, (0, n), first_column=first,
                                   note=f"first-column entry {k} not sign-definite")
        if k == n:
            break
        above = rows[k - 1]
        nxt = []
        for i in range(max(len(above), len(row)) - 1):
            a1 = above[i + 1] if i + 1 < len(above) else Interval.point(0)
            b1 = row[i + 1] if i + 1 < len(row) else Interval.point(0)
            nxt.append((pivot * a1 - above[0] * b1) / pivot)
        rows.append(nxt)
    first = [r[0] for r in rows[: n + 1]]
    signs = [interval_sign(x) for x in first]
    changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    if changes:
        return StabilityReport(UNSTABLE, changes, first_column=first)
    if axis_roots:
        return StabilityReport(INCONCLUSIVE, (0, 0), first_column=first, note="roots on the imaginary axis")
    return StabilityReport(STABLE, 0, first_column=first)


# ---------------------------------------------------------------------------
# numeric cross-check


@dataclass
class EigenSigns:
    positive: int
    negative: int
    near_zero: int
    status: str = "ok"
    eigenvalues: tuple = ()


def numeric_eigen_check(j, precision=12):
    """Real-part sign counts of floating-point eigenvalues at interval midpoints (advisory)."""
    try:
        a = j.midpoint_array() if isinstance(j, JacobianMatrix) else np.array(j, dtype=float)
        ev = np.linalg.eigvals(a)
    except (np.linalg.LinAlgError, ValueError) as exc:
        return EigenSigns(0, 0, 0, f"{UNAVAILABLE}: {exc}")
    if not np.all(np.isfinite(ev)):
        return EigenSigns(0, 0, 0, f"{UNAVAILABLE}: non-finite eigenvalues")
    tol = 10.0 ** (-precision) * max(1.0, float(np.linalg.norm(a)))
    re = ev.real
    return EigenSigns(int(np.sum(re > tol)), int(np.sum(re < -tol)), int(np.sum(abs(re) <= tol)), "ok", tuple(ev))


def _agree(report, eig):
    if eig.status != "ok":
        return None
    if report.verdict == STABLE:
        return eig.positive == 0 and eig.near_zero == 0
    if report.verdict == UNSTABLE:
        return eig.positive == report.positive_real_part_count
    return None


# ---------------------------------------------------------------------------
# steady states


class StabilityAnalyzer:
    """Shared symbolic Jacobian for one model and parameter assignment."""

    def __init__(self, model, assignment, eliminate=None, free_value=None):
        reduced, _ = conservation_reduce(model, eliminate)
        values = dict(assignment.bindings)
        if assignment.free is not None:
            if free_value is None:
                raise ValueError(f"a value for the free parameter {assignment.free} is required")
            values[assignment.free] = as_rational(free_value)
        self.symbolic = symbolic_jacobian(reduced)
        self.jacobian = self.symbolic.instantiate(values)

    def classify(self, steady_state, rounds=DEFAULT_ROUNDS, precision=12):
        s = steady_state
        width = START_WIDTH
        report = None
        for _ in range(rounds + 1):
            s = s.refined(width)
            boxes = {v: s.coordinates[v] for v in self.jacobian.variables}
            try:
                J = self.jacobian.at(boxes)
                report = routh_hurwitz(char_poly(J))
            except IntervalDomainError:
                report = StabilityReport(INCONCLUSIVE, (0, self.jacobian.dimension), note="division by zero-straddling pivot")
            if report.verdict != INCONCLUSIVE or report.note == "roots on the imaginary axis":
                break
            width /= 2
        eig = numeric_eigen_check(J, precision)
        report.numeric = eig
        report.method_agreement = _agree(report, eig)
        return report


def classify_all(model, assignment, solution_set, **kw):
    an = StabilityAnalyzer(model, assignment, free_value=solution_set.parameter_value)
    return [an.classify(s, **kw) for s in solution_set.solutions]


def is_bistable(reports):
    return sum(1 for r in reports if r.verdict == STABLE) >= 2


def stability_report(reports, solution_set=None, species=None, digits=6):
    lines = []
    for i, r in enumerate(reports, 1):
        head = f"x({i})"
        if solution_set is not None and species is not None:
            head += " = " + solution_set.solutions[i - 1].render(digits, species)
        lines.append(head)
        count = r.positive_real_part_count
        cnt = f"{count[0]}..{count[1]}" if isinstance(count, tuple) else str(count)
        lines.append(f"  routh-hurwitz: {r.verdict}, sign changes {cnt}" + (f" ({r.note})" if r.note else ""))
        e = r.numeric
        if e is not None:
            if e.status == "ok":
                lines.append(f"  eigenvalues: {e.positive} positive, {e.negative} negative, {e.near_zero} near-zero real parts")
            else:
                lines.append(f"  eigenvalues: {e.status}")
        agree = {True: "yes", False: "no", None: "n/a"}[r.method_agreement]
        lines.append(f"  methods agree: {agree}")
    lines.append(f"bistable: {'yes' if is_bistable(reports) else 'no'}")
    return "\n".join(lines) + "\n"


__all__ = [
    "CharPoly",
    "EigenSigns",
    "INCONCLUSIVE",
    "JacobianMatrix",
    "STABLE",
    "StabilityAnalyzer",
    "StabilityReport",
    "UNSTABLE",
    "char_poly",
    "classify_all",
    "is_bistable",
    "numeric_eigen_check",
    "routh_hurwitz",
    "stability_report",
    "symbolic_jacobian",
]
