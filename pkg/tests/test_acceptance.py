"""End-to-end acceptance criteria 1-9; each test prints one PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest

from multistat.elimination import DIVIDES, EXACT_MATCH, blind_spots, triangularize, verify_against_reference
from multistat.exactnum import Interval, interval_arith
from multistat.model import build_steady_state_system, conservation_derivative
from multistat.paramsweep import decompose_parameter_line, find_break_points
from multistat.polycore import UniPoly, discriminant, resultant, sylvester_resultant
from multistat.polycore import dense
from multistat.realroots import EQUAL, GREATER, LESS, compare, isolate_real_roots, sturm_count
from multistat.stability import INCONCLUSIVE, STABLE, UNSTABLE, is_bistable
from multistat.steadystate import count_positive, residual_certificate, solve_at_parameter

TOL = Fraction(1, 1000)


@pytest.fixture
def report(capsys):
    def _report(n, title, checks):
        failed = [name for name, ok in checks if not ok]
        line = f"criterion {n} ({title}): {'PASS' if not failed else 'FAIL'}"
        if failed:
            line += " -- failed: " + "; ".join(failed)
        with capsys.disabled():
            print("\n" + line)
        assert not failed, line
    return _report


def approx_equal(r, q, tol=TOL):
    return abs(r.refine(tol / 10).isolation.midpoint - Fraction(q)) < tol


def test_criterion_1_eliminated_polynomial(report, free_system, reference):
    start = time.perf_counter()
    t = triangularize(free_system)
    elapsed = time.perf_counter() - start
    ref = reference.eliminated()
    verdict = verify_against_reference(t, ref)
    ours = t.eliminated_poly()
    try:
        q = ours.exact_div(ref.to_multipoly(ours.variables))
        divides = True
        scalar = q.is_constant()
    except ArithmeticError:
        divides = scalar = False
    report(1, "eliminated polynomial", [
        (f"verdict {verdict}", verdict in (EXACT_MATCH, DIVIDES)),
        ("exact trial division by the published polynomial", divides),
        ("equal up to a rational scalar", scalar),
        (f"runtime {elapsed:.1f}s < 60s", elapsed < 60),
    ])


def test_criterion_2_fixed_point_values(report, tri, reference, model):
    rel = reference.tolerance("solutions_relative")
    checks = []
    for value in (200, 500):
        start = time.perf_counter()
        sols = solve_at_parameter(tri, value)
        rows = reference.solutions(value)
        for s, row in zip(sols, rows):
            for sp, want in zip(model.species, row):
                got = s.refined(abs(want) * rel / 10).coordinates[sp].midpoint
                if abs(got - want) > rel * abs(want):
                    checks.append((f"k19={value} {sp}={float(got):.8g} vs {want}", False))
        elapsed = time.perf_counter() - start
        checks.append((f"k19={value}: {len(sols)} solutions, expected {len(rows)}", len(sols) == len(rows)))
        checks.append((f"k19={value} runtime {elapsed:.1f}s < 30s", elapsed < 30))
    report(2, "fixed-point values", checks)


def test_criterion_3_break_point(report, tri, reference):
    d = decompose_parameter_line(tri)
    e5 = UniPoly.from_multipoly(reference.break_point_polynomial(), "k19")
    target = list(isolate_real_roots(e5, (409, 410)))
    below = [b for b in find_break_points(d) if compare(b.location, 25084) == LESS]
    ok_one = len(below) == 1 and len(target) == 1
    b = below[0] if below else None
    try:
        discriminant(tri.eliminated).align(("k19",)).exact_div(reference.break_point_polynomial())
        divides = True
    except ArithmeticError:
        divides = False
    report(3, "break point", [
        ("exactly one count change on (0, 25084)", ok_one),
        ("break point equals the published root in (409, 410)", ok_one and compare(b.location, target[0]) == EQUAL),
        ("count 1 below, 3 above", ok_one and (b.count_before, b.count_after) == (1, 3)),
        ("published polynomial divides the discriminant", divides),
    ])


def test_criterion_4_blind_spots(report, tri):
    spots = blind_spots(tri)
    want = ["409.253", "16473.337", "25084.536"]
    checks = [(f"{len(spots)} blind spots", len(spots) == 3)]
    for r, q in zip(spots, want):
        checks.append((f"{r.approx(9)} ~ {q}", approx_equal(r, q)))
    report(4, "blind spots", checks)


REPEATED = [
    ({"k17": 95}, "k19", ["369.917"]),
    ({"k17": 105}, "k19", ["450.077"]),
    ({"k19": 500}, "k17", ["85.988", "110.869"]),
    ({"k19": 500}, "k18", ["51.382", "58.329"]),
    ({"k19": 200}, "k17", []),
    ({"k19": 200}, "k18", []),
]


def test_criterion_5_repeated_break_points(report, model):
    checks = []
    for rebind, free, want in REPEATED:
        label = ", ".join(f"{k}={v}" for k, v in rebind.items()) + f", {free} free"
        start = time.perf_counter()
        t = triangularize(build_steady_state_system(model, model.assignment(rebind, free=free)))
        bps = find_break_points(decompose_parameter_line(t))
        elapsed = time.perf_counter() - start
        got = [b.location.approx(8) for b in bps]
        ok = len(bps) == len(want) and all(approx_equal(b.location, q) for b, q in zip(bps, want))
        checks.append((f"{label}: got [{', '.join(got)}], expected [{', '.join(want)}]", ok))
        checks.append((f"{label} runtime {elapsed:.1f}s < 60s", elapsed < 60))
    report(5, "repeated-process break points", checks)


def test_criterion_6_stability(report, reports200, reports500):
    verdicts = [r.verdict for r in reports500]
    checks = [
        ("k19=200 stable", [r.verdict for r in reports200] == [STABLE]),
        (f"k19=500 verdicts {verdicts}", verdicts == [STABLE, UNSTABLE, STABLE]),
        ("middle solution has one positive-real-part root", reports500[1].positive_real_part_count == 1),
        ("bistable", is_bistable(reports500)),
        ("methods agree", all(r.method_agreement is True for r in list(reports200) + list(reports500))),
        ("no inconclusive verdicts", all(r.verdict != INCONCLUSIVE for r in list(reports200) + list(reports500))),
    ]
    report(6, "stability", checks)


def test_criterion_7_large_parameter_counts(report, tri):
    report(7, "exact counts where numerics fail", [
        (f"k19={v}: {count_positive(tri, v)} (expected 3)", count_positive(tri, v) == 3) for v in (6000, 10000)
    ])


def test_criterion_8_candidate_filter(report, filter500, sols500):
    out, _, elapsed = filter500
    same = len(out) == len(sols500) and all(
        all(compare(x, s.refined(Fraction(1, 10**9)).coordinates[sp].lo) != LESS
            and compare(x, s.refined(Fraction(1, 10**9)).coordinates[sp].hi) != GREATER
            for sp, x in got.coordinates.items())
        for got, s in zip(out, sols500))
    report(8, "candidate filter oracle", [
        (f"{len(out)} of {out.stats.total} tuples accepted", len(out) == 3 and out.stats.total == 3 ** 11),
        (f"{out.stats.rejected} rejected", out.stats.rejected == 3 ** 11 - 3),
        ("accepted tuples equal the assembled solutions", same),
        (f"runtime {elapsed:.1f}s < 600s", elapsed < 600),
    ])


def _random_poly(rng, deg):
    c = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(deg)]
    return c + [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))]


def test_criterion_9_property_suites(report, tri, model, sols200, sols500):
    rng = random.Random(20240917)
    checks = []

    ok = True
    for _ in range(40):
        c = _random_poly(rng, rng.randint(1, 6))
        sf = dense.squarefree_part(c)
        p = UniPoly.from_rationals("x", sf)
        roots = isolate_real_roots(p)
        pos = [r for r in roots if compare(r, 0) == GREATER]
        bound = dense.cauchy_bound(sf) + 1
        ok &= all(r.isolation.is_point() or sturm_count(p, r.isolation) == 1 for r in roots)
        ok &= len(roots) == sturm_count(p, (-bound, bound))
        ok &= len(pos) <= dense.sign_variations(sf)
    checks.append(("Sturm/Descartes isolation cross-checks", ok))

    ok = True
    for _ in range(60):
        a = UniPoly.from_rationals("x", _random_poly(rng, rng.randint(1, 4)))
        b = UniPoly.from_rationals("x", _random_poly(rng, rng.randint(1, 4)))
        ok &= resultant(a, b) == sylvester_resultant(a, b)
    checks.append(("resultant vs Sylvester determinant (deg <= 4)", ok))

    ok = True
    for _ in range(200):
        xs = sorted(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
        ys = sorted(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
        x = xs[0] + (xs[1] - xs[0]) * Fraction(rng.randint(0, 10), 10)
        y = ys[0] + (ys[1] - ys[0]) * Fraction(rng.randint(0, 10), 10)
        for op, val in (("add", x + y), ("sub", x - y), ("mul", x * y)) + ((("div", x / y),) if ys[0] > 0 or ys[1] < 0 else ()):
            r = interval_arith(Interval(*xs), Interval(*ys), op)
            ok &= r.lo <= val <= r.hi
    checks.append(("interval containment soundness", ok))

    checks.append(("conservation forms have zero time derivative",
                   all(conservation_derivative(model, law).is_zero() for law in model.conservation)))

    ok = all(residual_certificate(s, tri.system, Fraction(1, 10**8)).ok for s in list(sols200) + list(sols500))
    checks.append(("residual certificates contain 0 at width 1e-8", ok))

    probes = [1, 50, 200, 300, 409, 410, 500, 1000, 6000, 10000, 30000]
    counts = {v: count_positive(tri, v) for v in probes}
    checks.append((f"count >= 1 at probes {counts}", all(c >= 1 for c in counts.values())))
    report(9, "property suites", checks)
