from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from multistat.exactnum import Interval
from multistat.model import conservation_reduce, parse_model
from multistat.polycore import parse_polynomial
from multistat.stability import (
    INCONCLUSIVE,
    STABLE,
    UNSTABLE,
    StabilityAnalyzer,
    char_poly,
    is_bistable,
    numeric_eigen_check,
    routh_hurwitz,
    stability_report,
    symbolic_jacobian,
)


def poly_from_roots(roots):
    """Low-first coefficients of prod (lam - r)."""
    c = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(c) + 1)
        for i, a in enumerate(c):
            nxt[i] -= r * a
            nxt[i + 1] += a
        c = nxt
    return c


def test_char_poly_examples():
    assert char_poly([[0, 1], [-1, 0]]).coeffs == [1, 0, 1]
    assert char_poly([[-1, 0], [0, -2]]).coeffs == [2, 3, 1]


def test_char_poly_3x3_against_expansion():
    a = [[Fraction(2), Fraction(1), Fraction(0)], [Fraction(1), Fraction(3), Fraction(1)], [Fraction(0), Fraction(1), Fraction(4)]]
    # det(lam I - A) for this tridiagonal matrix, expanded by hand
    assert char_poly(a).coeffs == [-18, 24, -9, 1]


def test_routh_examples():
    assert routh_hurwitz([2, 3, 1]).verdict == STABLE
    r = routh_hurwitz([-1, 0, 1])
    assert r.verdict == UNSTABLE and r.positive_real_part_count == 1
    assert routh_hurwitz([1, 0, 1]).verdict == INCONCLUSIVE


def test_routh_straddling_entry_is_inconclusive():
    r = routh_hurwitz([Interval(1), Interval(-1, 1), Interval(1)])
    assert r.verdict == INCONCLUSIVE


positive_roots = st.lists(st.fractions(min_value=Fraction(1, 9), max_value=20, max_denominator=9), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(positive_roots)
def test_routh_on_left_half_plane_products(rs):
    assert routh_hurwitz(poly_from_roots([-r for r in rs])).verdict == STABLE


@settings(max_examples=60, deadline=None)
@given(positive_roots, st.data())
def test_routh_after_flipping_one_factor(rs, data):
    i = data.draw(st.integers(0, len(rs) - 1))
    roots = [-r for r in rs]
    roots[i] = rs[i]
    r = routh_hurwitz(poly_from_roots(roots))
    assert r.verdict == UNSTABLE and r.positive_real_part_count == 1


def test_symbolic_jacobian_examples(model):
    lin = parse_model("species x y\node x = -2*x + y\node y = x - 3*y\n")
    j = symbolic_jacobian(lin.odes)
    assert [[e.constant_value() for e in row] for row in j.entries] == [[-2, 1], [1, -3]]
    sq = parse_model("species x\node x = x^2\n")
    assert symbolic_jacobian(sq.odes).entries[0][0] == parse_polynomial("2*x", ("x",))
    reduced, _ = conservation_reduce(model)
    assert symbolic_jacobian(reduced).dimension == 8


def test_numeric_check_trivial():
    e = numeric_eigen_check([[-1, 0], [0, -2]])
    assert (e.positive, e.negative, e.near_zero) == (0, 2, 0)


def test_linear_toy_model_is_stable():
    m = parse_model("species x y\nparam a = 1\node x = a - x\node y = x - y\n")
    from multistat.elimination import triangularize
    from multistat.model import build_steady_state_system
    from multistat.steadystate import solve_at_parameter

    a = m.assignment()
    sols = solve_at_parameter(triangularize(build_steady_state_system(m, a)))
    rep = StabilityAnalyzer(m, a).classify(sols[0])
    assert rep.verdict == STABLE and rep.method_agreement


def test_fixed_point_at_200(reports200):
    (r,) = reports200
    assert r.verdict == STABLE and r.positive_real_part_count == 0
    assert r.numeric.negative == 8 and r.numeric.positive == 0
    assert r.method_agreement is True
    assert not is_bistable(reports200)


def test_fixed_points_at_500(reports500):
    assert [r.verdict for r in reports500] == [STABLE, UNSTABLE, STABLE]
    mid = reports500[1]
    assert mid.positive_real_part_count == 1
    assert (mid.numeric.positive, mid.numeric.negative) == (1, 7)
    assert all(r.method_agreement is True for r in reports500)
    assert is_bistable(reports500)


def test_trace_matches_second_coefficient(model, sols500):
    an = StabilityAnalyzer(model, model.assignment(free="k19"), free_value=500)
    for s in sols500:
        s = s.refined(Fraction(1, 10**10))
        J = an.jacobian.at({v: s.coordinates[v] for v in an.jacobian.variables})
        p = char_poly(J)
        tr = J.trace()
        c7 = -p.coefficient(7)
        # both enclose the exact trace
        assert tr.lo <= c7.hi and c7.lo <= tr.hi


def test_coefficients_narrow_under_refinement(model, sols500):
    an = StabilityAnalyzer(model, model.assignment(free="k19"), free_value=500)
    s = sols500[1]
    widths = []
    for w in (Fraction(1, 10**4), Fraction(1, 10**7), Fraction(1, 10**10)):
        t = s.refined(w)
        J = an.jacobian.at({v: t.coordinates[v] for v in an.jacobian.variables})
        widths.append(char_poly(J).max_width())
    assert widths[0] >= widths[1] >= widths[2]
    assert widths[2] < widths[0]


def test_report_text(reports500, sols500, model):
    text = stability_report(reports500, sols500, model.species)
    assert text.rstrip().endswith("bistable: yes")
    assert text.count("routh-hurwitz: stable") == 2
    assert "routh-hurwitz: unstable, sign changes 1" in text
