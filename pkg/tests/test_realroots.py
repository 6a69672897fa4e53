from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multistat.exactnum import Interval
from multistat.polycore import UniPoly, parse_polynomial
from multistat.polycore import dense
from multistat.realroots import (
    EQUAL,
    GREATER,
    LESS,
    NEGATIVE,
    POSITIVE,
    POSITIVE_ONLY,
    ZERO,
    EndpointRootError,
    RealAlgebraicNumber,
    RootDomainError,
    compare,
    isolate_real_roots,
    refine,
    sign_of_poly_at,
    sturm_count,
)


def uni(coeffs, var="x"):
    return UniPoly.from_rationals(var, [Fraction(c) for c in coeffs])


SQRT2 = RealAlgebraicNumber(uni([-2, 0, 1]), Interval(1, 2))


def test_sturm_count_examples(tri):
    assert sturm_count(uni([0, -1, 0, 1]), (-2, 2)) == 3
    assert sturm_count(uni([1, 0, 1]), (-10, 10)) == 0
    assert sturm_count(tri.at(500), (0, 10**6)) == 3


def test_sturm_count_rejects_root_endpoint():
    with pytest.raises(EndpointRootError):
        sturm_count(uni([-1, 0, 1]), (1, 3))


def test_isolation_examples(tri, reference):
    r200 = isolate_real_roots(tri.at(200), POSITIVE_ONLY)
    assert [r.approx(6) for r in r200] == ["90.6512"]
    r500 = isolate_real_roots(tri.at(500), POSITIVE_ONLY)
    assert [r.approx(6) for r in r500] == ["17.6392", "122.034", "323.761"]
    e5 = UniPoly.from_multipoly(reference.break_point_polynomial(), "k19")
    assert len(isolate_real_roots(e5, (409, 410))) == 1
    with pytest.raises(RootDomainError):
        isolate_real_roots(uni([0]))


def test_positive_only_drops_zero_root():
    roots = isolate_real_roots(uni([0, -1, 0, 1]), POSITIVE_ONLY)
    assert len(roots) == 1 and compare(roots[0], Fraction(1)) == EQUAL
    assert len(isolate_real_roots(uni([0, -1, 0, 1]))) == 3


def test_refine_examples(tri, reference):
    r = refine(SQRT2, Fraction(1, 1000))
    assert Fraction(1414, 1000) < r.isolation.lo and r.isolation.hi < Fraction(14143, 10000)
    again = refine(r, Fraction(1, 10))
    assert again.isolation.width <= Fraction(1, 10) and compare(again, r) == EQUAL
    e5 = UniPoly.from_multipoly(reference.break_point_polynomial(), "k19")
    beta = refine(isolate_real_roots(e5, (409, 410))[0], Fraction(1, 10**6))
    assert beta.isolation.width <= Fraction(1, 10**6)
    assert beta.approx(7) == "409.2534"


def test_sign_examples():
    x = ("x",)
    assert sign_of_poly_at(parse_polynomial("x^2-2", x), {"x": SQRT2}) == ZERO
    assert sign_of_poly_at(parse_polynomial("x-1", x), {"x": SQRT2}) == POSITIVE
    assert sign_of_poly_at(parse_polynomial("3-2*x^2", x), {"x": SQRT2}) == NEGATIVE


def test_sign_exact_fallback_on_two_algebraic_values():
    # sqrt2*sqrt3 - sqrt6 == 0 cannot be decided by refinement alone
    sq3 = RealAlgebraicNumber(uni([-3, 0, 1]), Interval(1, 2))
    sq6 = RealAlgebraicNumber(uni([-6, 0, 1]), Interval(2, 3))
    p = parse_polynomial("a*b - c", ("a", "b", "c"))
    assert sign_of_poly_at(p, {"a": SQRT2, "b": sq3, "c": sq6}) == ZERO


def test_sign_of_residual_at_solution(tri, sols200):
    # the k19 conservation law with every solved coordinate written as a function of x1;
    # it vanishes only through the root of the eliminated polynomial
    from multistat.elimination import composed_formulae
    from multistat.polycore import substitute_parts

    law = tri.system.equations[tri.system.labels.index("conservation k19")]
    num, _ = substitute_parts(law, composed_formulae(tri))
    num = num.substitute_values({"k19": Fraction(200)}).align(("x1",))
    assert not num.is_zero()
    root = sols200[0].root
    assert sign_of_poly_at(num, {"x1": root}) == ZERO
    shifted = num.compose("x1", parse_polynomial("x1 + 1/1000", ("x1",)))
    assert sign_of_poly_at(shifted, {"x1": root}) != ZERO


def test_compare_examples(tri):
    assert compare(SQRT2, Fraction(3, 2)) == LESS
    other = RealAlgebraicNumber(uni([-4, 0, 2]), Interval(Fraction(7, 5), Fraction(3, 2)))
    assert compare(SQRT2, other) == EQUAL
    assert compare(Fraction(3, 2), SQRT2) == GREATER
    roots = list(isolate_real_roots(tri.at(500), POSITIVE_ONLY))
    shuffled = [roots[2], roots[0], roots[1]]
    assert sorted(shuffled) == roots
    assert compare(roots[0], roots[1]) == LESS and compare(roots[1], roots[2]) == LESS


# --- properties -------------------------------------------------------------

small_int = st.integers(-6, 6)


@st.composite
def factored(draw):
    """Product of linear factors (x - r) times an optional x^2 + c, c > 0."""
    rs = draw(st.lists(st.fractions(min_value=-8, max_value=8, max_denominator=5), min_size=1, max_size=5))
    p = uni([1])
    for r in rs:
        p = p * uni([-r, 1])
    if draw(st.booleans()):
        p = p * uni([draw(st.integers(1, 5)), 0, 1])
    return p, rs


@settings(max_examples=80, deadline=None)
@given(factored())
def test_isolation_sound_and_complete(pr):
    p, rs = pr
    roots = isolate_real_roots(p)
    distinct = sorted(set(rs))
    assert len(roots) == len(distinct)
    sf = UniPoly.from_rationals("x", dense.squarefree_part(p.rational_coeffs()))
    total = 0
    for r, want in zip(roots, distinct):
        assert compare(r, want) == EQUAL
        iv = r.isolation
        if iv.is_point():
            total += 1
            continue
        assert sturm_count(sf, iv) == 1
        total += 1
    bound = max(abs(q) for q in distinct) + 1
    assert total == sturm_count(sf, (-bound, bound))


@settings(max_examples=80, deadline=None)
@given(st.lists(small_int, min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
def test_positive_count_within_descartes_bound(c):
    p = uni(c)
    if all(a == 0 for a in c[:-1]):
        return
    n = len(isolate_real_roots(p, POSITIVE_ONLY))
    sf = dense.squarefree_part(p.rational_coeffs())
    assert n <= dense.sign_variations(sf)
    assert n == sturm_count(UniPoly.from_rationals("x", sf), (0, None)) if dense.sign_at(sf, Fraction(0)) else True


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.fractions(min_value=0, max_value=8, max_denominator=7),
       st.integers(1, 30))
def test_refine_preserves_comparisons(n, probe, k):
    a = RealAlgebraicNumber(uni([-n, 0, 1]), Interval(0, n))
    before = compare(a, probe)
    b = refine(a, Fraction(1, 2 ** k))
    assert compare(b, probe) == before
    assert b.isolation.width <= Fraction(1, 2 ** k)
