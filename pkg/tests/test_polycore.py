from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multistat.polycore import (
    DomainError,
    MultiPoly,
    PolynomialSyntaxError,
    RationalFunction,
    StructuralError,
    UniPoly,
    clear_denominators,
    discriminant,
    parse_polynomial,
    poly_arith,
    resultant,
    squarefree_part,
    substitute,
    univariate_gcd,
)

coef = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def uni(coeffs, var="x"):
    return UniPoly.from_rationals(var, [Fraction(c) for c in coeffs])


def P(text, ring=None):
    return parse_polynomial(text, ring)


def det(m):
    """Plain Gaussian elimination over Fractions."""
    m = [[Fraction(x) for x in row] for row in m]
    n, sign, out = len(m), 1, Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return sign * out


def sylvester(a, b):
    """Sylvester determinant from low-first coefficient lists."""
    m, n = len(a) - 1, len(b) - 1
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(a)) + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(b)) + [0] * (m - 1 - i))
    return det(rows)


def nonzero_lead(deg):
    return st.lists(coef, min_size=deg, max_size=deg).flatmap(
        lambda low: coef.filter(lambda c: c != 0).map(lambda lc: low + [lc]))


# --- arithmetic -------------------------------------------------------------


def test_arith_examples():
    assert poly_arith(P("x+1"), P("x-1"), "mul") == P("x^2-1")
    p = P("3*x*y - 2", ("x", "y"))
    assert p + MultiPoly.zero(("x", "y")) == p
    assert P("x+y") ** 2 == P("x^2+2*x*y+y^2")


def test_ring_mismatch_is_structural_error():
    with pytest.raises(StructuralError):
        poly_arith(P("x", ("x",)), P("y", ("y",)), "add")


def test_grammar_accepts_model_terms():
    ring = ("x1", "x4", "x5", "x6", "x11", "k1", "k2", "k15", "k16")
    p = P("k2*x6 + k15*x11 - k1*x1*x4 - k16*x1*x5", ring)
    assert len(p) == 4
    assert P("0.5*x^2 + 1/3", ("x",)) == P("1/2*x^2+1/3", ("x",))
    with pytest.raises(PolynomialSyntaxError):
        P("x^^2")


# --- substitution -----------------------------------------------------------


def test_substitute_conservation_form():
    ring = ("x1", "x4", "x6", "x7")
    x6 = RationalFunction(P("2/101*x4*x1", ring))
    x7 = RationalFunction(P("50 - 2/101*x4*x1 - x4", ring))
    r = substitute(P("x4 + x6 + x7", ring), {"x6": x6, "x7": x7})
    assert r == RationalFunction(MultiPoly.constant(ring, 50))


def test_substitute_identity_and_constant():
    p = P("k1*x1*x4", ("x1", "x4", "k1"))
    assert substitute(p, {}) == RationalFunction(p)
    r = substitute(p, {"k1": Fraction(1, 50)})
    assert r.numerator.evaluate({"x1": 1, "x4": 1, "k1": 7}) * 50 == r.denominator.evaluate({"x1": 1, "x4": 1, "k1": 7})


def test_substitute_rational_values_in_denominator():
    ring = ("x", "y")
    r = substitute(P("x*y + 1", ring), {"y": RationalFunction(P("1", ring), P("x+1", ring))})
    assert r == RationalFunction(P("2*x+1", ring), P("x+1", ring))


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=3, max_size=3), st.lists(coef, min_size=3, max_size=3),
       st.lists(coef, min_size=2, max_size=2))
def test_substitute_is_multiplicative(ca, cb, cy):
    ring = ("x", "y")
    a = _poly(ring, {(1, 1): ca[0], (0, 2): ca[1], (0, 0): ca[2]})
    b = _poly(ring, {(1, 0): cb[0], (0, 1): cb[1], (0, 0): cb[2]})
    y = RationalFunction(_poly(ring, {(1, 0): cy[0], (0, 0): cy[1]}), P("x^2+1", ring))
    lhs = substitute(a * b, {"y": y})
    rhs = substitute(a, {"y": y}) * substitute(b, {"y": y})
    assert lhs == rhs


def _poly(ring, terms):
    return MultiPoly(ring, {k: Fraction(v) for k, v in terms.items() if v})


# --- gcd / squarefree -------------------------------------------------------


def test_gcd_examples():
    assert univariate_gcd(uni([-1, 0, 1]), uni([-1, 1])) == uni([-1, 1])
    assert univariate_gcd(uni([-2, 0, 1]), uni([-3, 0, 1])) == uni([1])
    a = uni([-1, 1]) * uni([-1, 1]) * uni([2, 1])
    b = uni([-1, 1]) * uni([3, 1])
    assert univariate_gcd(a, b) == uni([-1, 1])
    assert univariate_gcd(uni([4, 2]), uni([0])) == uni([2, 1])


def test_squarefree_examples(tri):
    p = uni([-1, 1]) * uni([-1, 1]) * uni([1, 1])
    assert squarefree_part(p) == uni([-1, 0, 1])
    q = uni([-2, 0, 1])
    assert squarefree_part(squarefree_part(q)) == squarefree_part(q)
    f500 = tri.at(500)
    g = univariate_gcd(f500, f500.derivative())
    assert g.degree == 0
    assert squarefree_part(f500).degree == 6
    with pytest.raises(DomainError):
        squarefree_part(uni([0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(nonzero_lead))
def test_squarefree_part_is_coprime_to_derivative(c):
    p = uni(c)
    p = p * p * uni([1, 1])
    s = squarefree_part(p)
    assert univariate_gcd(s, s.derivative()).degree == 0


# --- resultants -------------------------------------------------------------


def test_resultant_examples():
    assert resultant(uni([-1, 0, 1]), uni([-2, 1])).constant_value() == 3
    assert resultant(uni([-2, 0, 1]), uni([0, 2])).constant_value() == -8
    with pytest.raises(DomainError):
        resultant(uni([0]), uni([1, 1]))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(nonzero_lead), st.integers(1, 4).flatmap(nonzero_lead))
def test_resultant_matches_sylvester_determinant(a, b):
    assert resultant(uni(a), uni(b)).constant_value() == sylvester(a, b)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3).flatmap(nonzero_lead), st.integers(1, 3).flatmap(nonzero_lead),
       st.booleans())
def test_resultant_vanishes_iff_common_factor(a, b, share):
    pa, pb = uni(a), uni(b)
    if share:
        pa, pb = pa * uni([-1, 1]), pb * uni([-1, 1])
    zero = resultant(pa, pb).constant_value() == 0
    assert zero == (univariate_gcd(pa, pb).degree > 0)


def test_resultant_with_parameters():
    ring = ("x", "k")
    a = UniPoly.from_multipoly(P("x^2 - k", ring), "x")
    b = UniPoly.from_multipoly(P("x - 2", ring), "x")
    assert resultant(a, b) == P("4 - k", ("k",)).align(resultant(a, b).variables)


def test_discriminant_examples():
    ring = ("x", "b", "c")
    d = discriminant(UniPoly.from_multipoly(P("x^2+b*x+c", ring), "x"))
    assert d == P("b^2-4*c", d.variables)
    assert discriminant(uni([1, -2, 1])).is_zero()
    with pytest.raises(DomainError):
        discriminant(uni([5]))


def test_discriminant_matches_product_formula():
    # (x-1)(x-2)(x-4): prod (ri-rj)^2 = 1*9*4
    p = uni([-1, 1]) * uni([-2, 1]) * uni([-4, 1])
    assert discriminant(p).constant_value() == 36


def test_eliminated_discriminant_is_divisible_by_break_polynomial(tri, reference):
    # disc = c * E * Q^2 with E the degree-10 break polynomial and Q the quartic inequation
    d = discriminant(tri.eliminated).align(("k19",))
    quartic = [c for c in reference.extra_constraints() if c.total_degree() == 4][0]
    rest = d.exact_div(reference.break_point_polynomial()).exact_div(quartic * quartic)
    assert rest.is_constant() and not rest.is_zero()


# --- clearing denominators --------------------------------------------------


def test_clear_denominators_examples(reference):
    assert clear_denominators(RationalFunction(P("1/2*x+1/3"))) == (P("3*x+2"), P("1", ("x",)) * 6)
    num, den = clear_denominators(RationalFunction(P("4*x+6")))
    assert num == P("4*x+6") and den == P("1", ("x",))
    num, den = clear_denominators(RationalFunction(P("3/4*x^2+3/2")))
    assert num == P("3*x^2+6") and den == P("4", ("x",))
    num, den = clear_denominators(RationalFunction(P("2*x"), P("6*x+4")))
    assert num == P("x") and den == P("3*x+2")
    n, d = reference.x2_formula()
    r = RationalFunction(n, d)
    cn, cd = clear_denominators(r)
    assert cn.is_integral() and cd.is_integral()
    assert gcd(int(cn.content()), int(cd.content())) == 1
    assert RationalFunction(cn, cd) == r
