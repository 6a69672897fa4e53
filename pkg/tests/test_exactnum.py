from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multistat.exactnum import (
    EXACT_ZERO,
    NEGATIVE,
    POSITIVE,
    STRADDLING,
    DecimalParseError,
    Interval,
    IntervalDomainError,
    format_decimal,
    interval_arith,
    interval_sign,
    rational_from_decimal,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)


@st.composite
def intervals(draw):
    a, b = draw(rationals), draw(rationals)
    return Interval(min(a, b), max(a, b))


@st.composite
def nested(draw):
    """An interval, a point inside it and an enclosing interval."""
    iv = draw(intervals())
    t = draw(st.fractions(min_value=0, max_value=1, max_denominator=20))
    grow = draw(st.fractions(min_value=0, max_value=3, max_denominator=10))
    x = iv.lo + t * (iv.hi - iv.lo)
    return x, iv, Interval(iv.lo - grow, iv.hi + grow)


@pytest.mark.parametrize("text,value", [
    ("0.02", Fraction(1, 50)),
    ("0", Fraction(0)),
    ("0.0011", Fraction(11, 10000)),
    ("-3.5", Fraction(-7, 2)),
    ("+12", Fraction(12)),
])
def test_decimal_literals(text, value):
    q = rational_from_decimal(text)
    assert q == value
    assert q.denominator > 0


@pytest.mark.parametrize("text,pos", [("1.2.3", 3), ("12a", 2), ("", 0)])
def test_malformed_decimal_names_position(text, pos):
    with pytest.raises(DecimalParseError) as info:
        rational_from_decimal(text)
    assert f"position {pos}" in str(info.value)


def test_interval_examples():
    assert interval_arith(Interval(1, 2), Interval(3, 4), "add") == Interval(4, 6)
    assert interval_arith(Interval(-1, 2), Interval(3, 4), "mul") == Interval(-4, 8)
    assert interval_arith(Interval(1, 1), Interval(2, 2), "div") == Interval(Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(IntervalDomainError):
        interval_arith(Interval(1, 2), Interval(-1, 1), "div")


def test_interval_sign_examples():
    assert interval_sign(Interval(Fraction(1, 3), Fraction(1, 2))) == POSITIVE
    assert interval_sign(Interval(-1, 1)) == STRADDLING
    assert interval_sign(Interval(0, 0)) == EXACT_ZERO
    assert interval_sign(Interval(-2, -1)) == NEGATIVE


def test_format_decimal_rounds_to_nearest():
    assert format_decimal(Fraction(1, 3), 6) == "0.333333"
    assert format_decimal(Fraction(2, 3), 3) == "0.667"


@given(rationals, rationals, rationals, rationals)
def test_rational_sum_cross_multiplication(a, b, c, d):
    s = a + b
    assert s * 1 == a + b
    if b and d:
        x, y = a / b, c / d
        assert (x + y) * (b * d) == a * d + c * b


OPS = ["add", "sub", "mul", "div"]


@given(nested(), nested(), st.sampled_from(OPS))
def test_containment_and_monotonicity(pa, pb, op):
    x, a, a2 = pa
    y, b, b2 = pb
    if op == "div" and (b2.lo <= 0 <= b2.hi):
        return
    r = interval_arith(a, b, op)
    r2 = interval_arith(a2, b2, op)
    exact = {"add": x + y, "sub": x - y, "mul": x * y, "div": x / y if y else None}[op]
    assert r.lo <= exact <= r.hi
    assert r2.lo <= r.lo and r.hi <= r2.hi


@given(intervals(), intervals())
def test_product_is_tight(a, b):
    r = interval_arith(a, b, "mul")
    corners = [x * y for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
    assert r == Interval(min(corners), max(corners))


def test_outward_rounding_keeps_containment():
    # a denominator far beyond the bit bound
    q = Fraction(1, 3 ** 3000)
    iv = Interval(q, q * 2) * Interval(1, 1)
    assert iv.lo <= q and q * 2 <= iv.hi
