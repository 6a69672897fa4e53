"""Exact rationals and rational-endpoint intervals.

Rationals are the stdlib :class:`fractions.Fraction` (always reduced, positive
denominator).  Inside hot loops plain ``int`` values are used wherever a
number happens to be integral; both types expose ``numerator`` and
``denominator`` so the rest of the package treats them uniformly.
"""

from __future__ import annotations

import decimal
import math
from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction

#: outward rounding kicks in when an endpoint denominator exceeds this many bits
DEFAULT_DENOMINATOR_BITS = 4096


class DecimalParseError(ValueError):
    def __init__(self, text, position, reason):
        self.text = text
        self.position = position
        super().__init__(f"malformed decimal literal {text!r} at position {position}: {reason}")


class IntervalDomainError(ArithmeticError):
    pass


def normalize(q):
    """Return ``q`` as an int when it is integral, else as a Fraction."""
    if isinstance(q, int):
        return q
    if q.denominator == 1:
        return int(q.numerator)
    return q


def as_rational(value):
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational (floats are not accepted)")


_DIGITS = set("0123456789")


def rational_from_decimal(text):
    """Convert a finite decimal literal such as ``"-0.0011"`` to an exact Fraction.

    No floating point is involved; errors name the offending character position.
    """
    s = text.strip()
    offset = len(text) - len(text.lstrip())
    if not s:
        raise DecimalParseError(text, 0, "empty literal")
    pos = 0
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        pos = 1
    int_digits = []
    frac_digits = []
    seen_point = False
    for i in range(pos, len(s)):
        ch = s[i]
        if ch in _DIGITS:
            (frac_digits if seen_point else int_digits).append(ch)
        elif ch == "." and not seen_point:
            seen_point = True
        else:
            raise DecimalParseError(text, offset + i, f"unexpected character {ch!r}")
    if not int_digits and not frac_digits:
        raise DecimalParseError(text, offset + len(s), "no digits")
    numerator = int("".join(int_digits + frac_digits) or "0")
    return Fraction(sign * numerator, 10 ** len(frac_digits))


def parse_rational(text):
    """Parse an integer, ``a/b`` fraction, or decimal literal exactly."""
    s = text.strip()
    if "/" in s:
        num, _, den = s.partition("/")
        n = rational_from_decimal(num)
        d = rational_from_decimal(den)
        if d == 0:
            raise DecimalParseError(text, text.index("/") + 1, "zero denominator")
        return n / d
    return rational_from_decimal(s)


def format_decimal(q, digits=6):
    """Render a rational with ``digits`` significant digits, round-half-even.

    Trailing zeros are dropped so the string is the shortest one that
    round-trips at the requested precision.
    """
    q = Fraction(q)
    if q == 0:
        return "0"
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)
    d = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    d = d.normalize(ctx)
    exp = d.adjusted()
    if -7 <= exp < 16:
        return format(d, "f")
    return format(d, "e")


def _floor_scaled(q, bits):
    scale = 1 << bits
    return Fraction(math.floor(q * scale), scale)


def _ceil_scaled(q, bits):
    scale = 1 << bits
    return Fraction(math.ceil(q * scale), scale)


class Interval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = as_rational(lo)
        hi = lo if hi is None else as_rational(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    @classmethod
    def point(cls, q):
        return cls(q, q)

    @classmethod
    def _raw(cls, lo, hi):
        obj = object.__new__(cls)
        object.__setattr__(obj, "lo", lo)
        object.__setattr__(obj, "hi", hi)
        return obj

    # queries -----------------------------------------------------------
    @property
    def width(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return (Fraction(self.lo) + self.hi) / 2

    def is_point(self):
        return self.lo == self.hi

    def contains(self, x):
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def overlaps(self, other):
        return self.lo <= other.hi and other.lo <= self.hi

    def magnitude(self):
        return max(abs(self.lo), abs(self.hi))

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"

    def render(self, digits=6):
        return f"[{format_decimal(self.lo, digits)}, {format_decimal(self.hi, digits)}]"

    # arithmetic --------------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, Interval):
            return x
        x = as_rational(x)
        return Interval._raw(x, x)

    def __add__(self, other):
        other = self._coerce(other)
        return _rounded(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval._raw(-self.hi, -self.lo)

    def __sub__(self, other):
        other = self._coerce(other)
        return _rounded(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Interval):
            c = as_rational(other)
            if c >= 0:
                return _rounded(self.lo * c, self.hi * c)
            return _rounded(self.hi * c, self.lo * c)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        if a >= 0 and c >= 0:
            return _rounded(a * c, b * d)
        if b <= 0 and d <= 0:
            return _rounded(b * d, a * c)
        if a >= 0 and d <= 0:
            return _rounded(b * c, a * d)
        if b <= 0 and c >= 0:
            return _rounded(a * d, b * c)
        products = (a * c, a * d, b * c, b * d)
        return _rounded(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self):
        if self.lo <= 0 <= self.hi:
            raise IntervalDomainError(f"division by interval containing zero: {self!r}")
        return _rounded(1 / Fraction(self.hi), 1 / Fraction(self.lo))

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        if n == 0:
            return Interval._raw(1, 1)
        lo, hi = self.lo, self.hi
        if n % 2 == 1 or lo >= 0:
            return _rounded(lo ** n, hi ** n)
        if hi <= 0:
            return _rounded(hi ** n, lo ** n)
        return _rounded(0, max(-lo, hi) ** n)

    def hull(self, other):
        other = self._coerce(other)
        return Interval._raw(min(self.lo, other.lo), max(self.hi, other.hi))


def _bits(q):
    return q.denominator.bit_length() if isinstance(q, Fraction) else 0


def _rounded(lo, hi, bits=DEFAULT_DENOMINATOR_BITS):
    if _bits(lo) > bits:
        lo = _floor_scaled(lo, bits)
    if _bits(hi) > bits:
        hi = _ceil_scaled(hi, bits)
    return Interval._raw(lo, hi)


def interval_arith(a, b, op):
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two intervals."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown interval operation {op!r}")


NEGATIVE = "negative"
POSITIVE = "positive"
STRADDLING = "zero-straddling"
EXACT_ZERO = "exact-zero"


def interval_sign(a):
    if a.lo > 0:
        return POSITIVE
    if a.hi < 0:
        return NEGATIVE
    if a.lo == 0 and a.hi == 0:
        return EXACT_ZERO
    return STRADDLING
