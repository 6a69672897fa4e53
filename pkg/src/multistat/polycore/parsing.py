"""Text grammar for polynomials: ``k2*x6 + k15*x11 - k1*x1*x4 - 1/2*x1^2``."""

from __future__ import annotations

import re
from fractions import Fraction

from multistat.exactnum import rational_from_decimal
from multistat.polycore.multipoly import MultiPoly

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+\.?\d*|\.\d+)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^/]))")


class PolynomialSyntaxError(ValueError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class UnknownIdentifierError(PolynomialSyntaxError):
    pass


def natural_key(name):
    """Sort ``x2`` before ``x10``."""
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def _tokenize(text):
    pos = 0
    tokens = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


def parse_terms(text):
    """Parse into a list of ``(coefficient, {identifier: exponent})`` terms."""
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    terms = []
    sign = 1
    kind, val, pos = peek()
    if kind == "op" and val in "+-":
        sign = -1 if val == "-" else 1
        i += 1
    while True:
        coef = Fraction(sign)
        powers = {}
        expect_factor = True
        while expect_factor:
            kind, val, pos = tokens[i]
            if kind == "num":
                i += 1
                q = rational_from_decimal(val)
                if tokens[i][0] == "op" and tokens[i][1] == "/":
                    i += 1
                    k2, v2, p2 = tokens[i]
                    if k2 != "num":
                        raise PolynomialSyntaxError("expected a number after '/'", p2, text)
                    d = rational_from_decimal(v2)
                    if d == 0:
                        raise PolynomialSyntaxError("zero denominator", p2, text)
                    q = q / d
                    i += 1
                coef *= q
            elif kind == "id":
                i += 1
                e = 1
                if tokens[i][0] == "op" and tokens[i][1] == "^":
                    i += 1
                    k2, v2, p2 = tokens[i]
                    if k2 != "num" or not v2.isdigit() or int(v2) < 1:
                        raise PolynomialSyntaxError("exponent must be a positive integer", p2, text)
                    e = int(v2)
                    i += 1
                powers[val] = powers.get(val, 0) + e
            else:
                raise PolynomialSyntaxError(f"expected a coefficient or identifier, found {val or 'end of input'!r}", pos, text)
            kind, val, pos = tokens[i]
            if kind == "op" and val == "*":
                i += 1
                continue
            expect_factor = False
        terms.append((coef, powers))
        kind, val, pos = tokens[i]
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        raise PolynomialSyntaxError(f"unexpected token {val!r}", pos, text)
    return terms


def parse_polynomial(text, variables=None):
    """Parse ``text`` into a MultiPoly over ``variables``.

    Without ``variables`` the ring is the identifiers present, naturally sorted.
    """
    terms = parse_terms(text)
    if variables is None:
        names = sorted({v for _, pw in terms for v in pw}, key=natural_key)
        variables = tuple(names)
    variables = tuple(variables)
    index = {v: j for j, v in enumerate(variables)}
    out = {}
    n = len(variables)
    for coef, powers in terms:
        exps = [0] * n
        for v, e in powers.items():
            if v not in index:
                raise UnknownIdentifierError(f"unknown identifier {v!r}", text.find(v), text)
            exps[index[v]] += e
        key = tuple(exps)
        out[key] = out.get(key, 0) + coef
    return MultiPoly(variables, out)
