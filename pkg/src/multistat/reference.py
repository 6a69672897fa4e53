"""Published reference values for the bundled MAPK model, kept as data."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from multistat.exactnum import parse_rational
from multistat.polycore import UniPoly, parse_polynomial

REFERENCE_NAME = "mapk_reference.json"


@dataclass(frozen=True)
class Reference:
    raw: dict

    @property
    def free(self):
        return self.raw["free"]

    @property
    def main(self):
        return self.raw["main"]

    @property
    def bindings(self):
        return {k: parse_rational(v) for k, v in self.raw["bindings"].items()}

    def eliminated(self):
        """The published degree-6 polynomial in the main variable."""
        p = parse_polynomial(self.raw["eliminated"], (self.main, self.free))
        return UniPoly.from_multipoly(p, self.main)

    def break_point_polynomial(self):
        return parse_polynomial(self.raw["break_point_polynomial"], (self.free,))

    def break_point_interval(self):
        lo, hi = self.raw["break_point_interval"]
        return parse_rational(lo), parse_rational(hi)

    def extra_constraints(self):
        return [parse_polynomial(t, (self.free,)) for t in self.raw["extra_constraints"]]

    def all_constraints(self):
        """Break-point polynomial plus the two extra inequations."""
        return [self.break_point_polynomial()] + self.extra_constraints()

    def x2_formula(self):
        ring = (self.main, self.free)
        return (parse_polynomial(self.raw["x2_numerator"], ring), parse_polynomial(self.raw["x2_denominator"], ring))

    def blind_spots(self):
        return [parse_rational(v) for v in self.raw["blind_spots"]]

    def critical_points(self):
        return [parse_rational(v) for v in self.raw["critical_points"]]

    def solutions(self, value):
        """Published coordinate rows for a parameter value, as exact decimals."""
        rows = self.raw["solutions"].get(str(value), [])
        return [[parse_rational(v) for v in row] for row in rows]

    def solution_values(self):
        return [Fraction(k) for k in self.raw["solutions"]]

    def repeated(self):
        out = []
        for item in self.raw["repeated"]:
            out.append(({k: parse_rational(v) for k, v in item["set"].items()}, item["free"],
                        [parse_rational(v) for v in item["break_points"]]))
        return out

    def stability(self, value):
        return self.raw["stability"].get(str(value))

    def tolerance(self, key):
        return parse_rational(self.raw["tolerance"][key])


@lru_cache(maxsize=None)
def load_reference():
    text = resources.files("multistat.data").joinpath(REFERENCE_NAME).read_text()
    return Reference(json.loads(text))


def applies_to(model, assignment, reference=None):
    """True when ``model``/``assignment`` is the configuration the reference describes."""
    from multistat.model import load_fixture

    ref = reference or load_reference()
    if model != load_fixture():
        return False
    if assignment.free != ref.free:
        return False
    fixture = load_fixture()
    for k, v in fixture.values.items():
        want = ref.bindings.get(k, v)
        if assignment.bindings.get(k) != want:
            return False
    return True


def matches_shape(model):
    """Same species and parameter names as the bundled model (values may differ)."""
    from multistat.model import load_fixture

    fixture = load_fixture()
    return model.species == fixture.species and model.parameters == fixture.parameters
