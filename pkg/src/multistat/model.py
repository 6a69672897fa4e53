"""Reaction-network models: parsing, parameter assignment and steady-state systems.

Model files are line oriented::

    species x1 x2
    param k1 = 0.02
    param k3 free
    ode x1 = k1*x2 - k1*x1
    conservation x1 + x2 = k3
    eliminate x2

``dx1 = ...`` is accepted as shorthand for ``ode x1 = ...``; without a
``species`` line the species are the ODE targets in file order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from multistat.exactnum import DecimalParseError, format_decimal, parse_rational
from multistat.polycore import MultiPoly, PolynomialSyntaxError, parse_polynomial

FIXTURE_NAME = "mapk.model"


class ModelParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class ModelValidationError(ValueError):
    pass


class StructuralModelError(ValueError):
    pass


@dataclass(frozen=True)
class ConservationLaw:
    form: MultiPoly  # linear in species, coefficients +1
    parameter: str

    def species(self):
        return self.form.used_variables()


@dataclass(frozen=True)
class ReactionModel:
    species: tuple
    parameters: tuple
    values: dict  # parameter -> Fraction for parameters with a default value
    free: tuple  # parameters declared free in the file
    odes: dict  # species -> MultiPoly over species + parameters
    conservation: tuple = ()
    eliminate: tuple = ()
    name: str = ""

    @property
    def ring(self):
        return self.species + self.parameters

    def __eq__(self, other):
        if not isinstance(other, ReactionModel):
            return NotImplemented
        return (self.species == other.species and self.parameters == other.parameters
                and self.values == other.values and self.free == other.free
                and self.odes == other.odes and self.conservation == other.conservation
                and self.eliminate == other.eliminate)

    __hash__ = None

    def assignment(self, overrides=None, free=None):
        """Default values with ``overrides`` applied and at most one free parameter.

        If ``free`` is None, a file-declared free parameter stays free unless
        it is overridden.
        """
        overrides = dict(overrides or {})
        for k in overrides:
            if k not in self.parameters:
                raise ModelValidationError(f"unknown parameter {k!r}")
        bindings = dict(self.values)
        bindings.update({k: parse_rational(v) if isinstance(v, str) else Fraction(v) for k, v in overrides.items()})
        if free is None:
            declared = [k for k in self.free if k not in overrides]
            if len(declared) > 1:
                raise ModelValidationError(f"more than one free parameter: {declared}")
            free = declared[0] if declared else None
        elif free not in self.parameters:
            raise ModelValidationError(f"unknown parameter {free!r}")
        elif free in overrides:
            raise ModelValidationError(f"parameter {free!r} cannot be both free and set")
        if free is not None:
            bindings.pop(free, None)
        missing = [k for k in self.parameters if k != free and k not in bindings]
        if missing:
            raise ModelValidationError(f"parameters without a value: {', '.join(missing)}")
        return ParameterAssignment(bindings, free)


@dataclass(frozen=True)
class ParameterAssignment:
    bindings: dict
    free: str | None = None

    def __post_init__(self):
        for k, v in self.bindings.items():
            if Fraction(v) <= 0:
                raise ModelValidationError(f"parameter {k} must be positive, got {v}")
        if self.free is not None and self.free in self.bindings:
            raise ModelValidationError(f"free parameter {self.free} is also bound")

    def with_value(self, param, value):
        b = dict(self.bindings)
        b[param] = Fraction(value)
        free = None if param == self.free else self.free
        return ParameterAssignment(b, free)


@dataclass(frozen=True)
class PolynomialSystem:
    equations: tuple  # MultiPoly, each constrained to be zero
    positive_variables: tuple
    variables: tuple  # species followed by the free parameter, if any
    species: tuple
    free: str | None = None
    labels: tuple = field(default=())

    def __len__(self):
        return len(self.equations)


# ---------------------------------------------------------------------------
# parsing

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


def _names(tokens, lineno, what):
    for t in tokens:
        if not _IDENT.match(t):
            raise ModelParseError(f"invalid {what} name {t!r}", lineno)
    return tokens


def _poly(text, ring, lineno):
    try:
        return parse_polynomial(text, ring)
    except PolynomialSyntaxError as e:
        raise ModelParseError(str(e), lineno) from None
    except DecimalParseError as e:
        raise ModelParseError(str(e), lineno) from None


def parse_model(text, name=""):
    species = None
    params = []
    values = {}
    free = []
    ode_src = []
    cons_src = []
    eliminate = ()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "species":
            if species is not None:
                raise ModelParseError("duplicate species declaration", lineno)
            species = _names(rest.split(), lineno, "species")
            if len(set(species)) != len(species):
                raise ModelParseError("repeated species name", lineno)
        elif head == "param":
            lhs, eq, rhs = rest.partition("=")
            lhs = lhs.strip()
            if not eq:
                parts = rest.split()
                if len(parts) == 2 and parts[1] == "free":
                    lhs = parts[0]
                    _names([lhs], lineno, "parameter")
                    if lhs in params:
                        raise ModelParseError(f"parameter {lhs} declared twice", lineno)
                    params.append(lhs)
                    free.append(lhs)
                    continue
                raise ModelParseError("expected 'param NAME = VALUE' or 'param NAME free'", lineno)
            _names([lhs], lineno, "parameter")
            if lhs in params:
                raise ModelParseError(f"parameter {lhs} declared twice", lineno)
            try:
                v = parse_rational(rhs.strip())
            except (DecimalParseError, ValueError) as e:
                raise ModelParseError(str(e), lineno) from None
            params.append(lhs)
            values[lhs] = v
        elif head == "ode" or (head.startswith("d") and "=" in line and not head == "conservation"):
            if head == "ode":
                lhs, eq, rhs = rest.partition("=")
            else:
                lhs, eq, rhs = line[1:].partition("=")
            if not eq:
                raise ModelParseError("expected 'ode SPECIES = POLYNOMIAL'", lineno)
            ode_src.append((lhs.strip(), rhs.strip(), lineno))
        elif head == "conservation":
            lhs, eq, rhs = rest.rpartition("=")
            if not eq:
                raise ModelParseError("expected 'conservation FORM = PARAMETER'", lineno)
            cons_src.append((lhs.strip(), rhs.strip(), lineno))
        elif head == "eliminate":
            eliminate = tuple(_names(rest.split(), lineno, "species"))
        else:
            raise ModelParseError(f"unknown directive {head!r}", lineno)

    if species is None:
        species = [s for s, _, _ in ode_src]
    species = tuple(species)
    params = tuple(params)
    clash = set(species) & set(params)
    if clash:
        raise ModelParseError(f"names used as both species and parameter: {sorted(clash)}")
    ring = species + params
    odes = {}
    for s, rhs, lineno in ode_src:
        if s not in species:
            raise ModelParseError(f"ode for undeclared species {s!r}", lineno)
        if s in odes:
            raise ModelParseError(f"second ode for {s}", lineno)
        odes[s] = _poly(rhs, ring, lineno)
    missing = [s for s in species if s not in odes]
    if missing:
        raise ModelParseError(f"no ode for species {', '.join(missing)}")
    laws = []
    for form_text, k, lineno in cons_src:
        if k not in params:
            raise ModelParseError(f"conservation total {k!r} is not a declared parameter", lineno)
        form = _poly(form_text, ring, lineno)
        for exps, c in form.terms.items():
            used = [v for v, e in zip(ring, exps) if e]
            if c != 1 or len(used) != 1 or sum(exps) != 1 or used[0] not in species:
                raise ModelParseError("conservation form must be a sum of distinct species with coefficient 1", lineno)
        laws.append(ConservationLaw(form, k))
    for s in eliminate:
        if s not in species:
            raise ModelParseError(f"eliminate lists undeclared species {s!r}")
    model = ReactionModel(species, params, values, tuple(free), odes, tuple(laws), eliminate, name)
    bad = [law.parameter for law in laws if not conservation_derivative(model, law).is_zero()]
    if bad:
        raise ModelParseError(f"conservation laws not preserved by the odes: {', '.join(bad)}")
    return model


def load_model(path):
    """Read a model file; the bare name ``mapk.model`` falls back to the bundled fixture."""
    p = Path(path)
    if p.exists():
        return parse_model(p.read_text(), name=p.name)
    if p.name == FIXTURE_NAME and str(path) == FIXTURE_NAME:
        return load_fixture()
    raise FileNotFoundError(path)


def fixture_text():
    return resources.files("multistat.data").joinpath(FIXTURE_NAME).read_text()


def load_fixture():
    return parse_model(fixture_text(), name=FIXTURE_NAME)


def render(model):
    """Model file text; ``parse_model(render(m)) == m``."""
    out = ["species " + " ".join(model.species)]
    for k in model.parameters:
        if k in model.values:
            v = model.values[k]
            out.append(f"param {k} = {_exact_text(v)}")
        else:
            out.append(f"param {k} free")
    for s in model.species:
        out.append(f"ode {s} = {model.odes[s].to_text()}")
    for law in model.conservation:
        out.append(f"conservation {law.form.to_text()} = {law.parameter}")
    if model.eliminate:
        out.append("eliminate " + " ".join(model.eliminate))
    return "\n".join(out) + "\n"


def _exact_text(v):
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    # decimal when the value has a terminating expansion, else a/b
    d = v.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        s = format_decimal(v, 60)
        if parse_rational(s) == v:
            return s
    return f"{v.numerator}/{v.denominator}"


# ---------------------------------------------------------------------------
# checks and systems


def conservation_derivative(model, law):
    """Time derivative of a conservation form: sum of the ODEs of its species."""
    total = MultiPoly.zero(model.ring)
    for s in law.species():
        total = total + model.odes[s]
    return total


def build_steady_state_system(model, assignment):
    free = assignment.free
    missing = [k for k in model.parameters if k != free and k not in assignment.bindings]
    if missing:
        raise ModelValidationError(f"parameters without a value: {', '.join(missing)}")
    variables = model.species + ((free,) if free else ())
    values = {k: v for k, v in assignment.bindings.items() if k in model.parameters}
    equations = []
    labels = []
    for s in model.species:
        equations.append(model.odes[s].substitute_values(values).align(variables))
        labels.append(f"ode {s}")
    for law in model.conservation:
        k = law.parameter
        total = MultiPoly.var(variables, k) if k == free else MultiPoly.constant(variables, values[k])
        equations.append(law.form.align(model.ring).align(variables) - total)
        labels.append(f"conservation {k}")
    positive = model.species + ((free,) if free else ())
    return PolynomialSystem(tuple(equations), positive, variables, model.species, free, tuple(labels))


def _solvable(model, chosen):
    """Conservation laws, one per chosen species, forming an invertible system (or None)."""
    laws = model.conservation
    options = [[i for i, law in enumerate(laws) if s in law.species()] for s in chosen]
    for combo in itertools.product(*options):
        if len(set(combo)) != len(combo):
            continue
        matrix = [[Fraction(1 if s in laws[i].species() else 0) for s in chosen] for i in combo]
        if _det(matrix) != 0:
            return combo
    return None


def _det(m):
    m = [list(r) for r in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for j in range(c, n):
                m[r][j] -= f * m[c][j]
    return det


def conservation_reduce(model, eliminate=None):
    """ODEs of the remaining species with ``eliminate`` expressed through the laws.

    Returns ``(reduced, expressions)``: the reduced right-hand sides keyed by
    remaining species, and the linear expressions substituted for the
    eliminated species.  Both live in the ring of remaining species plus
    parameters.
    """
    chosen = tuple(model.eliminate if eliminate is None else eliminate)
    for s in chosen:
        if s not in model.species:
            raise StructuralModelError(f"unknown species {s!r}")
    combo = _solvable(model, chosen) if chosen else ()
    if combo is None:
        valid = [c for c in itertools.combinations(model.species, len(chosen)) if _solvable(model, c)]
        hint = ", ".join("{" + ", ".join(c) + "}" for c in valid[:8])
        raise StructuralModelError(f"cannot solve {list(chosen)} from distinct conservation laws; valid choices include {hint}")
    keep = tuple(s for s in model.species if s not in chosen)
    ring = keep + model.parameters
    full = model.ring
    # rows: chosen-species coefficients | remaining linear part, Gauss-Jordan over Q
    rows = []
    for i in combo:
        law = model.conservation[i]
        coeffs = [Fraction(1 if s in law.species() else 0) for s in chosen]
        rhs = MultiPoly.var(full, law.parameter)
        for s in law.species():
            if s not in chosen:
                rhs = rhs - MultiPoly.var(full, s)
        rows.append([coeffs, rhs])
    n = len(chosen)
    for c in range(n):
        piv = next(r for r in range(c, n) if rows[r][0][c] != 0)
        rows[c], rows[piv] = rows[piv], rows[c]
        p = rows[c][0][c]
        rows[c] = [[x / p for x in rows[c][0]], rows[c][1] * (1 / p)]
        for r in range(n):
            if r != c and rows[r][0][c] != 0:
                f = rows[r][0][c]
                rows[r] = [[a - f * b for a, b in zip(rows[r][0], rows[c][0])], rows[r][1] - rows[c][1] * f]
    expressions = {s: rows[i][1] for i, s in enumerate(chosen)}
    reduced = {}
    for s in keep:
        rhs = model.odes[s]
        for v, e in expressions.items():
            rhs = rhs.compose(v, e)
        reduced[s] = rhs.align(ring)
    return reduced, {s: e.align(ring) for s, e in expressions.items()}
