"""Command-line entry point: analyze, sweep, stability, grid, verify."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from multistat.elimination import (
    DIVIDES,
    EXACT_MATCH,
    InfeasibleError,
    blind_spots,
    triangularize,
    verify_against_reference,
)
from multistat.exactnum import DecimalParseError, format_decimal, parse_rational
from multistat.model import (
    ModelParseError,
    ModelValidationError,
    StructuralModelError,
    build_steady_state_system,
    load_model,
)
from multistat.paramsweep import decompose_parameter_line, decomposition_report, find_break_points, grid_sample, parse_axis
from multistat.polycore import UniPoly, discriminant
from multistat.realroots import EQUAL, compare, isolate_real_roots
from multistat.reference import applies_to, load_reference, matches_shape
from multistat.stability import classify_all, stability_report
from multistat.steadystate import BlindSpotError, CertificationError, solution_report, solve_at_parameter

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_BLIND_SPOT = 3
EXIT_CERTIFICATION = 4


class ConfigError(ValueError):
    pass


def _parse_sets(items):
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--set expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        name = name.strip()
        if name in out:
            raise ConfigError(f"{name} set twice")
        try:
            q = parse_rational(value.strip())
        except DecimalParseError as exc:
            raise ConfigError(f"bad value for {name}: {exc}") from exc
        if q <= 0:
            raise ConfigError(f"{name} must be positive, got {value.strip()}")
        out[name] = q
    return out


def _attach_reference(model, assignment, t):
    if applies_to(model, assignment):
        return t.with_reference_constraints(load_reference().extra_constraints())
    return t


def _fixed_point_setup(args):
    """Triangular system plus the value for the declared free parameter, if one was set."""
    model = load_model(args.model)
    sets = _parse_sets(args.set)
    declared = [k for k in model.free if k in sets]
    if len(declared) == 1:
        p = declared[0]
        value = sets.pop(p)
        assignment = model.assignment(sets, free=p)
    else:
        assignment = model.assignment(sets)
        value = None
        if assignment.free is not None:
            raise ConfigError(f"{assignment.free} needs a value: add --set {assignment.free}=...")
    t = triangularize(build_steady_state_system(model, assignment))
    return model, assignment, _attach_reference(model, assignment, t), value


def _width(args):
    return parse_rational(args.width) if args.width else Fraction(1, 10**6)


def cmd_analyze(args):
    model, _, t, value = _fixed_point_setup(args)
    sols = solve_at_parameter(t, value, _width(args))
    print(solution_report(sols, model.species, args.digits), end="")
    return EXIT_OK


def cmd_stability(args):
    model, assignment, t, value = _fixed_point_setup(args)
    sols = solve_at_parameter(t, value, _width(args))
    reports = classify_all(model, assignment, sols)
    print(stability_report(reports, sols, model.species, args.digits), end="")
    return EXIT_OK


def cmd_sweep(args):
    model = load_model(args.model)
    sets = _parse_sets(args.set)
    if args.free is None and not [k for k in model.free if k not in sets]:
        raise ConfigError("sweep needs a free parameter: use --free")
    assignment = model.assignment(sets, free=args.free)
    t = triangularize(build_steady_state_system(model, assignment))
    t = _attach_reference(model, assignment, t)
    d = decompose_parameter_line(t)
    print(decomposition_report(d, args.digits), end="")
    spots = blind_spots(t)
    print("blind spots: " + (", ".join(r.approx(args.digits) for r in spots) or "none"))
    return EXIT_OK


def cmd_grid(args):
    model = load_model(args.model)
    if not args.axis or len(args.axis) != 2:
        raise ConfigError("grid needs exactly two --axis options")
    try:
        axes = [parse_axis(a) for a in args.axis]
    except DecimalParseError as exc:
        raise ConfigError(str(exc)) from exc
    sets = _parse_sets(args.set)
    g = grid_sample(model, axes[0], axes[1], sets, jobs=args.jobs)
    text = g.to_csv()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        summary = sys.stdout
    else:
        sys.stdout.write(text)
        summary = sys.stderr
    dist = g.distribution()
    parts = [f"{k}: {dist[k]}" for k in sorted(dist, key=str)]
    print(f"{len(axes[0].values()) * len(axes[1].values())} points; " + ", ".join(parts), file=summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _close(a, q, tol):
    a = a.refine(tol / 10)
    return abs(a.isolation.midpoint - q) <= tol


def _verify_checks(model):
    ref = load_reference()
    assignment = model.assignment(free=ref.free)
    t = triangularize(build_steady_state_system(model, assignment))
    t = t.with_reference_constraints(ref.extra_constraints())
    results = []

    verdict = verify_against_reference(t, ref.eliminated())
    results.append(("eliminated polynomial", verdict in (EXACT_MATCH, DIVIDES), verdict))

    disc = discriminant(t.eliminated)
    try:
        disc.align((ref.free,)).exact_div(ref.break_point_polynomial())
        ok, detail = True, "exact division"
    except ArithmeticError:
        ok, detail = False, "break-point polynomial does not divide the discriminant"
    results.append(("break-point polynomial divides discriminant", ok, detail))

    lo, hi = ref.break_point_interval()
    bp_poly = UniPoly.from_multipoly(ref.break_point_polynomial(), ref.free)
    target = [r for r in isolate_real_roots(bp_poly, (lo, hi))]
    bps = [b for b in find_break_points(decompose_parameter_line(t))]
    ok = len(target) == 1 and len(bps) == 1 and compare(bps[0].location, target[0]) == EQUAL
    detail = ", ".join(f"{b.location.approx()} ({b.count_before} -> {b.count_after})" for b in bps) or "none"
    results.append(("break point", ok, detail))

    tol = ref.tolerance("points_absolute")
    spots = blind_spots(t)
    want = ref.blind_spots()
    ok = len(spots) == len(want) and all(_close(a, q, tol) for a, q in zip(spots, want))
    results.append(("blind spots", ok, ", ".join(r.approx() for r in spots)))

    rel = ref.tolerance("solutions_relative")
    for value in ref.solution_values():
        rows = ref.solutions(value)
        try:
            sols = solve_at_parameter(t, value)
        except (BlindSpotError, CertificationError) as exc:
            results.append((f"solutions at {ref.free}={value}", False, str(exc)))
            continue
        bad = []
        if len(sols) != len(rows):
            bad.append(f"{len(sols)} solutions, expected {len(rows)}")
        for i, (s, row) in enumerate(zip(sols, rows), 1):
            s = s.refined(min(abs(q) for q in row) * rel / 10)
            for sp, q in zip(model.species, row):
                mid = s.coordinates[sp].midpoint
                if abs(mid - q) > rel * abs(q):
                    bad.append(f"x({i}).{sp} = {format_decimal(mid, 8)}, expected {format_decimal(q, 8)}")
        results.append((f"solutions at {ref.free}={value}", not bad, "; ".join(bad) or f"{len(sols)} solution(s)"))
    return results


def cmd_verify(args):
    model = load_model(args.model)
    if not matches_shape(model):
        print(f"skipped: no reference data for model {model.name or args.model}")
        return EXIT_OK
    try:
        results = _verify_checks(model)
    except (InfeasibleError, ArithmeticError, ValueError) as exc:
        results = [("pipeline", False, str(exc))]
    failed = 0
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failed += not ok
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_MISMATCH


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="multistat", description="Exact counting and stability of positive steady states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, free=False):
        p.add_argument("model", help="model file (the bare name mapk.model selects the bundled model)")
        p.add_argument("--set", action="append", metavar="NAME=VALUE", help="bind a parameter (repeatable)")
        if free:
            p.add_argument("--free", metavar="NAME", help="parameter left symbolic")
        p.add_argument("--digits", type=int, default=6, help="significant digits in reports")

    p = sub.add_parser("analyze", help="positive steady states at fixed parameter values")
    common(p)
    p.add_argument("--width", help="target coordinate interval width (default 1e-6)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("stability", help="stability of each steady state")
    common(p)
    p.add_argument("--width", help="target coordinate interval width (default 1e-6)")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("sweep", help="constant-count cells along the free parameter")
    common(p, free=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("grid", help="exact counts on a two-parameter grid, as CSV")
    common(p)
    p.add_argument("--axis", action="append", metavar="NAME=LO:HI:STEPS", help="grid axis (give two)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $MULTISTAT_JOBS or CPU count)")
    p.add_argument("-o", "--output", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("verify", help="regression against the bundled reference values")
    p.add_argument("model")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BlindSpotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLIND_SPOT
    except CertificationError as exc:
        print(f"error: certification failed: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except (ConfigError, ModelParseError, ModelValidationError, StructuralModelError, InfeasibleError,
            DecimalParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
