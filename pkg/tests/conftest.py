from fractions import Fraction

import pytest

from multistat.elimination import triangularize
from multistat.model import build_steady_state_system, load_fixture
from multistat.reference import load_reference
from multistat.steadystate import solve_at_parameter


@pytest.fixture(scope="session")
def model():
    return load_fixture()


@pytest.fixture(scope="session")
def reference():
    return load_reference()


@pytest.fixture(scope="session")
def free_system(model):
    """Steady-state system with k17=100, k18=50 and k19 symbolic."""
    return build_steady_state_system(model, model.assignment(free="k19"))


@pytest.fixture(scope="session")
def tri(free_system, reference):
    t = triangularize(free_system)
    return t.with_reference_constraints(reference.extra_constraints())


@pytest.fixture(scope="session")
def sols200(tri):
    return solve_at_parameter(tri, Fraction(200))


@pytest.fixture(scope="session")
def sols500(tri):
    return solve_at_parameter(tri, Fraction(500))


@pytest.fixture(scope="session")
def system500(model):
    return build_steady_state_system(model, model.assignment({"k19": 500}))


@pytest.fixture(scope="session")
def filter500(tri, sols500, system500):
    """Filter result, candidate lists and filter runtime at k19=500 (three exact values per coordinate)."""
    from multistat.steadystate import candidate_lists, candidate_product_filter

    import time

    cands = candidate_lists(sols500.solutions, tri)
    start = time.perf_counter()
    out = candidate_product_filter(system500, cands)
    return out, cands, time.perf_counter() - start


@pytest.fixture(scope="session")
def reports200(model, sols200):
    from multistat.stability import classify_all

    return classify_all(model, model.assignment(free="k19"), sols200)


@pytest.fixture(scope="session")
def reports500(model, sols500):
    from multistat.stability import classify_all

    return classify_all(model, model.assignment(free="k19"), sols500)


@pytest.fixture(scope="session")
def decomposition(tri):
    from multistat.paramsweep import decompose_parameter_line

    return decompose_parameter_line(tri)


_REANALYZED = {}


@pytest.fixture(scope="session")
def reanalyzed(model):
    """Cached ``reanalyze_with`` keyed by (bindings, free)."""
    from multistat.paramsweep import reanalyze_with

    def run(rebind, free):
        key = (tuple(sorted(rebind.items())), free)
        if key not in _REANALYZED:
            _REANALYZED[key] = reanalyze_with(model, rebind, free)
        return _REANALYZED[key]

    return run
