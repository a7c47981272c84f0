import pytest

from wavereduce.catalog import SURFACE, catalog
from wavereduce.lift import LiftCase, lift_and_check
from wavereduce.parser import parse
from wavereduce.reduction import ReducedPDE
from wavereduce.symbolic import VariableSpace

S = lambda t: parse(t, SURFACE)  # noqa: E731
ENTRIES = {e.name: e for e in catalog()}


def case(name, phi, F="0", plan=None):
    e = ENTRIES[name]
    kwargs = {"plan": plan} if plan else {}
    return LiftCase(e.pair(), e.expected_pde, S(phi), S(F), surface_exclusions=e.surface_exclusions, **kwargs)


def test_polynomial_lift_is_exact():
    res = lift_and_check(case("entry-1", "y^2 + z^2"))
    assert res.passed and res.exact
    assert res.max_residual == 0 and res.samples == 100


def test_travelling_wave_lift():
    res = lift_and_check(case("entry-1", "sin(y + z)"))
    assert res.passed and res.max_residual < 1e-10


def test_radial_lift():
    res = lift_and_check(case("entry-2", "(y - z)/z"))
    assert res.passed and res.max_residual < 1e-10
    assert res.mean_residual <= res.max_residual


@pytest.mark.parametrize("phi", ["exp(y - z)/z", "(y + z)^3/z", "cos(y - z)/z"])
def test_more_radial_solutions(phi):
    assert lift_and_check(case("entry-2", phi)).passed


def test_nonlinear_right_side():
    # sin(y) solves phi_yy - phi_zz = -phi
    res = lift_and_check(case("entry-1", "sin(y)", F="-u"))
    assert res.passed


def test_precondition_failure_is_distinct():
    res = lift_and_check(case("entry-1", "y^3"))
    assert res.status == "precondition-failed"
    assert not res.passed and res.max_residual is None


def test_lift_failure_is_reported_with_witness():
    # deliberately wrong reduced equation: phi = y^2 + z^2 "solves" phi_yy + phi_zz = 4
    e = ENTRIES["entry-1"]
    wrong = ReducedPDE(*(S(t) for t in ("1", "0", "1", "0", "0")))
    res = lift_and_check(LiftCase(e.pair(), wrong, S("y^2 - z^2"), S("0")))
    assert res.status == "lift-failed"
    assert res.witness is not None and res.max_residual == 4


def test_phi_variables_are_checked():
    e = ENTRIES["entry-1"]
    with pytest.raises(ValueError):
        LiftCase(e.pair(), e.expected_pde, parse("x1 + y", VariableSpace(3)))
    with pytest.raises(ValueError):
        LiftCase(e.pair(), e.expected_pde, S("y"), S("y"))
