import pytest
import sympy

from wavereduce.frames import boost_bindings
from wavereduce.parser import parse
from wavereduce.reduction import (
    AnsatzPair,
    ReducedPDE,
    ReductionType,
    UnverifiedProfile,
    classify,
    dependence_test,
    profile,
    reduced_equation,
    reduction_identity_residual,
    verify_surface_forms,
)
from wavereduce.sampling import SamplePlan, ZeroKind, is_zero
from wavereduce.symbolic import VariableSpace, sym

S3 = VariableSpace(3)
P = lambda text: parse(text, S3)  # noqa: E731
Y = lambda text: parse(text, S3)  # surface text uses y, z  # noqa: E731
R3 = "sqrt(x1^2 + x2^2 + x3^2)"
R2 = "sqrt(x1^2 + x2^2)"


def pair(y, z, exclude=()):
    return AnsatzPair(P(y), P(z), S3, exclusions=tuple(P(e) for e in exclude))


def test_plane_pair_profile():
    p = profile(pair("x0", "x3"))
    assert (p.r, p.q, p.s, p.R, p.S) == (1, 0, -1, 0, 0)


def test_radial_pair_profile():
    pr = pair("x0", R3, [R3])
    p = verify_surface_forms(profile(pr), [Y(t) for t in ("1", "0", "-1", "0", "-2/z")])
    assert p.fully_verified
    assert str(reduced_equation(p)) == "phi_yy - phi_zz - (2/z)*phi_z = F(phi)"


def test_cylindrical_null_profile():
    pr = pair(R2, "x0 + x3", [R2])
    forms = [Y(t) for t in ("-1", "0", "0", "-1/y", "0")]
    p = verify_surface_forms(profile(pr), forms)
    assert p.fully_verified
    assert classify(p).tag is ReductionType.PARABOLIC
    assert str(reduced_equation(p)) == "-phi_yy - (1/y)*phi_y = F(phi)"


def test_wrong_surface_form_is_reported():
    p = verify_surface_forms(profile(pair("x0", "x3")), {"s": sympy.Integer(1)})
    assert p.verdicts["s"].kind is ZeroKind.NONZERO
    assert p.failures() == ["s"]
    with pytest.raises(UnverifiedProfile):
        reduced_equation(p)


def test_surface_form_must_use_pair_names():
    with pytest.raises(ValueError):
        verify_surface_forms(profile(pair("x0", "x3")), {"r": sym("x1")})


def test_pair_validation():
    with pytest.raises(ValueError):
        AnsatzPair(P("1"), P("2"), S3)
    with pytest.raises(ValueError):
        AnsatzPair(P("y"), P("x0"), S3)


def test_dependence_examples():
    pr = pair("x1", "x2")
    assert dependence_test(sympy.Integer(5), pr).passed
    bad = dependence_test(P("x3"), pr)
    assert not bad.passed and bad.witness is not None
    radial = pair("x0", R3, [R3])
    assert dependence_test(profile(radial).S, radial).passed


def test_classification_examples():
    assert classify(profile(pair("x0", "x3"))).tag is ReductionType.HYPERBOLIC
    null = classify(profile(pair("x0 + x3", "x0 - x3")))
    assert null.tag is ReductionType.HYPERBOLIC
    assert null.discriminant_min == null.discriminant_max == -4
    ell = classify(profile(pair("x1 + (x0 + x3)^2", "x2")))
    assert ell.tag is ReductionType.ELLIPTIC and ell.discriminant_min == 1


def test_first_order_pair():
    c = classify(profile(pair("x0 + x3", "(x0 + x3)^2")))
    assert c.tag is ReductionType.FIRST_ORDER
    assert set(c.signs) == {"d"}


def test_mixed_signs_are_reported_honestly():
    c = classify(profile(pair("x0*x1", "x2")))
    assert c.tag is ReductionType.MIXED
    assert "+" in c.signs and "-" in c.signs


SWAP_CASES = [("x0", "x3"), ("x0", R3), (R2, "x0 + x3"), ("x1 + (x0 + x3)^2", "x2"), ("x0 + x3", "x0 - x3")]


@pytest.mark.parametrize("y, z", SWAP_CASES)
def test_classification_is_swap_invariant(y, z):
    ex = [R3, R2]
    a = classify(profile(pair(y, z, [e for e in ex if e in (y, z)])))
    b = classify(profile(pair(z, y, [e for e in ex if e in (y, z)])))
    assert a.tag is b.tag and a.signs == b.signs


@pytest.mark.parametrize(
    "y, z, forms, exclude",
    [
        ("x0", R3, ("1", "0", "-1", "0", "-2/z"), [R3]),
        (R2, "x0 + x3", ("-1", "0", "0", "-1/y", "0"), [R2]),
        ("x1 + (x0 + x3)^3", "x2", ("-1", "0", "-1", "0", "0"), []),
    ],
)
def test_surface_forms_survive_a_boost(y, z, forms, exclude):
    base = pair(y, z, exclude)
    boosted = base.transformed(boost_bindings(S3))
    assert boosted.y != base.y or boosted.z != base.z
    p = verify_surface_forms(profile(boosted), [Y(t) for t in forms])
    assert p.fully_verified


@pytest.mark.parametrize("phi", ["y^2*z - z^3", "sin(y)*z", "exp(y - z) + y*z^2"])
def test_reduction_identity(phi):
    pr = pair("x0", R3, [R3])
    p = verify_surface_forms(profile(pr), [Y(t) for t in ("1", "0", "-1", "0", "-2/z")])
    assert is_zero(reduction_identity_residual(p, Y(phi)), pr.plan(SamplePlan())).is_zero


def test_reduced_pde_apply():
    pde = ReducedPDE(*(Y(t) for t in ("1", "0", "-1", "0", "-2/z")))
    assert is_zero(pde.apply(Y("(y - z)/z")), SamplePlan().excluding(sym("z"))).is_zero
