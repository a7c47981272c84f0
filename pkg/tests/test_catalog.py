import dataclasses
import time

import pytest
import sympy

from wavereduce.catalog import SURFACE, catalog, run_catalog, run_entry
from wavereduce.frames import boosted_frame, standard_frame
from wavereduce.parser import parse
from wavereduce.reduction import ReductionType
from wavereduce.sampling import SamplePlan

EXPECTED = {
    "entry-1": ("phi_yy - phi_zz = F(phi)", ReductionType.HYPERBOLIC),
    "entry-2": ("phi_yy - phi_zz - (2/z)*phi_z = F(phi)", ReductionType.HYPERBOLIC),
    "entry-3": ("-phi_yy - phi_zz = F(phi)", ReductionType.ELLIPTIC),
    "entry-4": ("-phi_yy - (1/y)*phi_y = F(phi)", ReductionType.PARABOLIC),
}


@pytest.mark.parametrize("frame", [standard_frame(), boosted_frame()], ids=["standard", "boosted"])
def test_all_entries_pass(frame):
    rep = run_catalog(SamplePlan(), frame)
    assert rep.passed, [(r.name, r.failures) for r in rep.results]
    for r in rep.results:
        text, tag = EXPECTED[r.name]
        assert str(r.reduced) == text
        assert r.classification.tag is tag
        assert all(d.passed for d in r.dependence.values())


def test_verdicts_are_frame_independent():
    a = run_catalog(SamplePlan(), standard_frame())
    b = run_catalog(SamplePlan(), boosted_frame())
    for x, y in zip(a.results, b.results):
        assert x.name == y.name and x.passed == y.passed
        assert x.classification.tag is y.classification.tag
        assert str(x.reduced) == str(y.reduced)


@pytest.mark.parametrize("phi", ["u^2", "u^3", "sin(u)"])
@pytest.mark.parametrize("frame", [standard_frame(), boosted_frame()], ids=["standard", "boosted"])
def test_entry3_is_independent_of_its_function(phi, frame):
    entry = catalog(phi)[2]
    result = run_entry(entry, frame, SamplePlan())
    assert result.passed, result.failures
    assert str(result.reduced) == EXPECTED["entry-3"][0]


def test_entry3_function_must_be_univariate():
    with pytest.raises(ValueError):
        catalog("y*u")


def test_wrong_expectation_names_the_entry():
    entries = catalog()
    forms = list(entries[0].expected_forms)
    forms[2] = sympy.Integer(1)
    entries[0] = dataclasses.replace(entries[0], expected_forms=tuple(forms))
    rep = run_catalog(SamplePlan(), standard_frame(), entries)
    assert not rep.passed
    failing = [r for r in rep.results if not r.passed]
    assert [r.name for r in failing] == ["entry-1"]
    assert any("surface form s" in f for f in failing[0].failures)
    assert failing[0].profile.verdicts["s"].witness is not None


def test_wrong_reduced_equation_is_caught():
    entries = catalog()
    bad = dataclasses.replace(entries[1].expected_pde, phi_z=parse("2/z", SURFACE))
    entries[1] = dataclasses.replace(entries[1], expected_pde=bad)
    rep = run_catalog(SamplePlan(), standard_frame(), entries)
    failing = [r for r in rep.results if not r.passed]
    assert [r.name for r in failing] == ["entry-2"]
    assert any("phi_z" in f for f in failing[0].failures)


def test_catalog_runtime_budget():
    start = time.perf_counter()
    for frame in (standard_frame(), boosted_frame()):
        assert run_catalog(SamplePlan(), frame).passed
    assert time.perf_counter() - start < 5.0
