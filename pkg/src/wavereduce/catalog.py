"""Four explicit reductions in four-dimensional Minkowski space.

Built on a frame (a, b, c, d) with p.x the Minkowski contraction:

1. y = a.x, z = d.x                        phi_yy - phi_zz = F
2. y = a.x, z = ((b.x)^2 + (c.x)^2 + (d.x)^2)^(1/2)
                                           phi_yy - phi_zz - (2/z) phi_z = F
3. y = b.x + Phi(a.x + d.x), z = c.x       -phi_zz - phi_yy = F
4. y = ((b.x)^2 + (c.x)^2)^(1/2), z = a.x + d.x
                                           -phi_yy - (1/y) phi_y = F

Entry 4 takes the radicand as (b.x)^2 + (c.x)^2; with (c.x^2) in place of
(c.x)^2 the stated reduced equation does not come out.  Entry 3's Phi is an
arbitrary univariate function written in the variable u; a.x + d.x is null,
so the reduced equation does not depend on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import sympy

from .frames import Frame, standard_frame
from .parser import parse
from .reduction import (
    PROFILE_KEYS,
    AnsatzPair,
    Classification,
    ReducedPDE,
    ReductionProfile,
    ReductionType,
    classify,
    dependence_test,
    profile,
    reduced_equation,
    verify_surface_forms,
)
from .sampling import InconclusiveDomain, SamplePlan, is_zero
from .symbolic import Expression, VariableSpace, substitute, sym

SPACE = VariableSpace(3)
SURFACE = SPACE.with_surface("y", "z", "u")


def _surface(text: str) -> Expression:
    return parse(text, SURFACE)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    build: Callable[[Frame], AnsatzPair]
    expected_forms: tuple[Expression, ...]
    expected_pde: ReducedPDE
    expected_tag: ReductionType
    surface_exclusions: tuple[Expression, ...] = ()
    description: str = ""

    def pair(self, frame: Frame | None = None) -> AnsatzPair:
        return self.build(frame or standard_frame())


def _pde(*coeffs: str) -> ReducedPDE:
    return ReducedPDE(*(_surface(c) for c in coeffs))


def catalog(phi3: Expression | str = "u^2") -> list[CatalogEntry]:
    """The four entries; ``phi3`` is entry 3's arbitrary function of u."""
    if isinstance(phi3, str):
        phi3 = parse(phi3, SURFACE)
    if set(s.name for s in phi3.free_symbols) - {"u"}:
        raise ValueError("entry-3 function must be written in the variable u")

    def dot(frame: Frame, label: str) -> Expression:
        return frame.contract(label, SPACE)

    def e1(frame: Frame) -> AnsatzPair:
        return AnsatzPair(dot(frame, "a"), dot(frame, "d"), SPACE)

    def e2(frame: Frame) -> AnsatzPair:
        rho = sympy.sqrt(dot(frame, "b") ** 2 + dot(frame, "c") ** 2 + dot(frame, "d") ** 2)
        return AnsatzPair(dot(frame, "a"), rho, SPACE, exclusions=(rho,))

    def e3(frame: Frame) -> AnsatzPair:
        null = dot(frame, "a") + dot(frame, "d")
        y = dot(frame, "b") + substitute(phi3, {"u": null})
        return AnsatzPair(y, dot(frame, "c"), SPACE)

    def e4(frame: Frame) -> AnsatzPair:
        rho = sympy.sqrt(dot(frame, "b") ** 2 + dot(frame, "c") ** 2)
        return AnsatzPair(rho, dot(frame, "a") + dot(frame, "d"), SPACE, exclusions=(rho,))

    forms = lambda *texts: tuple(_surface(t) for t in texts)  # noqa: E731
    return [
        CatalogEntry("entry-1", e1, forms("1", "0", "-1", "0", "0"),
                     _pde("1", "0", "-1", "0", "0"), ReductionType.HYPERBOLIC,
                     description="y = ax, z = dx"),
        CatalogEntry("entry-2", e2, forms("1", "0", "-1", "0", "-2/z"),
                     _pde("1", "0", "-1", "0", "-2/z"), ReductionType.HYPERBOLIC,
                     surface_exclusions=(sym("z"),),
                     description="y = ax, z = ((bx)^2 + (cx)^2 + (dx)^2)^(1/2); radial wave equation"),
        CatalogEntry("entry-3", e3, forms("-1", "0", "-1", "0", "0"),
                     _pde("-1", "0", "-1", "0", "0"), ReductionType.ELLIPTIC,
                     description="y = bx + Phi(ax + dx), z = cx"),
        CatalogEntry("entry-4", e4, forms("-1", "0", "0", "-1/y", "0"),
                     _pde("-1", "0", "0", "-1/y", "0"), ReductionType.PARABOLIC,
                     surface_exclusions=(sym("y"),),
                     description="y = ((bx)^2 + (cx)^2)^(1/2), z = ax + dx"),
    ]


@dataclass
class EntryResult:
    name: str
    frame: str
    profile: ReductionProfile | None = None
    classification: Classification | None = None
    reduced: ReducedPDE | None = None
    pde_match: dict = field(default_factory=dict)
    dependence: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def run_entry(entry: CatalogEntry, frame: Frame, plan: SamplePlan) -> EntryResult:
    result = EntryResult(entry.name, frame.name)
    try:
        pair = entry.pair(frame)
        prof = verify_surface_forms(profile(pair), entry.expected_forms, plan)
        result.profile = prof
        for key in PROFILE_KEYS:
            if not prof.verdicts[key].is_zero:
                result.failures.append(f"surface form {key}: {prof.verdicts[key]}")
        for key in PROFILE_KEYS:
            verdict = dependence_test(prof[key], pair, plan)
            result.dependence[key] = verdict
            if not verdict.passed:
                result.failures.append(f"{key} is not a function of (y, z)")
        result.classification = classify(prof, plan)
        if result.classification.tag is not entry.expected_tag:
            result.failures.append(
                f"classified {result.classification.tag.value}, expected {entry.expected_tag.value}"
            )
        if prof.fully_verified:
            result.reduced = reduced_equation(prof)
            surface_plan = plan.excluding(*entry.surface_exclusions)
            for label, got, want in zip(
                ("phi_yy", "phi_yz", "phi_zz", "phi_y", "phi_z"),
                result.reduced.coefficients,
                entry.expected_pde.coefficients,
            ):
                verdict = is_zero(got - want, surface_plan)
                result.pde_match[label] = verdict
                if not verdict.is_zero:
                    result.failures.append(f"reduced coefficient of {label}: {verdict}")
    except InconclusiveDomain as exc:
        result.failures.append(f"inconclusive sampling: {exc}")
    return result


@dataclass
class CatalogReport:
    frame: str
    results: list[EntryResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def run_catalog(
    plan: SamplePlan | None = None,
    frame: Frame | None = None,
    entries: list[CatalogEntry] | None = None,
) -> CatalogReport:
    plan = plan or SamplePlan()
    frame = frame or standard_frame()
    entries = catalog() if entries is None else entries
    results = [run_entry(e, frame, plan) for e in sorted(entries, key=lambda e: e.name)]
    return CatalogReport(frame.name, results)
