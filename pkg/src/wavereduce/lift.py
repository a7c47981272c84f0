"""Lift solutions of a reduced equation back to box u = F(u)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy

from .evaluate import FLOAT_PRECISION_BITS, to_mpf
from .reduction import AnsatzPair, ReducedPDE
from .sampling import InconclusiveDomain, SamplePlan, ZeroVerdict, is_zero, sample
from .symbolic import Expression, substitute, variables


@dataclass(frozen=True)
class LiftCase:
    pair: AnsatzPair
    reduced: ReducedPDE
    phi: Expression
    F: Expression = sympy.Integer(0)
    plan: SamplePlan = field(default_factory=lambda: SamplePlan(count=100, tolerance=1e-10))
    surface_exclusions: tuple[Expression, ...] = ()

    def __post_init__(self) -> None:
        extra = set(variables(self.phi)) - set(self.pair.names)
        if extra:
            raise ValueError(f"phi may only depend on {self.pair.names}, found {sorted(extra)}")
        if set(variables(self.F)) - {"u"}:
            raise ValueError("F must be an expression in u")


@dataclass
class LiftResult:
    status: str  # "pass", "lift-failed" or "precondition-failed"
    precondition: ZeroVerdict | None
    max_residual: object = None
    mean_residual: object = None
    exact: bool = False
    samples: int = 0
    witness: dict | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def lift_and_check(case: LiftCase) -> LiftResult:
    """Check phi against the reduced equation, then box u - F(u) for u = phi(y(x), z(x)).

    The residual is evaluated from the raw (unsimplified) second derivatives so
    that the numbers come from the composition itself, not from a rewritten form.
    """
    plan = case.plan
    F_of = lambda e: substitute(case.F, {"u": e})  # noqa: E731
    surface_plan = plan.excluding(*case.surface_exclusions)
    try:
        pre = is_zero(case.reduced.apply(case.phi) - F_of(case.phi), surface_plan)
    except InconclusiveDomain as exc:
        return LiftResult("precondition-failed", None, note=str(exc))
    if not pre.is_zero:
        return LiftResult("precondition-failed", pre, note="phi does not solve the reduced equation")

    space = case.pair.space
    u = case.pair.lift(case.phi)
    box = sympy.Add(*(space.metric(mu) * sympy.diff(u, x, 2) for mu, x in enumerate(space.coords)))
    residual = box - F_of(u)
    try:
        samples = sample([residual], case.pair.plan(plan), names=space.spacetime)
    except InconclusiveDomain as exc:
        return LiftResult("lift-failed", pre, note=str(exc))
    values = [s.values[0] for s in samples]
    exact = all(isinstance(v, Fraction) for v in values)
    if exact:
        mags = [abs(v) for v in values]
        worst = max(mags)
        mean = sum(mags) / len(mags)
    else:
        with mpmath.workprec(FLOAT_PRECISION_BITS):
            mags = [abs(to_mpf(v)) for v in values]
            worst = max(mags)
            mean = mpmath.fsum(mags) / len(mags)
    idx = max(range(len(values)), key=lambda i: to_mpf(abs(values[i])))
    passed = worst == 0 if exact else worst < plan.tolerance
    return LiftResult(
        "pass" if passed else "lift-failed",
        pre,
        worst,
        mean,
        exact,
        len(values),
        None if passed else samples[idx].point,
    )
