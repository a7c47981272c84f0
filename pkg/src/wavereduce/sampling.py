"""Seeded sampling and the symbolic-then-sampled zero test."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import sympy

from .evaluate import EvaluationError, Evaluator, to_mpf
from .symbolic import Expression, simplify, variables

DEFAULT_SEED = 1729
# Sample coordinates are multiples of 1/GRID inside the box.
GRID = 1000


class InconclusiveDomain(RuntimeError):
    """Too many candidate points were rejected by exclusion predicates or poles."""


@dataclass(frozen=True)
class SamplePlan:
    seed: int = DEFAULT_SEED
    count: int = 64
    box: Mapping[str, tuple[Fraction, Fraction]] = field(default_factory=dict)
    default_box: tuple[Fraction, Fraction] = (Fraction(-2), Fraction(2))
    exclusions: tuple[Expression, ...] = ()
    guard: Fraction = Fraction(1, 10)
    tolerance: float = 1e-9
    max_attempts: int = 50

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("sample count must be at least 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "exclusions", tuple(sympy.sympify(e) for e in self.exclusions))

    @property
    def guard_mpf(self):
        return to_mpf(self.guard)

    def with_(self, **changes) -> "SamplePlan":
        from dataclasses import replace

        return replace(self, **changes)

    def excluding(self, *predicates: Expression) -> "SamplePlan":
        return self.with_(exclusions=self.exclusions + tuple(predicates))

    def bounds(self, name: str) -> tuple[Fraction, Fraction]:
        lo, hi = self.box.get(name, self.default_box)
        return Fraction(lo), Fraction(hi)

    def candidates(self, names: Sequence[str]):
        """Deterministic stream of rational candidate points."""
        rng = random.Random(self.seed)
        names = sorted(names)
        for _ in range(self.count * self.max_attempts):
            point = {}
            for name in names:
                lo, hi = self.bounds(name)
                point[name] = lo + (hi - lo) * Fraction(rng.randrange(GRID + 1), GRID)
            yield point


@dataclass(frozen=True)
class Sample:
    point: dict
    values: tuple
    scales: tuple


def sample(
    exprs: Sequence[Expression],
    plan: SamplePlan,
    names: Sequence[str] | None = None,
    count: int | None = None,
) -> list[Sample]:
    """Evaluate ``exprs`` at ``count`` accepted points of ``plan``.

    A candidate is accepted when every exclusion predicate that can be
    evaluated there has absolute value at least ``plan.guard`` and every
    expression evaluates without hitting a pole or a branch cut.
    """
    count = plan.count if count is None else count
    exprs = [sympy.sympify(e) for e in exprs]
    if names is None:
        names = sorted(set().union(*(set(variables(e)) for e in exprs)) if exprs else set())
    names = sorted(names)
    evaluators = [Evaluator(e) for e in exprs]
    guards = [Evaluator(p) for p in plan.exclusions if set(variables(p)) <= set(names)]
    accepted: list[Sample] = []
    for point in plan.candidates(names):
        try:
            if any(abs(to_mpf(g(point))) < plan.guard_mpf for g in guards):
                continue
            values, scales = [], []
            for ev in evaluators:
                values.append(ev(point))
                scales.append(ev.max_abs)
        except EvaluationError:
            continue
        accepted.append(Sample(point, tuple(values), tuple(scales)))
        if len(accepted) == count:
            return accepted
    raise InconclusiveDomain(
        f"only {len(accepted)} of {count} sample points accepted over {names} "
        f"(seed {plan.seed})"
    )


def negligible(value, scale, tolerance: float) -> bool:
    """Zero test for one sampled value; exact values must be exactly zero."""
    if isinstance(value, Fraction):
        return value == 0
    return abs(value) <= tolerance * scale


class ZeroKind(enum.Enum):
    PROVED = "ProvedZero"
    SAMPLED = "SampledZero"
    NONZERO = "Nonzero"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ZeroVerdict:
    kind: ZeroKind
    seed: int
    samples: int = 0
    witness: dict | None = None
    value: object = None
    note: str = ""

    @property
    def is_zero(self) -> bool:
        return self.kind in (ZeroKind.PROVED, ZeroKind.SAMPLED)

    def __str__(self) -> str:
        if self.kind is ZeroKind.NONZERO:
            pt = ", ".join(f"{k}={v}" for k, v in sorted((self.witness or {}).items()))
            return f"Nonzero(value={self.value} at {pt or 'constant'})"
        if self.kind is ZeroKind.SAMPLED:
            return f"SampledZero({self.samples} points, seed {self.seed})"
        if self.kind is ZeroKind.INCONCLUSIVE:
            return f"Inconclusive({self.note})"
        return "ProvedZero"


def is_zero(e: Expression, plan: SamplePlan | None = None) -> ZeroVerdict:
    """Decide ``e == 0`` identically.

    Symbolic simplification is tried first.  Otherwise ``e`` is evaluated at
    the plan's seeded points: exactly for rational functions, at 128-bit
    precision with a relative tolerance scaled by the largest subterm
    otherwise.  Raises ``InconclusiveDomain`` when the plan cannot supply
    enough admissible points.
    """
    plan = plan or SamplePlan()
    reduced = simplify(e)
    if reduced == 0:
        return ZeroVerdict(ZeroKind.PROVED, plan.seed)
    if not reduced.free_symbols:
        return ZeroVerdict(ZeroKind.NONZERO, plan.seed, witness={}, value=reduced)
    for i, s in enumerate(sample([reduced], plan)):
        if not negligible(s.values[0], s.scales[0], plan.tolerance):
            return ZeroVerdict(ZeroKind.NONZERO, plan.seed, i + 1, s.point, s.values[0])
    return ZeroVerdict(ZeroKind.SAMPLED, plan.seed, plan.count)


def identical(a: Expression, b: Expression, plan: SamplePlan | None = None) -> ZeroVerdict:
    return is_zero(sympy.sympify(a) - sympy.sympify(b), plan)
