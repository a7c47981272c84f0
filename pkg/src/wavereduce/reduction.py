"""Reduction of box u = F(u) through the ansatz u = phi(y, z).

Substituting the ansatz gives

    phi_yy r + 2 phi_yz q + phi_zz s + phi_y R + phi_z S = F(phi)

with r = y.y, q = y.z, s = z.z (Minkowski contractions of gradients),
R = box y and S = box z.  The reduction closes when all five quantities are
functions of (y, z) alone.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import mpmath
import sympy

from .evaluate import FLOAT_PRECISION_BITS, to_mpf
from .matrices import determinant
from .minkowski import dalembertian, gradient, mdot
from .sampling import (
    InconclusiveDomain,
    SamplePlan,
    ZeroKind,
    ZeroVerdict,
    is_zero,
    negligible,
    sample,
)
from .symbolic import Expression, VariableSpace, simplify, substitute, sym, to_text, variables

PROFILE_KEYS = ("r", "q", "s", "R", "S")
# Relative bound on 3x3 Jacobian minors for functional dependence.
DEPENDENCE_TOLERANCE = 1e-7


@dataclass(frozen=True)
class AnsatzPair:
    """New independent variables y(x), z(x) of the ansatz u = phi(y, z).

    ``exclusions`` are expressions in x that must stay away from zero at
    sample points (radial coordinates, denominators).
    """

    y: Expression
    z: Expression
    space: VariableSpace
    exclusions: tuple[Expression, ...] = ()
    names: tuple[str, str] = ("y", "z")

    def __post_init__(self) -> None:
        allowed = set(self.space.spacetime)
        for label, e in (("y", self.y), ("z", self.z)):
            extra = set(variables(e)) - allowed
            if extra:
                raise ValueError(f"{label} must depend on spacetime variables only, found {sorted(extra)}")
        if all(c == 0 for c in gradient(self.y, self.space)) and all(
            c == 0 for c in gradient(self.z, self.space)
        ):
            raise ValueError("both ansatz functions have identically vanishing gradients")

    def plan(self, plan: SamplePlan) -> SamplePlan:
        return plan.excluding(*self.exclusions)

    def bindings(self) -> dict[str, Expression]:
        return {self.names[0]: self.y, self.names[1]: self.z}

    def lift(self, e: Expression) -> Expression:
        """Compose a surface expression with the ansatz: e(y(x), z(x))."""
        return substitute(e, self.bindings())

    def transformed(self, bindings: Mapping[str, Expression]) -> "AnsatzPair":
        """The pair after a change of spacetime coordinates."""
        return replace(
            self,
            y=simplify(substitute(self.y, bindings)),
            z=simplify(substitute(self.z, bindings)),
            exclusions=tuple(substitute(e, bindings) for e in self.exclusions),
        )

    def independence(self, plan: SamplePlan | None = None) -> "DependenceVerdict":
        """Jacobian rank 2 check: some 2x2 minor of [grad y; grad z] is non-negligible at every sample."""
        plan = self.plan(plan or SamplePlan())
        gy = gradient(self.y, self.space).components
        gz = gradient(self.z, self.space).components
        worst = None
        for s in sample(list(gy) + list(gz), plan, names=self.space.spacetime):
            rows = _as_mpf([s.values[: len(gy)], s.values[len(gy):]])
            ratio = _minor_ratio(rows, 2)
            if worst is None or ratio < worst[0]:
                worst = (ratio, s.point)
            if ratio < DEPENDENCE_TOLERANCE:
                return DependenceVerdict(False, plan.seed, ratio, s.point, "gradients of y and z are parallel")
        return DependenceVerdict(True, plan.seed, worst[0], None, "Jacobian rank 2 at all samples")


@dataclass(frozen=True)
class DependenceVerdict:
    passed: bool
    seed: int
    ratio: object
    witness: dict | None
    note: str = ""


@dataclass(frozen=True)
class ReductionProfile:
    pair: AnsatzPair
    r: Expression
    q: Expression
    s: Expression
    R: Expression
    S: Expression
    surface: Mapping[str, Expression] = field(default_factory=dict)
    verdicts: Mapping[str, ZeroVerdict] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Expression:
        if key not in PROFILE_KEYS:
            raise KeyError(key)
        return getattr(self, key)

    @property
    def fully_verified(self) -> bool:
        return all(k in self.verdicts and self.verdicts[k].is_zero for k in PROFILE_KEYS)

    def failures(self) -> list[str]:
        return [k for k in PROFILE_KEYS if k in self.verdicts and not self.verdicts[k].is_zero]


def profile(pair: AnsatzPair) -> ReductionProfile:
    gy = gradient(pair.y, pair.space)
    gz = gradient(pair.z, pair.space)
    return ReductionProfile(
        pair,
        r=mdot(gy, gy),
        q=mdot(gy, gz),
        s=mdot(gz, gz),
        R=dalembertian(pair.y, pair.space),
        S=dalembertian(pair.z, pair.space),
    )


def verify_surface_forms(
    p: ReductionProfile,
    candidates: Mapping[str, Expression] | Sequence[Expression],
    plan: SamplePlan | None = None,
) -> ReductionProfile:
    """Check e(x) == e_hat(y(x), z(x)) for each supplied surface form."""
    plan = p.pair.plan(plan or SamplePlan())
    if not isinstance(candidates, Mapping):
        candidates = dict(zip(PROFILE_KEYS, candidates))
    allowed = set(p.pair.names)
    surface = dict(p.surface)
    verdicts = dict(p.verdicts)
    for key, form in candidates.items():
        if key not in PROFILE_KEYS:
            raise KeyError(f"unknown profile entry {key!r}")
        form = sympy.sympify(form)
        extra = set(variables(form)) - allowed
        if extra:
            raise ValueError(f"surface form for {key} may only use {sorted(allowed)}, found {sorted(extra)}")
        surface[key] = form
        try:
            verdicts[key] = is_zero(p[key] - p.pair.lift(form), plan)
        except InconclusiveDomain as exc:
            verdicts[key] = ZeroVerdict(ZeroKind.INCONCLUSIVE, plan.seed, note=str(exc))
    return replace(p, surface=surface, verdicts=verdicts)


def _as_mpf(rows):
    with mpmath.workprec(FLOAT_PRECISION_BITS):
        return [[to_mpf(x) for x in row] for row in rows]


def _minor_ratio(rows, k: int):
    """Largest k x k minor of ``rows`` divided by the product of the row norms."""
    with mpmath.workprec(FLOAT_PRECISION_BITS):
        norms = [mpmath.sqrt(sum(x * x for x in row)) for row in rows]
        scale = mpmath.fprod(norms)
        if scale == 0:
            return mpmath.mpf(0)
        best = mpmath.mpf(0)
        for cols in itertools.combinations(range(len(rows[0])), k):
            best = max(best, abs(determinant([[row[c] for c in cols] for row in rows])))
        return best / scale


def dependence_test(e: Expression, pair: AnsatzPair, plan: SamplePlan | None = None) -> DependenceVerdict:
    """Is ``e`` (locally) a function of (y, z)?  Rank of [grad e; grad y; grad z] <= 2."""
    plan = pair.plan(plan or SamplePlan())
    space = pair.space
    grads = [gradient(f, space).components for f in (e, pair.y, pair.z)]
    m = space.n + 1
    worst = mpmath.mpf(0)
    flat = [c for g in grads for c in g]
    for s in sample(flat, plan, names=space.spacetime):
        rows = _as_mpf([s.values[i * m:(i + 1) * m] for i in range(3)])
        ratio = _minor_ratio(rows, 3)
        if ratio >= DEPENDENCE_TOLERANCE:
            return DependenceVerdict(False, plan.seed, ratio, s.point, "gradient of e leaves span(grad y, grad z)")
        worst = max(worst, ratio)
    return DependenceVerdict(True, plan.seed, worst, None, "rank <= 2 at all samples")


class ReductionType(enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    FIRST_ORDER = "first-order"
    MIXED = "mixed"


@dataclass(frozen=True)
class Classification:
    tag: ReductionType
    signs: str
    discriminant_min: object
    discriminant_max: object
    norm_min: object
    seed: int

    @property
    def samples(self) -> int:
        return len(self.signs)


def classify(p: ReductionProfile, plan: SamplePlan | None = None) -> Classification:
    """Type of the reduced equation from the sign of rs - q^2 over the samples.

    Each sample is marked '+', '-', '0' (discriminant in the tolerance band,
    gradients non-degenerate) or 'd' (r, q, s all negligible).
    """
    plan = p.pair.plan(plan or SamplePlan())
    disc = simplify(p.r * p.s - p.q ** 2)
    norm = simplify(p.r ** 2 + p.s ** 2 + p.q ** 2)
    signs = []
    discs, norms = [], []
    for smp in sample([p.r, p.q, p.s, disc, norm], plan, names=p.pair.space.spacetime):
        r, q, s, d, nrm = smp.values
        scale = max(to_mpf(abs(r * s)), to_mpf(q * q), to_mpf(smp.scales[3]))
        discs.append(d)
        norms.append(nrm)
        if all(negligible(v, 1, plan.tolerance) for v in (r, q, s)):
            signs.append("d")
        elif negligible(d, scale, plan.tolerance):
            signs.append("0")
        else:
            signs.append("+" if d > 0 else "-")
    kinds = set(signs)
    if kinds == {"d"}:
        tag = ReductionType.FIRST_ORDER
    elif kinds == {"+"}:
        tag = ReductionType.ELLIPTIC
    elif kinds == {"-"}:
        tag = ReductionType.HYPERBOLIC
    elif kinds == {"0"}:
        tag = ReductionType.PARABOLIC
    else:
        tag = ReductionType.MIXED
    return Classification(
        tag, "".join(signs), min(discs, key=to_mpf), max(discs, key=to_mpf), min(norms, key=to_mpf), plan.seed
    )


PHI_DERIVATIVES = ("phi_yy", "phi_yz", "phi_zz", "phi_y", "phi_z")


class UnverifiedProfile(ValueError):
    pass


@dataclass(frozen=True)
class ReducedPDE:
    """Coefficients of the two-dimensional equation, in (y, z), with right side F(phi)."""

    phi_yy: Expression
    phi_yz: Expression
    phi_zz: Expression
    phi_y: Expression
    phi_z: Expression
    names: tuple[str, str] = ("y", "z")

    @property
    def coefficients(self) -> tuple[Expression, ...]:
        return tuple(getattr(self, k) for k in PHI_DERIVATIVES)

    def apply(self, phi: Expression) -> Expression:
        """Left-hand side of the reduced equation evaluated on ``phi``."""
        a, b = (sym(n) for n in self.names)
        derivs = (
            sympy.diff(phi, a, 2),
            sympy.diff(phi, a, b),
            sympy.diff(phi, b, 2),
            sympy.diff(phi, a),
            sympy.diff(phi, b),
        )
        return simplify(sympy.Add(*(c * d for c, d in zip(self.coefficients, derivs))))

    def __str__(self) -> str:
        a, b = self.names
        labels = (f"phi_{a}{a}", f"phi_{a}{b}", f"phi_{b}{b}", f"phi_{a}", f"phi_{b}")
        out = ""
        for coeff, label in zip(self.coefficients, labels):
            coeff = simplify(coeff)
            if coeff == 0:
                continue
            negative = coeff.could_extract_minus_sign()
            mag = -coeff if negative else coeff
            body = label if mag == 1 else f"({to_text(mag)})*{label}"
            if not out:
                out = ("-" if negative else "") + body
            else:
                out += (" - " if negative else " + ") + body
        return f"{out or '0'} = F(phi)"


def reduced_equation(p: ReductionProfile) -> ReducedPDE:
    if not p.fully_verified:
        missing = [k for k in PROFILE_KEYS if k not in p.verdicts or not p.verdicts[k].is_zero]
        raise UnverifiedProfile(f"surface forms not verified for: {', '.join(missing)}")
    f = p.surface
    return ReducedPDE(
        simplify(f["r"]), simplify(2 * f["q"]), simplify(f["s"]), simplify(f["R"]), simplify(f["S"]),
        names=p.pair.names,
    )


def reduction_identity_residual(p: ReductionProfile, phi: Expression) -> Expression:
    """box(phi(y(x), z(x))) minus the lifted reduced operator applied to ``phi``.

    Uses the x-space profile entries, so it vanishes for every ansatz pair.
    """
    pair = p.pair
    a, b = (sym(n) for n in pair.names)
    lhs = dalembertian(pair.lift(phi), pair.space)
    derivs = (
        sympy.diff(phi, a, 2),
        sympy.diff(phi, a, b),
        sympy.diff(phi, b, 2),
        sympy.diff(phi, a),
        sympy.diff(phi, b),
    )
    coeffs = (p.r, 2 * p.q, p.s, p.R, p.S)
    rhs = sympy.Add(*(c * pair.lift(d) for c, d in zip(coeffs, derivs)))
    return simplify(lhs - rhs)
