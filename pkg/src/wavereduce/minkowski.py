"""Scalar-field calculus on Minkowski space with metric diag(+1, -1, ..., -1)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import mpmath
import sympy

from .evaluate import FLOAT_PRECISION_BITS, Evaluator
from .symbolic import Expression, VariableSpace, differentiate, simplify, to_text


@dataclass(frozen=True)
class Gradient:
    """Components du/dx_mu for mu = 0..n."""

    components: tuple[Expression, ...]
    space: VariableSpace

    def __post_init__(self) -> None:
        if len(self.components) != self.space.n + 1:
            raise ValueError("gradient length must be n + 1")

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, mu: int) -> Expression:
        return self.components[mu]

    def raised(self) -> tuple[Expression, ...]:
        """Metric-raised components (u_0, -u_1, ..., -u_n)."""
        return tuple(self.space.metric(mu) * c for mu, c in enumerate(self.components))


def gradient(u: Expression, space: VariableSpace) -> Gradient:
    return Gradient(tuple(differentiate(u, x, space) for x in space.spacetime), space)


def mdot(A: Gradient, B: Gradient) -> Expression:
    """Minkowski contraction A_0 B_0 - sum_a A_a B_a."""
    if len(A) != len(B) or A.space.n != B.space.n:
        raise ValueError(f"dimension mismatch: {len(A)} vs {len(B)}")
    return simplify(sympy.Add(*(A.space.metric(mu) * a * b for mu, (a, b) in enumerate(zip(A, B)))))


def dalembertian(u: Expression, space: VariableSpace) -> Expression:
    """u_{x0 x0} - sum_a u_{xa xa}."""
    terms = []
    for mu, x in enumerate(space.spacetime):
        terms.append(space.metric(mu) * sympy.diff(u, x, 2))
    return simplify(sympy.Add(*terms))


@dataclass(frozen=True)
class MixedHessian:
    """Second derivatives of ``field`` with the first index raised by the metric.

    Entry (mu, nu) is eta^{mu mu} u_{x_mu x_nu}, so the trace is the d'Alembertian.
    """

    entries: tuple[tuple[Expression, ...], ...]
    field: Expression
    space: VariableSpace

    @property
    def dim(self) -> int:
        return len(self.entries)

    def trace(self) -> Expression:
        return simplify(sympy.Add(*(self.entries[i][i] for i in range(self.dim))))

    def evaluator(self) -> "HessianEvaluator":
        return HessianEvaluator(self)

    def at(self, point: Mapping[str, object]) -> list[list]:
        return self.evaluator()(point)

    def __str__(self) -> str:
        return "\n".join("[ " + ", ".join(to_text(e) for e in row) + " ]" for row in self.entries)


class HessianEvaluator:
    """Numeric entries of a mixed Hessian at sample points, reusing compiled evaluators."""

    def __init__(self, H: MixedHessian):
        self._cells = [[Evaluator(e) for e in row] for row in H.entries]

    def __call__(self, point: Mapping[str, object]) -> list[list]:
        rows = [[ev(point) for ev in row] for row in self._cells]
        exact = all(ev.exact for row in self._cells for ev in row)
        if exact:
            return rows
        # Promote exact cells (often literal zeros) so arithmetic stays in one field.
        with mpmath.workprec(FLOAT_PRECISION_BITS):
            return [[x if isinstance(x, mpmath.mpf) else mpmath.mpf(x.numerator) / x.denominator
                     for x in row] for row in rows]


def mixed_hessian(u: Expression, space: VariableSpace) -> MixedHessian:
    xs = space.spacetime
    first = [sympy.diff(u, x) for x in xs]
    rows = []
    for mu in range(len(xs)):
        sign = space.metric(mu)
        rows.append(tuple(simplify(sign * sympy.diff(first[mu], xs[nu])) for nu in range(len(xs))))
    return MixedHessian(tuple(rows), u, space)


def hessian_on_gradient(u: Expression, space: VariableSpace) -> tuple[Expression, ...]:
    """Components of H . (eta grad u); identically zero when mdot(grad u, grad u) is constant."""
    H = mixed_hessian(u, space)
    raised = gradient(u, space).raised()
    return tuple(simplify(sympy.Add(*(h * g for h, g in zip(row, raised)))) for row in H.entries)
