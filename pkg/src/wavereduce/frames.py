"""Rational orthonormal frames of four-dimensional Minkowski space."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import sympy

from .symbolic import Expression, VariableSpace

Vector = tuple[Fraction, ...]


def minkowski_dot(p: Vector, q: Vector) -> Fraction:
    return p[0] * q[0] - sum(a * b for a, b in zip(p[1:], q[1:]))


class FrameError(ValueError):
    pass


@dataclass(frozen=True)
class Frame:
    """Vectors a, b, c, d with a.a = 1, b.b = c.c = d.d = -1, mutually orthogonal."""

    a: Vector
    b: Vector
    c: Vector
    d: Vector
    name: str = "custom"

    def __post_init__(self) -> None:
        for label in "abcd":
            vec = tuple(Fraction(x) for x in getattr(self, label))
            if len(vec) != 4:
                raise FrameError(f"frame vector {label} must have 4 components")
            object.__setattr__(self, label, vec)

    def violations(self) -> list[str]:
        """Exact Gram-matrix defects; empty for a valid frame."""
        out = []
        expected = {"a": 1, "b": -1, "c": -1, "d": -1}
        for label, value in expected.items():
            got = minkowski_dot(getattr(self, label), getattr(self, label))
            if got != value:
                out.append(f"{label}.{label} = {got}, expected {value}")
        for p, q in combinations("abcd", 2):
            got = minkowski_dot(getattr(self, p), getattr(self, q))
            if got != 0:
                out.append(f"{p}.{q} = {got}, expected 0")
        return out

    def validate(self) -> "Frame":
        problems = self.violations()
        if problems:
            raise FrameError("invalid frame: " + "; ".join(problems))
        return self

    def contract(self, label: str, space: VariableSpace) -> Expression:
        """The linear form p.x = p_0 x_0 - p_1 x_1 - p_2 x_2 - p_3 x_3."""
        if space.n != 3:
            raise FrameError("frames are defined for three space variables")
        vec = getattr(self, label)
        return sympy.Add(*(space.metric(mu) * sympy.Rational(c.numerator, c.denominator) * x
                           for mu, (c, x) in enumerate(zip(vec, space.coords))))


def standard_frame() -> Frame:
    return Frame((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), name="standard").validate()


def boosted_frame(cosh=Fraction(5, 4), sinh=Fraction(3, 4)) -> Frame:
    """Standard frame with a and d mixed by a boost along x3."""
    ch, sh = Fraction(cosh), Fraction(sinh)
    if ch * ch - sh * sh != 1:
        raise FrameError(f"cosh^2 - sinh^2 = {ch * ch - sh * sh}, expected 1")
    return Frame((ch, 0, 0, sh), (0, 1, 0, 0), (0, 0, 1, 0), (sh, 0, 0, ch), name="boosted").validate()


def boost_bindings(space: VariableSpace, cosh=Fraction(5, 4), sinh=Fraction(3, 4)) -> dict[str, Expression]:
    """Coordinate change x0 -> ch x0 + sh x3, x3 -> sh x0 + ch x3."""
    ch, sh = sympy.Rational(str(Fraction(cosh))), sympy.Rational(str(Fraction(sinh)))
    if ch ** 2 - sh ** 2 != 1:
        raise FrameError("invalid boost parameters")
    x0, x3 = space.coords[0], space.coords[-1]
    return {space.spacetime[0]: ch * x0 + sh * x3, space.spacetime[-1]: sh * x0 + ch * x3}


def frame_by_name(name: str) -> Frame:
    if name == "standard":
        return standard_frame()
    if name == "boosted":
        return boosted_frame()
    raise FrameError(f"unknown frame {name!r}")
