"""Point evaluation of expressions.

Rational functions evaluate exactly over ``Fraction``.  Anything containing a
radical or a transcendental head is evaluated with mpmath at
``FLOAT_PRECISION_BITS`` bits.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

import mpmath
import sympy

from .symbolic import Expression, is_rational_expression

FLOAT_PRECISION_BITS = 128


class EvaluationError(ArithmeticError):
    """Evaluation hit a singular point; ``subexpression`` names the culprit."""

    def __init__(self, message: str, subexpression: Expression):
        self.subexpression = subexpression
        super().__init__(f"{message}: {subexpression}")


class DivisionByZero(EvaluationError):
    pass


class DomainViolation(EvaluationError):
    pass


class UnboundVariable(EvaluationError):
    pass


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {value!r} as a rational coordinate")


def to_mpf(value) -> mpmath.mpf:
    """Promote a Fraction (or int) to an mpf at working precision; mpf passes through."""
    if isinstance(value, mpmath.mpf):
        return value
    f = to_fraction(value)
    with mpmath.workprec(FLOAT_PRECISION_BITS):
        return mpmath.mpf(f.numerator) / f.denominator


class Evaluator:
    """Evaluate one expression at many points.

    ``max_abs`` holds the largest absolute value of any subterm seen during the
    most recent call; the zero tester scales its tolerance by it.
    """

    def __init__(self, e: Expression):
        self.expr = sympy.sympify(e)
        self.exact = is_rational_expression(self.expr)
        self.max_abs = 0

    def __call__(self, point: Mapping[str, object]):
        self.max_abs = 0
        if self.exact:
            values = {k: to_fraction(v) for k, v in point.items()}
            return self._walk(self.expr, values)
        with mpmath.workprec(FLOAT_PRECISION_BITS):
            values = {}
            for k, v in point.items():
                f = to_fraction(v)
                values[k] = mpmath.mpf(f.numerator) / f.denominator
            return +self._walk(self.expr, values)

    def _const(self, p: int, q: int):
        if self.exact:
            return Fraction(p, q)
        return mpmath.mpf(p) / q

    def _walk(self, node, values):
        out = self._node(node, values)
        a = abs(out)
        if a > self.max_abs:
            self.max_abs = a
        return out

    def _node(self, node, values):
        if node.is_Rational:
            return self._const(int(node.p), int(node.q))
        if node.is_Symbol:
            try:
                return values[node.name]
            except KeyError:
                raise UnboundVariable("unbound variable", node) from None
        if node is sympy.E:
            return mpmath.e
        if node.is_Add:
            total = self._walk(node.args[0], values)
            for arg in node.args[1:]:
                total = total + self._walk(arg, values)
            return total
        if node.is_Mul:
            prod = self._walk(node.args[0], values)
            for arg in node.args[1:]:
                prod = prod * self._walk(arg, values)
            return prod
        if node.is_Pow:
            return self._pow(node, values)
        head = type(node)
        arg = self._walk(node.args[0], values)
        if head is sympy.sin:
            return mpmath.sin(arg)
        if head is sympy.cos:
            return mpmath.cos(arg)
        if head is sympy.exp:
            return mpmath.exp(arg)
        if head is sympy.log:
            if arg <= 0:
                raise DomainViolation("ln of a non-positive value", node)
            return mpmath.log(arg)
        raise TypeError(f"cannot evaluate node {head.__name__}")

    def _pow(self, node, values):
        base = self._walk(node.base, values)
        exp = node.exp
        if base == 0 and exp < 0:
            raise DivisionByZero("division by zero", node.base)
        if exp.is_Integer:
            return base ** int(exp)
        if base < 0:
            raise DomainViolation("negative radicand", node.base)
        if exp == sympy.S.Half:
            return mpmath.sqrt(base)
        return mpmath.power(base, mpmath.mpf(int(exp.p)) / int(exp.q))


def evaluate(e: Expression, point: Mapping[str, object]):
    """Value of ``e`` at ``point``: a ``Fraction`` when exact, else an ``mpf``."""
    return Evaluator(e)(point)
