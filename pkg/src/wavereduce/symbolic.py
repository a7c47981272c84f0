"""Expression substrate: variable spaces, canonical simplification, calculus.

Expressions are plain sympy trees restricted to the node kinds the rest of
the package understands: rational constants, symbols, sums, products,
powers with rational exponents, and the functions sin, cos, exp, ln and
sqrt (sqrt is a power with exponent 1/2).  Symbols carry no assumptions,
so sympy never rewrites ``sqrt(x**2)`` to ``Abs(x)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import sympy

Expression = sympy.Expr

SURFACE_NAMES = ("y", "z", "v", "w", "vs", "u")
FUNCTIONS = {
    "sin": sympy.sin,
    "cos": sympy.cos,
    "exp": sympy.exp,
    "ln": sympy.log,
    "sqrt": sympy.sqrt,
}
_ALLOWED_FUNCS = (sympy.sin, sympy.cos, sympy.exp, sympy.log)


class ExpressionError(ValueError):
    """An expression uses a node kind or variable outside the supported set."""


@lru_cache(maxsize=None)
def sym(name: str) -> sympy.Symbol:
    return sympy.Symbol(name)


@dataclass(frozen=True)
class VariableSpace:
    """Spacetime coordinates x0..xn plus the surface variables in play."""

    n: int
    surface: tuple[str, ...] = ("y", "z")

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"spatial dimension must be a positive integer, got {self.n!r}")
        if self.n > 9:
            raise ValueError("at most nine space variables (identifiers x0..x9)")
        object.__setattr__(self, "surface", tuple(self.surface))
        for name in self.surface:
            if name not in SURFACE_NAMES:
                raise ValueError(f"unknown surface variable {name!r}")
        if len(set(self.surface)) != len(self.surface):
            raise ValueError("surface variable names must be distinct")

    @property
    def spacetime(self) -> tuple[str, ...]:
        return tuple(f"x{i}" for i in range(self.n + 1))

    @property
    def coords(self) -> tuple[sympy.Symbol, ...]:
        return tuple(sym(name) for name in self.spacetime)

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self.spacetime) | frozenset(self.surface)

    def metric(self, mu: int) -> int:
        """Diagonal entry of the metric diag(+1, -1, ..., -1)."""
        return 1 if mu == 0 else -1

    def with_surface(self, *names: str) -> "VariableSpace":
        return VariableSpace(self.n, tuple(names))


def check_expression(e: Expression) -> Expression:
    """Raise ExpressionError unless ``e`` is built from supported node kinds."""
    for node in sympy.preorder_traversal(e):
        if node.is_Symbol or node.is_Rational or node is sympy.E:
            continue
        if node in (sympy.zoo, sympy.nan, sympy.oo, -sympy.oo):
            raise ExpressionError(f"non-finite constant in expression: {e}")
        if node.is_Add or node.is_Mul:
            continue
        if node.is_Pow:
            if not node.exp.is_Rational:
                raise ExpressionError(f"non-rational exponent in {node}")
            continue
        if isinstance(node, _ALLOWED_FUNCS):
            continue
        raise ExpressionError(f"unsupported node {type(node).__name__} in {e}")
    return e


def variables(e: Expression) -> list[str]:
    """Sorted names of the free variables of ``e``."""
    return sorted(s.name for s in e.free_symbols)


def is_rational_expression(e: Expression) -> bool:
    """True when ``e`` is a rational function: no radicals, no transcendental heads."""
    for node in sympy.preorder_traversal(e):
        if node is sympy.E or isinstance(node, _ALLOWED_FUNCS):
            return False
        if node.is_Pow and not node.exp.is_Integer:
            return False
    return True


def simplify(e: Expression) -> Expression:
    """Canonical form used throughout.

    The rewrite set is deliberately small: sympy's automatic canonicalisation
    (constant folding, flattening, ordering, collecting like terms, identity
    absorption, rational power laws), full expansion, then a cancelled
    numerator/denominator form over a common denominator, with radicals and
    function applications treated as opaque generators, and the denominator
    refolded into powers.  The cancelled form is kept when it is no larger.  Radicals are never rewritten through
    absolute values.
    """
    e = sympy.sympify(e)
    out = sympy.expand(e, power_exp=False, log=False)
    if out == 0 or not out.free_symbols:
        return out
    try:
        cancelled = sympy.cancel(sympy.together(out))
    except sympy.PolynomialError:
        return out
    num, den = sympy.fraction(cancelled)
    if den != 1:
        # Re-fold radical powers that cancel() spread over the denominator.
        cancelled = num / sympy.powsimp(sympy.factor_terms(den))
    if cancelled == 0 or sympy.count_ops(cancelled) <= sympy.count_ops(out):
        return cancelled
    return out


def differentiate(e: Expression, var: str, space: VariableSpace | None = None) -> Expression:
    if space is not None and var not in space.names:
        raise ExpressionError(f"unknown variable {var!r}")
    return simplify(sympy.diff(e, sym(var)))


def substitute(e: Expression, bindings: Mapping[str, Expression]) -> Expression:
    """Simultaneous substitution; variables without a binding are left alone."""
    table = {sym(name): sympy.sympify(value) for name, value in bindings.items()}
    return sympy.sympify(e).xreplace(table)


def to_text(e: Expression) -> str:
    """Render ``e`` in the input grammar, so that ``parse(to_text(e))`` round-trips."""
    return _fmt(sympy.sympify(e))


_SUM, _PRODUCT, _POWER, _ATOM = range(4)


def _precedence(e: Expression) -> int:
    if e.is_Add:
        return _SUM
    if e.is_Rational and (e.q != 1 or e < 0):
        return _PRODUCT
    if e.is_Mul:
        return _PRODUCT
    if e.is_Pow:
        if e.exp == sympy.S.Half:
            return _ATOM
        return _PRODUCT if e.exp.is_negative else _POWER
    return _ATOM


def _wrap(e: Expression, level: int) -> str:
    text = _fmt(e)
    return f"({text})" if _precedence(e) < level else text


def _fmt(e: Expression) -> str:
    if e.is_Integer:
        return str(int(e))
    if e.is_Rational:
        return f"{e.p}/{e.q}"
    if e is sympy.E:
        return "exp(1)"
    if e.is_Symbol:
        return e.name
    if e.is_Add:
        terms = e.as_ordered_terms()
        out = _fmt(terms[0])
        for term in terms[1:]:
            if term.could_extract_minus_sign():
                out += " - " + _fmt_product_like(-term)
            else:
                out += " + " + _fmt_product_like(term)
        return out
    if e.is_Mul or (e.is_Pow and e.exp.is_negative):
        if e.could_extract_minus_sign():
            return "-" + _fmt_product_like(-e)
        return _fmt_product_like(e)
    if e.is_Pow:
        base, exp = e.base, e.exp
        if exp == sympy.S.Half:
            return f"sqrt({_fmt(base)})"
        exp_text = str(int(exp)) if exp.is_Integer else f"({exp.p}/{exp.q})"
        return f"{_wrap(base, _ATOM)}^{exp_text}"
    if isinstance(e, sympy.log):
        return f"ln({_fmt(e.args[0])})"
    if isinstance(e, (sympy.sin, sympy.cos, sympy.exp)):
        return f"{type(e).__name__}({_fmt(e.args[0])})"
    raise ExpressionError(f"cannot print node {type(e).__name__}")


def _fmt_product_like(e: Expression) -> str:
    """Format a term known not to carry a leading minus sign."""
    if e.is_Add or not (e.is_Mul or e.is_Pow or e.is_Rational):
        return _wrap(e, _PRODUCT)
    num, den = [], []
    coeff, factors = e.as_coeff_mul()
    if coeff != 1:
        if coeff.p != 1 or not factors:
            num.append(str(int(coeff.p)))
        if coeff.q != 1:
            den.append(sympy.Integer(coeff.q))
    for f in factors:
        if f.is_Pow and f.exp.is_negative:
            den.append(f.base ** (-f.exp))
        else:
            num.append(_wrap(f, _POWER))
    top = "*".join(num) if num else "1"
    if not den:
        return top
    bottom = _wrap(den[0], _POWER) if len(den) == 1 else f"({'*'.join(_wrap(d, _POWER) for d in den)})"
    # "x^2/3" would read back as x^(2/3): a bare exponent absorbs a following "/q".
    if re.search(r"\^\d+$", top) and bottom[0].isdigit():
        top = f"({top})"
    return f"{top}/{bottom}"


def linear_combination(coeffs: Iterable, terms: Iterable[Expression]) -> Expression:
    return sympy.Add(*(sympy.sympify(c) * t for c, t in zip(coeffs, terms)))
