"""Problem files: one ``key: expression`` per line, ``#`` starts a comment.

Keys and the variables their expressions may use:

    n                         positive integer, number of space variables (default 3)
    y, z                      spacetime x0..xn (ansatz pair; the pair v, w for lemmas)
    rhat qhat shat Rhat Shat  surface forms in y, z
    phi                       solution of the reduced equation, in y, z
    F                         nonlinearity, in u
    Phi Psi V W h             compatibility data, in v, w, vs or u
    lambda N C                rational constants
    case                      elliptic | hyperbolic | parabolic | first-order | one-variable
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import sympy

from .parser import ParseError, parse
from .symbolic import Expression, VariableSpace

CASES = ("elliptic", "hyperbolic", "parabolic", "first-order", "one-variable")
HAT_KEYS = {"rhat": "r", "qhat": "q", "shat": "s", "Rhat": "R", "Shat": "S"}
SPACETIME_KEYS = ("y", "z")
SURFACE_KEYS = tuple(HAT_KEYS) + ("phi",)
COMPAT_KEYS = ("Phi", "Psi", "V", "W", "h")
CONSTANT_KEYS = ("lambda", "N", "C")
KEYS = ("n", "case", "F") + SPACETIME_KEYS + SURFACE_KEYS + COMPAT_KEYS + CONSTANT_KEYS

_LINE = re.compile(r"^\s*([A-Za-z_]\w*)\s*:\s*(.*?)\s*$")
_COORD = re.compile(r"\bx(\d+)\b")


class ProblemError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Problem:
    n: int
    values: dict[str, object] = field(default_factory=dict)
    lines: dict[str, int] = field(default_factory=dict)
    text: dict[str, str] = field(default_factory=dict)
    source: str = "<string>"

    @property
    def space(self) -> VariableSpace:
        return VariableSpace(self.n)

    def __contains__(self, key: str) -> bool:
        return key in self.values

    def get(self, key: str, default=None):
        return self.values.get(key, default)

    def require(self, *keys: str):
        for key in keys:
            if key not in self.values:
                raise ProblemError(f"missing required key: {key}")
        values = tuple(self.values[k] for k in keys)
        return values[0] if len(values) == 1 else values


def _scope(key: str, n: int) -> frozenset[str]:
    space = VariableSpace(n)
    if key in SPACETIME_KEYS:
        return frozenset(space.spacetime)
    if key in SURFACE_KEYS:
        return frozenset(("y", "z"))
    if key == "F":
        return frozenset(("u",))
    if key in COMPAT_KEYS:
        return frozenset(("v", "w", "vs", "u"))
    return frozenset()


def _value(key: str, text: str, n: int, line: int):
    if key == "case":
        if text not in CASES:
            raise ProblemError(f"unknown case {text!r}; expected one of {', '.join(CASES)}", line)
        return text
    for m in _COORD.finditer(text):
        if int(m.group(1)) > n:
            raise ProblemError(f"dimension mismatch: {m.group(0)} used but n = {n} (x0..x{n})", line)
    try:
        e = parse(text, names=_scope(key, n))
    except ParseError as exc:
        raise ProblemError(f"{key}: {exc}", line) from None
    if key in CONSTANT_KEYS:
        if not isinstance(e, sympy.Rational):
            raise ProblemError(f"{key} must be a rational constant", line)
        value = Fraction(int(e.p), int(e.q))
        if key == "N" and value.denominator != 1:
            raise ProblemError("N must be an integer", line)
        if key == "lambda" and value not in (-1, 0, 1):
            raise ProblemError("lambda must be 0, 1 or -1", line)
        return int(value) if value.denominator == 1 else value
    return e


def parse_problem(text: str, source: str = "<string>") -> Problem:
    raw: dict[str, tuple[str, int]] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        m = _LINE.match(body)
        if not m:
            raise ProblemError("expected 'key: expression'", number)
        key, value = m.group(1), m.group(2)
        if key not in KEYS:
            raise ProblemError(f"unknown key {key!r}", number)
        if key in raw:
            raise ProblemError(f"duplicate key {key!r} (first on line {raw[key][1]})", number)
        if not value:
            raise ProblemError(f"empty value for {key!r}", number)
        raw[key] = (value, number)

    n = 3
    if "n" in raw:
        value, number = raw["n"]
        if not re.fullmatch(r"\d+", value) or not 1 <= int(value) <= 9:
            raise ProblemError(f"n must be an integer between 1 and 9, got {value!r}", number)
        n = int(value)

    problem = Problem(n, source=source)
    for key, (value, number) in raw.items():
        if key == "n":
            continue
        problem.values[key] = _value(key, value, n, number)
        problem.lines[key] = number
        problem.text[key] = value
    return problem


def load_problem(path: str | Path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ProblemError(f"cannot read {path}: {exc}") from None
    return parse_problem(text, str(path))


def hats(problem: Problem) -> dict[str, Expression]:
    """Supplied surface forms keyed by profile entry name."""
    return {HAT_KEYS[k]: problem.values[k] for k in HAT_KEYS if k in problem.values}
