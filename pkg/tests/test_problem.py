from fractions import Fraction

import pytest

from wavereduce.problem import ProblemError, hats, load_problem, parse_problem
from wavereduce.symbolic import sym

RADIAL = """\
# radial ansatz
n: 3
y: x0
z: sqrt(x1^2 + x2^2 + x3^2)   # r
shat: -1
Shat: -2/z
"""


def test_parse_radial():
    p = parse_problem(RADIAL)
    assert p.n == 3
    assert p.get("y") == sym("x0")
    assert p.lines["Shat"] == 6
    assert hats(p) == {"s": -1, "S": -2 / sym("z")}


def test_empty_file():
    p = parse_problem("")
    with pytest.raises(ProblemError, match="missing required key: y"):
        p.require("y", "z")


def test_comment_only_file():
    assert parse_problem("# nothing\n\n   # here\n").values == {}


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("y: x0\nfoo: 1\n", 2, "unknown key 'foo'"),
        ("y: x0\nz: x1\ny: x2\n", 3, "duplicate key 'y'"),
        ("y: x0\nz: x7\n", 2, "dimension mismatch"),
        ("n: 2\ny: x3\n", 2, "dimension mismatch"),
        ("y x0\n", 1, "expected 'key: expression'"),
        ("y:\n", 1, "empty value"),
        ("y: x0 +\n", 1, "offset 4"),
        ("phi: x0\n", 1, "unknown identifier"),
        ("F: y\n", 1, "unknown identifier"),
        ("n: ten\n", 1, "n must be an integer"),
        ("lambda: 2\n", 1, "lambda must be"),
        ("N: 1/2\n", 1, "N must be an integer"),
        ("C: x0\n", 1, "unknown identifier"),
        ("case: spherical\n", 1, "unknown case"),
    ],
)
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ProblemError) as info:
        parse_problem(text)
    assert info.value.line == line
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"line {line}:")


def test_dimension_declared_after_use():
    p = parse_problem("y: x4\nn: 4\n")
    assert p.n == 4 and p.get("y") == sym("x4")


def test_constants():
    p = parse_problem("lambda: -1\nN: 3\nC: 1/2\n")
    assert p.get("lambda") == -1 and p.get("N") == 3 and p.get("C") == Fraction(1, 2)


def test_compat_scope():
    p = parse_problem("Phi: (w - v)^2\nV: 4/(w - v)\nh: 2\ncase: hyperbolic\n")
    assert p.get("case") == "hyperbolic"
    assert p.get("h") == 2


def test_load_problem(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text(RADIAL, encoding="utf-8")
    assert load_problem(path).source == str(path)
    with pytest.raises(ProblemError):
        load_problem(tmp_path / "missing.txt")
