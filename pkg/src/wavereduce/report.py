"""Deterministic JSON reports.

Exact rationals become "p/q" strings, high-precision floats become JSON
numbers, expressions become grammar text.  Keys are sorted so that two runs
with the same seed produce byte-identical output.
"""
from __future__ import annotations

import enum
import json
from fractions import Fraction
from typing import Any

import mpmath
import sympy

from .sampling import SamplePlan, ZeroVerdict
from .symbolic import to_text

REPORT_BLOCKS = ("meta", "profile", "classification", "compat", "lift")


def plain(value: Any) -> Any:
    """Convert report values into JSON-ready data."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return value
    if isinstance(value, mpmath.mpf):
        return float(value)
    if isinstance(value, sympy.Rational):
        return f"{value.p}/{value.q}"
    if isinstance(value, sympy.Expr):
        return to_text(value)
    if isinstance(value, ZeroVerdict):
        return verdict_block(value)
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def verdict_block(v: ZeroVerdict) -> dict:
    return {
        "kind": v.kind.value,
        "seed": v.seed,
        "samples": v.samples,
        "witness": plain(v.witness),
        "value": plain(v.value),
        "note": v.note,
    }


def meta_block(plan: SamplePlan, n: int | None, command: str, passed: bool) -> dict:
    return {"seed": plan.seed, "tolerance": plan.tolerance, "n": n, "command": command, "passed": passed}


def build_report(meta: dict, **blocks: Any) -> dict:
    unknown = set(blocks) - set(REPORT_BLOCKS) - {"catalog", "lemmas"}
    if unknown:
        raise KeyError(f"unknown report blocks: {sorted(unknown)}")
    doc = {name: None for name in REPORT_BLOCKS}
    doc["meta"] = meta
    doc.update(blocks)
    return plain(doc)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"
