"""Command-line entry point: ``wavereduce <command> ...``.

Exit status 0 when every check passes, 1 when a check fails, 2 on input errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import sympy

from . import catalog as catalog_mod
from .compatibility import (
    CompatReport,
    DegenerateInput,
    LemmaReport,
    check_first_order,
    check_statement1,
    check_statement2_form,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    explicit_solution_report,
    lemma1_explore,
    lemma2_check,
    lemma3_check,
)
from .frames import FrameError, boost_bindings, boosted_frame, frame_by_name, standard_frame
from .lift import LiftCase, LiftResult, lift_and_check
from .parser import ParseError
from .problem import CASES, Problem, ProblemError, hats, load_problem
from .reduction import (
    PROFILE_KEYS,
    AnsatzPair,
    Classification,
    ReductionProfile,
    classify,
    dependence_test,
    profile,
    reduced_equation,
    verify_surface_forms,
)
from .report import build_report, dumps, meta_block
from .sampling import DEFAULT_SEED, InconclusiveDomain, SamplePlan
from .symbolic import Expression, sym, to_text

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass
class Outcome:
    passed: bool
    lines: list[str] = field(default_factory=list)
    blocks: dict = field(default_factory=dict)
    n: int | None = None


# -- block builders ---------------------------------------------------------


def profile_block(prof: ReductionProfile, dependence: dict) -> dict:
    return {
        "pair": {"y": prof.pair.y, "z": prof.pair.z},
        "entries": {k: prof[k] for k in PROFILE_KEYS},
        "surface": dict(prof.surface),
        "verdicts": dict(prof.verdicts),
        "dependence": {
            k: {"passed": d.passed, "ratio": d.ratio, "witness": d.witness, "seed": d.seed, "note": d.note}
            for k, d in dependence.items()
        },
    }


def classification_block(c: Classification) -> dict:
    return {
        "tag": c.tag,
        "signs": c.signs,
        "discriminant_min": c.discriminant_min,
        "discriminant_max": c.discriminant_max,
        "seed": c.seed,
    }


def compat_block(r: CompatReport) -> dict:
    return {
        "case": r.case,
        "seed": r.seed,
        "passed": r.passed,
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail, "witness": c.witness} for c in r.checks
        ],
        "nilpotence": dict(sorted(r.nilpotence.items())),
        "notes": list(r.notes),
    }


def lemma_block(r: LemmaReport) -> dict:
    return {
        "name": r.name,
        "seed": r.seed,
        "passed": r.passed,
        "tolerance": r.tolerance,
        "preconditions": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in r.preconditions],
        "rows": [dict(row) for row in r.rows],
        "notes": list(r.notes),
    }


def lift_block(r: LiftResult) -> dict:
    return {
        "status": r.status,
        "precondition": r.precondition,
        "max_residual": r.max_residual,
        "mean_residual": r.mean_residual,
        "exact": r.exact,
        "samples": r.samples,
        "witness": r.witness,
        "note": r.note,
    }


# -- helpers -----------------------------------------------------------------


def _nonpolynomial(e: Expression) -> bool:
    return not e.is_polynomial(*e.free_symbols)


def _pair(problem: Problem, frame: str = "standard") -> AnsatzPair:
    y, z = problem.require("y", "z")
    space = problem.space
    exclusions = tuple(e for e in (y, z) if _nonpolynomial(e))
    try:
        pair = AnsatzPair(y, z, space, exclusions=exclusions)
        if frame == "boosted":
            if space.n != 3:
                raise InputError("the boosted frame needs n = 3")
            pair = pair.transformed(boost_bindings(space))
        elif frame != "standard":
            raise InputError(f"unknown frame {frame!r}")
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return pair


def _surface_exclusions(pair: AnsatzPair) -> tuple[Expression, ...]:
    return tuple(sym(name) for name, e in zip(pair.names, (pair.y, pair.z)) if _nonpolynomial(e))


def _profile(pair: AnsatzPair, supplied: dict, plan: SamplePlan, out: Outcome) -> ReductionProfile:
    prof = verify_surface_forms(profile(pair), supplied, plan) if supplied else profile(pair)
    dependence = {k: dependence_test(prof[k], pair, plan) for k in PROFILE_KEYS}
    cls = classify(prof, plan)
    out.blocks["profile"] = profile_block(prof, dependence)
    out.blocks["classification"] = classification_block(cls)
    out.lines.append(f"pair: y = {to_text(pair.y)}, z = {to_text(pair.z)}")
    for k in PROFILE_KEYS:
        status = "ok" if dependence[k].passed else "NOT a function of (y, z)"
        line = f"  {k} = {to_text(prof[k])}  [{status}]"
        if k in prof.verdicts:
            line += f"  surface {to_text(prof.surface[k])}: {prof.verdicts[k]}"
        out.lines.append(line)
        if not dependence[k].passed or (k in prof.verdicts and not prof.verdicts[k].is_zero):
            out.passed = False
    out.lines.append(f"classification: {cls.tag.value} (signs {cls.signs})")
    return prof


# -- commands ----------------------------------------------------------------


def run_reduce(problem: Problem, plan: SamplePlan, frame: str) -> Outcome:
    out = Outcome(True, n=problem.n)
    pair = _pair(problem, frame)
    supplied = hats(problem)
    prof = _profile(pair, supplied, plan, out)
    if prof.fully_verified:
        pde = reduced_equation(prof)
        out.blocks["profile"]["reduced_equation"] = {"text": str(pde), "coefficients": list(pde.coefficients)}
        out.lines.append(f"reduced equation: {pde}")
    else:
        missing = [k for k in PROFILE_KEYS if k not in supplied]
        if missing:
            out.lines.append(f"reduced equation: not formed, no surface form for {', '.join(missing)}")
        else:
            out.lines.append("reduced equation: not formed, surface forms did not verify")
    return out


def _require_case_data(problem: Problem, case: str, plan: SamplePlan) -> CompatReport:
    n = problem.n
    if case == "one-variable":
        # Phi selects the quotient test, N the closed-form family; either or both.
        F, lam = problem.require("F", "lambda")
        if "N" not in problem:
            problem.require("Phi")
        reports = []
        if "Phi" in problem:
            reports.append(check_statement1(F, problem.get("Phi"), lam, n, plan))
        if "N" in problem:
            reports.append(check_statement2_form(F, problem.get("N"), problem.get("C", 0), lam, plan))
        for extra in reports[1:]:
            reports[0].checks.extend(extra.checks)
        return reports[0]
    if case == "elliptic":
        V, h, Phi = problem.require("V", "h", "Phi")
        return check_theorem1(V, h, Phi, n, plan)
    if case == "hyperbolic":
        V, W, h, Phi, Psi = problem.require("V", "W", "h", "Phi", "Psi")
        if "y" in problem and "z" in problem:
            y, z = problem.require("y", "z")
            return explicit_solution_report(y, z, h, V, W, Phi, Psi, n, problem.space, plan)
        return check_theorem2(V, W, h, Phi, Psi, n, plan)
    if case == "parabolic":
        V, W, Phi, lam = problem.require("V", "W", "Phi", "lambda")
        return check_theorem3(V, W, Phi, lam, n, plan)
    if case == "first-order":
        V, W = problem.require("V", "W")
        return check_first_order(V, W, plan)
    raise InputError(f"unknown case {case!r}")


def run_check_compat(problem: Problem, plan: SamplePlan, case: str) -> Outcome:
    declared = problem.get("case")
    if declared is not None and declared != case:
        raise InputError(f"--case {case} disagrees with the file's case: {declared}")
    try:
        report = _require_case_data(problem, case, plan)
    except (DegenerateInput, ValueError) as exc:
        if isinstance(exc, ProblemError):
            raise
        raise InputError(str(exc)) from None
    out = Outcome(report.passed, n=problem.n)
    out.blocks["compat"] = compat_block(report)
    out.lines.append(f"compatibility ({case}), seed {report.seed}")
    for c in report.checks:
        out.lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    for note in report.notes:
        out.lines.append(f"  note: {note}")
    return out


def run_lemmas(problem: Problem, plan: SamplePlan, kmax: int) -> Outcome:
    if kmax < 1:
        raise InputError("--kmax must be at least 1")
    v, w, h, Phi = problem.require("y", "z", "h", "Phi")
    space = problem.space
    reports = [lemma2_check(v, space, plan, label="v"), lemma2_check(w, space, plan, label="w")]
    reports.append(lemma3_check(v, w, h, Phi, kmax, space, plan, target="v"))
    if "Psi" in problem:
        reports.append(lemma3_check(v, w, h, problem.get("Psi"), kmax, space, plan, target="w"))
    informational = []
    if "V" in problem:
        informational.append(lemma1_explore(v, w, h, problem.get("V"), kmax, space, plan, target="v"))
    out = Outcome(all(r.passed for r in reports), n=problem.n)
    out.blocks["lemmas"] = [lemma_block(r) for r in reports]
    out.blocks["compat"] = {"informational": [lemma_block(r) for r in informational]}
    for r in reports + informational:
        tag = "pass" if r.passed else "FAIL"
        if r in informational:
            tag = "info"
        out.lines.append(f"{r.name}: {tag}")
        for c in r.preconditions:
            out.lines.append(f"  precondition {c.name}: {'ok' if c.passed else 'FAILED'}")
        for row in r.rows:
            out.lines.append(f"  k={row['k']}: max residual {float(row['max_residual']):.3e}")
        for note in r.notes:
            out.lines.append(f"  note: {note}")
    return out


def run_lift(problem: Problem, plan: SamplePlan) -> Outcome:
    phi = problem.require("phi")
    for key in ("rhat", "qhat", "shat", "Rhat", "Shat"):
        problem.require(key)
    F = problem.get("F", sympy.Integer(0))
    pair = _pair(problem)
    out = Outcome(True, n=problem.n)
    prof = _profile(pair, hats(problem), plan, out)
    if not prof.fully_verified:
        out.passed = False
        out.lines.append("lift: skipped, surface forms did not verify")
        return out
    pde = reduced_equation(prof)
    case = LiftCase(pair, pde, phi, F, plan.with_(count=100), _surface_exclusions(pair))
    result = lift_and_check(case)
    out.blocks["lift"] = lift_block(result)
    out.passed = out.passed and result.passed
    out.lines.append(f"reduced equation: {pde}")
    out.lines.append(f"lift: {result.status}")
    if result.max_residual is not None:
        out.lines.append(
            f"  residual max {float(result.max_residual):.3e}, mean {float(result.mean_residual):.3e}"
            f" over {result.samples} samples{' (exact)' if result.exact else ''}"
        )
    if result.note:
        out.lines.append(f"  note: {result.note}")
    return out


def run_catalog_command(plan: SamplePlan, frame: str, phi3: str) -> Outcome:
    frames = [standard_frame(), boosted_frame()] if frame == "both" else [frame_by_name(frame)]
    try:
        entries = catalog_mod.catalog(phi3)
    except (ParseError, ValueError) as exc:
        raise InputError(f"--phi3: {exc}") from None
    out = Outcome(True, n=3)
    blocks = []
    for fr in frames:
        rep = catalog_mod.run_catalog(plan, fr, entries)
        out.passed = out.passed and rep.passed
        for r in rep.results:
            out.lines.append(
                f"[{'pass' if r.passed else 'FAIL'}] {r.frame} {r.name}: "
                f"{r.classification.tag.value if r.classification else '?'}; "
                f"{r.reduced if r.reduced else 'no reduced equation'}"
            )
            for f in r.failures:
                out.lines.append(f"    {f}")
            blocks.append({
                "frame": r.frame,
                "name": r.name,
                "passed": r.passed,
                "failures": r.failures,
                "classification": classification_block(r.classification) if r.classification else None,
                "reduced_equation": str(r.reduced) if r.reduced else None,
                "surface_verdicts": dict(r.profile.verdicts) if r.profile else {},
            })
    out.blocks["catalog"] = blocks
    return out


# -- argument handling ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="sampling seed (default %(default)s)")
    common.add_argument("--out", type=Path, help="write the JSON report here")

    ap = argparse.ArgumentParser(prog="wavereduce", description="Verify ansatz reductions of box u = F(u).")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[common], help="profile, classify and reduce an ansatz pair")
    p.add_argument("--problem", required=True, type=Path)
    p.add_argument("--frame", choices=("standard", "boosted"), default="standard")

    p = sub.add_parser("check-compat", parents=[common], help="compatibility conditions for one case")
    p.add_argument("--case", required=True, choices=CASES)
    p.add_argument("--problem", required=True, type=Path)

    p = sub.add_parser("lemmas", parents=[common], help="matrix identities on an explicit null pair")
    p.add_argument("--problem", required=True, type=Path)
    p.add_argument("--kmax", type=int, default=4)

    p = sub.add_parser("catalog", help="the four worked reductions")
    csub = p.add_subparsers(dest="action", required=True)
    r = csub.add_parser("run", parents=[common])
    r.add_argument("--frame", choices=("standard", "boosted", "both"), default="standard")
    r.add_argument("--phi3", default="u^2", help="entry-3 function of u (default %(default)s)")

    p = sub.add_parser("lift", parents=[common], help="lift a reduced solution and check box u = F(u)")
    p.add_argument("--problem", required=True, type=Path)
    return ap


def execute(args: argparse.Namespace) -> tuple[int, str, str | None]:
    """Run one parsed command; returns (exit code, text, JSON or None)."""
    plan = SamplePlan(seed=args.seed)
    try:
        if args.command == "catalog":
            out = run_catalog_command(plan, args.frame, args.phi3)
        else:
            problem = load_problem(args.problem)
            if args.command == "reduce":
                out = run_reduce(problem, plan, args.frame)
            elif args.command == "check-compat":
                out = run_check_compat(problem, plan, args.case)
            elif args.command == "lemmas":
                out = run_lemmas(problem, plan, args.kmax)
            else:
                out = run_lift(problem, plan)
    except (ProblemError, InputError, ParseError, FrameError) as exc:
        return EXIT_INPUT, f"input error: {exc}", None
    except InconclusiveDomain as exc:
        return EXIT_FAILED, f"inconclusive: {exc}", None
    command = args.command if args.command != "catalog" else "catalog run"
    report = build_report(meta_block(plan, out.n, command, out.passed), **out.blocks)
    text = "\n".join(out.lines + [f"result: {'PASS' if out.passed else 'FAIL'}"])
    return (EXIT_OK if out.passed else EXIT_FAILED), text, dumps(report)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    code, text, payload = execute(args)
    stream = sys.stdout if code != EXIT_INPUT else sys.stderr
    print(text, file=stream)
    if payload is not None and args.out is not None:
        args.out.write_text(payload, encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
