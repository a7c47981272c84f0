"""Necessary compatibility conditions for the canonical d'Alembert-Hamilton systems.

Canonical systems for the pair (v, w) (or (v, v*) in the elliptic case):

* elliptic:    box v = V, v*.v = h, v.v = v*.v* = 0
* hyperbolic:  box v = V, box w = W, v.w = h, v.v = w.w = 0
* parabolic:   box v = V, box w = W, v.w = 0, v.v = lambda, w.w = 0
* first order: v.v = w.w = v.w = 0, box v = V, box w = W

Every identity decision goes through ``is_zero`` with an explicit plan and
records the plan's seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

import mpmath
import sympy

from .evaluate import FLOAT_PRECISION_BITS, to_mpf
from .matrices import determinant, minor_sums, minor_sums_bruteforce, power_traces
from .minkowski import dalembertian, gradient, mdot, mixed_hessian
from .sampling import InconclusiveDomain, SamplePlan, ZeroVerdict, is_zero, sample
from .symbolic import Expression, VariableSpace, simplify, substitute, sym, variables

U, V_, W_, VS = sym("u"), sym("v"), sym("w"), sym("vs")

PARABOLIC_OBSTRUCTION = (
    "box u = F(u) cannot be reduced to a parabolic equation: with W = 0 the "
    "variable w enters the reduced first-order equation only as a parameter"
)
FIRST_ORDER_NOTE = (
    "no first-order reduced equation exists: compatibility forces V = W = 0, "
    "leaving only the algebraic equation F(u) = 0"
)
HYPERBOLIC_READING = (
    "hyperbolic canonical system read as v.w = h(v, w), v.v = 0, w.w = 0"
)


@dataclass(frozen=True)
class Check:
    """One named sub-verdict inside a report."""

    name: str
    passed: bool
    detail: str = ""
    verdict: ZeroVerdict | None = None

    @property
    def witness(self):
        return None if self.verdict is None else self.verdict.witness


@dataclass
class CompatReport:
    case: str
    seed: int
    checks: list[Check] = field(default_factory=list)
    nilpotence: dict[str, int | None] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name: str, verdict: ZeroVerdict, detail: str = "") -> Check:
        check = Check(name, verdict.is_zero, detail or str(verdict), verdict)
        self.checks.append(check)
        return check

    def add_flag(self, name: str, passed: bool, detail: str) -> Check:
        check = Check(name, passed, detail)
        self.checks.append(check)
        return check

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


class DegenerateInput(ValueError):
    """A generating function that must not vanish identically does."""


def _require_nonzero(e: Expression, label: str, plan: SamplePlan) -> None:
    if is_zero(e, plan).is_zero:
        raise DegenerateInput(f"{label} vanishes identically")


def _power_derivative_zero(Phi: Expression, var: sympy.Symbol, order: int, plan: SamplePlan) -> ZeroVerdict:
    return is_zero(sympy.diff(Phi, var, order), plan)


def check_statement1(F: Expression, Phi: Expression, lam: int, n: int, plan: SamplePlan | None = None) -> CompatReport:
    """Necessary form F = lambda Phi'/Phi with d^{n+1}Phi/du^{n+1} = 0 for box u = F(u), u.u = lambda."""
    plan = plan or SamplePlan()
    if lam not in (-1, 0, 1):
        raise ValueError("lambda must be 0 or +-1")
    _require_nonzero(Phi, "Phi", plan)
    report = CompatReport("one-variable", plan.seed)
    report.add("quotient F*Phi - lambda*Phi_u", is_zero(F * Phi - lam * sympy.diff(Phi, U), plan))
    report.add(f"d^{n + 1}Phi/du^{n + 1} == 0", _power_derivative_zero(Phi, U, n + 1, plan))
    return report


def check_statement2_form(F: Expression, N: int, C, lam: int, plan: SamplePlan | None = None) -> CompatReport:
    """F == lambda / (N (u + C)) for N in 0..3; N = 0 means F == 0 (four space variables)."""
    plan = plan or SamplePlan()
    if N not in (0, 1, 2, 3):
        raise ValueError(f"N must be one of 0, 1, 2, 3, got {N}")
    target = sympy.Integer(0) if N == 0 else sympy.Integer(lam) / (N * (U + sympy.sympify(C)))
    report = CompatReport("one-variable", plan.seed)
    report.add(f"F == lambda/({N}(u + {C}))", is_zero(F - target, plan.excluding(U + sympy.sympify(C))))
    return report


def nilpotence_order(
    h: Expression, Phi: Expression, var: str, max_order: int, plan: SamplePlan | None = None
) -> int | None:
    """Smallest m <= max_order with (h d/dvar)^m Phi == 0, else None."""
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    plan = plan or SamplePlan()
    x = sym(var)
    current = sympy.sympify(Phi)
    for m in range(1, max_order + 1):
        current = simplify(h * sympy.diff(current, x))
        if is_zero(current, plan).is_zero:
            return m
    return None


def _order_check(report: CompatReport, label: str, h, Phi, var: str, n: int, plan: SamplePlan) -> None:
    # Look one step past n + 1 so the report shows the true order when it fails.
    order = nilpotence_order(h, Phi, var, n + 2, plan)
    report.nilpotence[label] = order
    ok = order is not None and order <= n + 1
    shown = f"> {n + 2}" if order is None else str(order)
    report.add_flag(f"nilpotence of (h d/d{var}) on {label}", ok, f"order {shown}, bound n + 1 = {n + 1}")


def check_theorem1(V, h, Phi, n: int, plan: SamplePlan | None = None) -> CompatReport:
    """Elliptic case over (v, vs): V = h Phi_vs / Phi, (h d/dvs)^{n+1} Phi = 0."""
    plan = plan or SamplePlan()
    _require_nonzero(Phi, "Phi", plan)
    report = CompatReport("elliptic", plan.seed)
    report.add("quotient V*Phi - h*Phi_vs", is_zero(V * Phi - h * sympy.diff(Phi, VS), plan))
    _order_check(report, "Phi", h, Phi, "vs", n, plan)
    report.notes.append("v and v* treated as independent surface variables")
    return report


def check_theorem2(V, W, h, Phi, Psi, n: int, plan: SamplePlan | None = None) -> CompatReport:
    """Hyperbolic case over (v, w): V = h Phi_w / Phi, W = h Psi_v / Psi, both operators nilpotent of order <= n+1."""
    plan = plan or SamplePlan()
    _require_nonzero(Phi, "Phi", plan)
    _require_nonzero(Psi, "Psi", plan)
    report = CompatReport("hyperbolic", plan.seed)
    report.add("quotient V*Phi - h*Phi_w", is_zero(V * Phi - h * sympy.diff(Phi, W_), plan))
    report.add("quotient W*Psi - h*Psi_v", is_zero(W * Psi - h * sympy.diff(Psi, V_), plan))
    _order_check(report, "Phi", h, Phi, "w", n, plan)
    _order_check(report, "Psi", h, Psi, "v", n, plan)
    report.notes.append(HYPERBOLIC_READING)
    return report


def check_theorem3(V, W, Phi, lam: int, n: int, plan: SamplePlan | None = None) -> CompatReport:
    """Parabolic case: W == 0, V = lambda Phi_v / Phi, d^{n+1}Phi/dv^{n+1} = 0."""
    plan = plan or SamplePlan()
    if lam not in (-1, 1):
        raise ValueError("lambda must be +-1 in the parabolic case")
    _require_nonzero(Phi, "Phi", plan)
    report = CompatReport("parabolic", plan.seed)
    w_check = report.add("W == 0", is_zero(W, plan))
    if not w_check.passed:
        report.notes.append("parabolic reduction obstructed: W does not vanish")
    report.add("quotient V*Phi - lambda*Phi_v", is_zero(V * Phi - lam * sympy.diff(Phi, V_), plan))
    report.add(f"d^{n + 1}Phi/dv^{n + 1} == 0", _power_derivative_zero(Phi, V_, n + 1, plan))
    report.notes.append(PARABOLIC_OBSTRUCTION)
    return report


def check_first_order(V, W, plan: SamplePlan | None = None) -> CompatReport:
    plan = plan or SamplePlan()
    report = CompatReport("first-order", plan.seed)
    report.add("V == 0", is_zero(V, plan))
    report.add("W == 0", is_zero(W, plan))
    report.notes.append(FIRST_ORDER_NOTE)
    return report


@dataclass(frozen=True)
class HyperbolicFamily:
    """Solutions of the hyperbolic conditions generated by R(v, w) and coefficient lists.

    h = 1/R_vw, Phi = sum f_k(v) R_v^k, Psi = sum g_k(w) R_w^k, V = h Phi_w / Phi,
    W = h Psi_v / Psi.  ``V_closed``/``W_closed`` hold the alternative closed
    form sum k f_k R_v^k / sum f_k R_v^k for comparison only.
    """

    R: Expression
    f: tuple[Expression, ...]
    g: tuple[Expression, ...]
    n: int
    h: Expression
    Phi: Expression
    Psi: Expression
    V: Expression
    W: Expression
    V_closed: Expression
    W_closed: Expression


def build_hyperbolic_family(
    R: Expression, f: Sequence[Expression], g: Sequence[Expression], n: int, plan: SamplePlan | None = None
) -> HyperbolicFamily:
    plan = plan or SamplePlan()
    if len(f) > n + 2 or len(g) > n + 2:
        raise ValueError(f"coefficient lists are indexed 0..n+1 = {n + 1}")
    f = tuple(sympy.sympify(c) for c in f) or (sympy.Integer(1),)
    g = tuple(sympy.sympify(c) for c in g) or (sympy.Integer(1),)
    for k, c in enumerate(f):
        if set(variables(c)) - {"v"}:
            raise ValueError(f"f_{k} must depend on v only")
    for k, c in enumerate(g):
        if set(variables(c)) - {"w"}:
            raise ValueError(f"g_{k} must depend on w only")
    Rvw = simplify(sympy.diff(R, V_, W_))
    if is_zero(Rvw, plan).is_zero:
        raise DegenerateInput("R_vw vanishes identically")
    Rv, Rw = sympy.diff(R, V_), sympy.diff(R, W_)
    h = simplify(1 / Rvw)
    Phi = simplify(sympy.Add(*(c * Rv ** k for k, c in enumerate(f))))
    Psi = simplify(sympy.Add(*(c * Rw ** k for k, c in enumerate(g))))
    _require_nonzero(Phi, "Phi", plan)
    _require_nonzero(Psi, "Psi", plan)
    V = simplify(h * sympy.diff(Phi, W_) / Phi)
    W = simplify(h * sympy.diff(Psi, V_) / Psi)
    V_closed = simplify(sympy.Add(*(k * c * Rv ** k for k, c in enumerate(f))) / Phi)
    W_closed = simplify(sympy.Add(*(k * c * Rw ** k for k, c in enumerate(g))) / Psi)
    return HyperbolicFamily(R, f, g, n, h, Phi, Psi, V, W, V_closed, W_closed)


# --- matrix lemmas on explicit solutions -------------------------------------------------


@dataclass
class LemmaReport:
    name: str
    seed: int
    preconditions: list[Check] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)
    tolerance: float = 1e-8
    notes: list[str] = field(default_factory=list)

    @property
    def preconditions_met(self) -> bool:
        return all(c.passed for c in self.preconditions)

    @property
    def passed(self) -> bool:
        return self.preconditions_met and bool(self.rows) and all(r["passed"] for r in self.rows)


def _null_check(field_: Expression, label: str, space: VariableSpace, plan: SamplePlan) -> Check:
    g = gradient(field_, space)
    verdict = is_zero(mdot(g, g), plan)
    return Check(f"{label}.{label} == 0", verdict.is_zero, str(verdict), verdict)


def lemma2_check(
    v: Expression, space: VariableSpace, plan: SamplePlan | None = None, tolerance: float = 1e-8, label: str = "v"
) -> LemmaReport:
    """det of the mixed Hessian of a null field vanishes at every sample."""
    plan = plan or SamplePlan()
    report = LemmaReport(f"lemma2[{label}]", plan.seed, tolerance=tolerance)
    report.preconditions.append(_null_check(v, label, space, plan))
    if not report.preconditions_met:
        report.notes.append(f"precondition failed: {label} does not have a null gradient")
        return report
    H = mixed_hessian(v, space)
    flat = [e for row in H.entries for e in row]
    m = H.dim
    worst, witness = mpmath.mpf(0), None
    for s in sample(flat, plan, names=space.spacetime):
        rows = [[to_mpf(x) for x in s.values[i * m:(i + 1) * m]] for i in range(m)]
        with mpmath.workprec(FLOAT_PRECISION_BITS):
            d = abs(determinant(rows))
        if d > worst:
            worst, witness = d, s.point
    report.rows.append({"k": "det", "max_residual": worst, "witness": witness, "passed": worst < tolerance})
    return report


def _surface_lift(e: Expression, v: Expression, w: Expression, names=("v", "w")) -> Expression:
    return substitute(e, {names[0]: v, names[1]: w})


def hyperbolic_preconditions(v, w, h, space: VariableSpace, plan: SamplePlan) -> list[Check]:
    gv, gw = gradient(v, space), gradient(w, space)
    checks = [_null_check(v, "v", space, plan), _null_check(w, "w", space, plan)]
    verdict = is_zero(mdot(gv, gw) - _surface_lift(h, v, w), plan)
    checks.append(Check("v.w == h(v, w)", verdict.is_zero, str(verdict), verdict))
    return checks


def lemma3_check(
    v: Expression,
    w: Expression,
    h: Expression,
    Phi: Expression,
    kmax: int,
    space: VariableSpace,
    plan: SamplePlan | None = None,
    *,
    target: str = "v",
    tolerance: float = 1e-8,
) -> LemmaReport:
    """Compare minor sums of the mixed Hessian with (h d)^k Phi / (k! Phi).

    ``target="v"`` uses the Hessian of v and the operator h d/dw (Phi side);
    ``target="w"`` uses the Hessian of w and h d/dv (Psi side, pass Psi as Phi).
    Each left side is computed both by Faddeev-LeVerrier and by brute-force
    principal-minor enumeration; the residual is the worse of the two.
    """
    plan = plan or SamplePlan()
    report = LemmaReport(f"lemma3[{target}]", plan.seed, tolerance=tolerance)
    report.preconditions.extend(hyperbolic_preconditions(v, w, h, space, plan))
    report.notes.append(HYPERBOLIC_READING)
    if not report.preconditions_met:
        report.notes.append("precondition failed: (v, w) do not solve the hyperbolic canonical system")
        return report
    field_, other = (v, W_) if target == "v" else (w, V_)
    H = mixed_hessian(field_, space)
    m = H.dim
    rhs = []
    current = sympy.sympify(Phi)
    for k in range(1, kmax + 1):
        current = simplify(h * sympy.diff(current, other))
        rhs.append(_surface_lift(simplify(current / (factorial(k) * Phi)), v, w))
    flat = [e for row in H.entries for e in row]
    box = dalembertian(field_, space)
    worst = [mpmath.mpf(0)] * kmax
    witness = [None] * kmax
    trace_gap = mpmath.mpf(0)
    for s in sample(flat + rhs + [box], plan, names=space.spacetime):
        with mpmath.workprec(FLOAT_PRECISION_BITS):
            rows = [[to_mpf(x) for x in s.values[i * m:(i + 1) * m]] for i in range(m)]
            fl = minor_sums(rows)
            bf = minor_sums_bruteforce(rows)
            for k in range(1, kmax + 1):
                lhs_fl = fl[k] if k <= m else mpmath.mpf(0)
                lhs_bf = bf[k] if k <= m else mpmath.mpf(0)
                r = to_mpf(s.values[m * m + k - 1])
                gap = max(abs(lhs_fl - r), abs(lhs_bf - r))
                if gap > worst[k - 1]:
                    worst[k - 1], witness[k - 1] = gap, s.point
            trace_gap = max(trace_gap, abs(fl[1] - to_mpf(s.values[-1])))
    for k in range(1, kmax + 1):
        report.rows.append(
            {"k": k, "max_residual": worst[k - 1], "witness": witness[k - 1], "passed": worst[k - 1] < tolerance}
        )
    report.notes.append(f"trace consistency |M_1 - box| max {mpmath.nstr(trace_gap, 5)}")
    return report


def lemma1_explore(
    v: Expression,
    w: Expression,
    h: Expression,
    Vfun: Expression,
    kmax: int,
    space: VariableSpace,
    plan: SamplePlan | None = None,
    *,
    target: str = "v",
    tolerance: float = 1e-8,
) -> LemmaReport:
    """Power traces tr(H^k) against the operator form of the trace identity.

    Rows carry two candidate right sides:

    * ``shifted``: (-1)^(k-1)/(k-1)! (h d)^(k-1) V, which is what the minor-sum
      identity implies through Newton's identities (pass/fail is set by it);
    * ``printed``: (-1)^k/(k-1)! (h d)^(k+1) V, reported as information only.
    """
    plan = plan or SamplePlan()
    report = LemmaReport(f"lemma1[{target}]", plan.seed, tolerance=tolerance)
    report.preconditions.extend(hyperbolic_preconditions(v, w, h, space, plan))
    if not report.preconditions_met:
        return report
    field_, other = (v, W_) if target == "v" else (w, V_)
    H = mixed_hessian(field_, space)
    m = H.dim
    iterates = [sympy.sympify(Vfun)]
    for _ in range(kmax + 1):
        iterates.append(simplify(h * sympy.diff(iterates[-1], other)))
    shifted = [(-1) ** (k - 1) * iterates[k - 1] / factorial(k - 1) for k in range(1, kmax + 1)]
    printed = [(-1) ** k * iterates[k + 1] / factorial(k - 1) for k in range(1, kmax + 1)]
    lifted = [_surface_lift(simplify(e), v, w) for e in shifted + printed]
    flat = [e for row in H.entries for e in row]
    worst_s = [mpmath.mpf(0)] * kmax
    worst_p = [mpmath.mpf(0)] * kmax
    witness = [None] * kmax
    for s in sample(flat + lifted, plan, names=space.spacetime):
        with mpmath.workprec(FLOAT_PRECISION_BITS):
            rows = [[to_mpf(x) for x in s.values[i * m:(i + 1) * m]] for i in range(m)]
            p = power_traces(rows, kmax)
            for k in range(kmax):
                gs = abs(p[k] - to_mpf(s.values[m * m + k]))
                gp = abs(p[k] - to_mpf(s.values[m * m + kmax + k]))
                if gs > worst_s[k]:
                    worst_s[k], witness[k] = gs, s.point
                worst_p[k] = max(worst_p[k], gp)
    for k in range(kmax):
        report.rows.append({
            "k": k + 1,
            "max_residual": worst_s[k],
            "printed_form_residual": worst_p[k],
            "witness": witness[k],
            "passed": worst_s[k] < tolerance,
        })
    report.notes.append("pass/fail uses the shifted form; the printed form is informational")
    return report


def explicit_solution_report(
    v, w, h, V, W, Phi, Psi, n: int, space: VariableSpace, plan: SamplePlan | None = None
) -> CompatReport:
    """Hyperbolic-case check plus box v = V(v, w), box w = W(v, w) on an explicit pair."""
    plan = plan or SamplePlan()
    report = check_theorem2(V, W, h, Phi, Psi, n, plan)
    for c in hyperbolic_preconditions(v, w, h, space, plan):
        report.checks.append(c)
    try:
        report.add("box v == V(v, w)", is_zero(dalembertian(v, space) - _surface_lift(V, v, w), plan))
        report.add("box w == W(v, w)", is_zero(dalembertian(w, space) - _surface_lift(W, v, w), plan))
    except InconclusiveDomain as exc:
        report.add_flag("box consistency", False, str(exc))
    return report
