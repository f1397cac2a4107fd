"""Run the tasks of a scenario and write text and CSV reports.

Tasks run in a fixed dependency order: exponent validation, the structural
condition, constants, then the numeric checks. A task that needs the
structural condition is skipped with a warning unless the condition holds,
so no constant is ever reported on top of a refuted or unsettled
condition. Task failures are recorded and never stop later tasks.

Reports depend only on the scenario (including its seed), so reruns are
byte-identical; wall-clock times are kept out of the files for that reason.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import conditions as cond
from .config import TASKS, check_scenario, monomial_exponents
from .constants import (
    PANSU_CONSTANT,
    ckn_parameters,
    heisenberg_constant,
    k0_general,
    k0_p1,
    k0_sharp_equal,
)
from .core import sample_cone_sphere
from .errors import AssumptionViolation, ConeSobolevError, NotApplicable, NotEqualWeights
from .transport import QuadraticPotential, RadialPotential, pointwise_divergence_check
from .verifier import maximize_quotient, necessity_probe_log, necessity_probe_shift, spectral_gap_bound

LOG_PROBE_LEVELS = (50, 100, 200, 400, 800, 1600)


@dataclass
class TaskResult:
    """Values are ``(name, value, tolerance)`` triples; tolerance may be ``None``."""

    task: str
    status: str = "ok"
    values: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    provenance: str = ""
    warnings: list = field(default_factory=list)

    def add(self, name, value, tolerance=None):
        self.values.append((name, value, tolerance))

    def table(self, name, columns, rows):
        self.tables[name] = (tuple(columns), [tuple(r) for r in rows])


@dataclass
class Report:
    scenario: object
    exponents: object
    validation_error: str | None
    results: list = field(default_factory=list)

    @property
    def failed(self):
        return [r for r in self.results if r.status == "error"]


class _Skip(Exception):
    pass


class _Context:
    def __init__(self, scenario):
        self.s = scenario
        self.cone = scenario.build_cone()
        self.omega, self.sigma = scenario.build_weights()
        self.exps, self.error = check_scenario(scenario)
        self._condition = None
        self.k0 = None

    def need_exps(self):
        if self.exps is None:
            raise _Skip(f"exponents are not admissible ({self.error})")
        return self.exps

    def monomial_pair(self):
        n = self.s.n
        a, b = monomial_exponents(self.omega, n), monomial_exponents(self.sigma, n)
        return None if a is None or b is None else (a, b)

    def condition(self):
        """``(name, constant, verdict, source, report)`` for the relevant condition."""
        if self._condition is not None:
            return self._condition
        exps = self.need_exps()
        s = self.s
        if exps.na_equals_n:
            rep = cond.check_c1(self.omega, self.sigma, exps, self.cone, s.samples, s.seed)
            self._condition = ("C1", rep.constant_estimate, rep.verdict, "sampled supremum", rep)
            return self._condition
        pair = self.monomial_pair()
        closed = None
        if pair is not None:
            try:
                closed = cond.monomial_c0(pair[0], pair[1], exps.p, s.n)
            except (AssumptionViolation, NotApplicable):
                closed = None
        rep = None
        if closed is None or "check_c0" in s.tasks:
            rep = cond.estimate_best_c0(self.omega, self.sigma, exps, self.cone, s.samples, s.seed)
        if closed is not None:
            self._condition = ("C0", closed, cond.HOLDS, "monomial closed form", rep)
        else:
            self._condition = ("C0", rep.constant_estimate, rep.verdict, "sampled supremum", rep)
        return self._condition

    def holding_constant(self):
        name, value, verdict, source, _ = self.condition()
        if verdict != cond.HOLDS:
            raise _Skip(f"condition {name} is {verdict}; no constant is derived from it")
        return name, value, source


def _rel_spread(trace):
    t = [v for v in trace if math.isfinite(v)]
    if len(t) < 2 or t[-1] == 0:
        return None
    return abs(t[-1] - t[0]) / abs(t[-1])


def _task_validate(ctx, r):
    exps = ctx.need_exps()
    r.add("q", exps.q)
    r.add("n_a", exps.n_a)
    r.add("p_conj", exps.p_conj)
    r.add("balance_residual", exps.balance_residual(), 1e-12)


def _task_check_c0(ctx, r):
    if ctx.exps is None:
        # the condition is not even defined here, so it can never be confirmed
        r.add("verdict", cond.INCONCLUSIVE)
        r.warnings.append(f"exponents are not admissible ({ctx.error}); no C0 constant can hold")
        return
    exps = ctx.exps
    if exps.na_equals_n:
        raise _Skip("n_a = n: the C1 condition applies instead")
    name, value, verdict, source, rep = ctx.condition()
    r.provenance = source
    if rep is not None:
        r.add("c0_estimate", rep.constant_estimate, _rel_spread(rep.trace))
        r.add("samples", rep.samples_used)
        r.add("verdict", rep.verdict)
        if rep.note:
            r.warnings.append(rep.note)
    if source == "monomial closed form":
        r.add("c0_monomial", value, 1e-12)
    if not exps.na_infinite:
        r.add("rigidity_floor", cond.rigidity_floor(exps), 1e-12)


def _task_check_c1(ctx, r):
    exps = ctx.need_exps()
    if not exps.na_equals_n:
        raise _Skip("n_a != n: the C0 condition applies instead")
    _, _, _, source, rep = ctx.condition()
    r.provenance = source
    r.add("c1_estimate", rep.constant_estimate, _rel_spread(rep.trace))
    r.add("gradient_violations", rep.gradient_positivity_violations)
    r.add("samples", rep.samples_used)
    r.add("verdict", rep.verdict)
    if rep.note:
        r.warnings.append(rep.note)


def _task_k0(ctx, r):
    exps = ctx.need_exps()
    name, const, source = ctx.holding_constant()
    if exps.p == 1:
        res = k0_p1(ctx.omega, ctx.sigma, exps, ctx.cone, const)
    else:
        res = k0_general(ctx.omega, ctx.sigma, exps, ctx.cone, const, budget=ctx.s.budget)
    ctx.k0 = res.k0
    r.provenance = f"{res.formula_branch}; {name} from {source}"
    r.add("k0", res.k0, res.quadrature_error)
    r.add(name.lower(), const)
    r.add("prefactor", res.prefactor)
    if res.v_star is not None:
        r.add("inf_ratio", res.inf_ratio)
        r.add("best_density", res.v_star.describe())


def _task_sharp(ctx, r):
    exps = ctx.need_exps()
    try:
        res = k0_sharp_equal(ctx.sigma, exps, ctx.cone, omega=ctx.omega)
    except NotEqualWeights as exc:
        raise _Skip(f"sharp constant needs equal weights: {exc}") from None
    r.provenance = res.formula_branch
    r.add("k0_sharp", res.k0, res.quadrature_error)


def _task_verify(ctx, r):
    exps = ctx.need_exps()
    if ctx.s.n > 3 and ctx.s.grid is None:
        raise _Skip("grid verification is limited to n <= 3")
    family = "smoothed_cap" if exps.p == 1 else "talenti"
    res = maximize_quotient(family, ctx.omega, ctx.sigma, exps, ctx.cone, resolution=ctx.s.grid,
                            budget=max(8, ctx.s.budget // 10))
    r.provenance = f"{family} family, pattern search"
    r.add("best_quotient", res.quotient)
    r.add("evaluations", res.evaluations)
    for key in sorted(res.params):
        val = res.params[key]
        r.add(f"param_{key}", ", ".join(f"{v:.12g}" for v in val) if isinstance(val, list) else val)
    if ctx.k0 is not None:
        r.add("quotient_over_k0", res.quotient / ctx.k0)
        r.add("sound", bool(res.quotient <= 1.01 * ctx.k0))


def _task_necessity(ctx, r):
    s = ctx.s
    exps = ctx.s.raw_exponents()
    y0 = np.asarray(s.direction if s.direction is not None else ctx.cone.interior_direction(), float)
    y0 = y0 / np.linalg.norm(y0)
    depth = math.inf if not ctx.cone.normals else float(np.min(ctx.cone.normal_array @ y0))
    start = 2.0 if not math.isfinite(depth) else 2.0 / depth
    deltas = [start * 2.0**k for k in range(8)]
    shift = necessity_probe_shift(ctx.omega, ctx.sigma, exps, ctx.cone, y0, deltas)
    r.add("shift_slope", shift.slope, shift.slope_stderr)
    r.add("shift_predicted", shift.predicted)
    r.table("shift", ("delta", "quotient", "fitted_slope"),
            [(d, qv, shift.slope) for d, qv in zip(shift.parameters, shift.quotients)])
    log = necessity_probe_log(exps, ctx.cone, log_inverse=LOG_PROBE_LEVELS, omega=ctx.omega, sigma=ctx.sigma)
    r.add("log_slope", log.slope, log.slope_stderr)
    r.add("log_predicted", log.predicted)
    r.add("log_left_exponent", log.extra["left_exponent"])
    r.add("log_right_exponent", log.extra["right_exponent"])
    r.add("log_diverges", log.extra["diverges"])
    r.table("log", ("log_inverse_epsilon", "quotient", "fitted_slope"),
            [(v, qv, log.slope) for v, qv in zip(log.parameters, log.quotients)])
    if shift.slope > 0.02:
        r.warnings.append("shifted bumps make the quotient unbounded: no constant exists")


def _task_spectral_gap(ctx, r):
    exps = ctx.need_exps()
    if abs(exps.alpha - exps.tau - 2) > 1e-12:
        raise _Skip("spectral gap bound needs alpha = tau + 2")
    name, const, source = ctx.holding_constant()
    pts = sample_cone_sphere(ctx.cone, 4000, ctx.s.seed)
    with np.errstate(all="ignore"):
        lim = np.exp(ctx.sigma.log_value(pts) - ctx.omega.log_value(pts))
    lim = np.where(np.isfinite(lim), lim, -np.inf)
    centers = pts[np.argsort(-lim, kind="stable")[:5]]
    bound, info = spectral_gap_bound(ctx.omega, ctx.sigma, const, exps, ctx.cone, centers, full_output=True)
    r.provenance = f"{name} from {source}"
    r.add("lambda_lower_bound", bound)
    r.add("concentration_limit", float(np.max(lim)) / (4 * const**2))
    r.add("best_width", info["width"])


def _task_ckn(ctx, r):
    s = ctx.s
    if s.ckn_beta is None or s.ckn_gamma is None:
        raise _Skip("ckn needs ckn_beta and ckn_gamma")
    res = ckn_parameters(s.n, s.p, s.ckn_beta, s.ckn_gamma)
    for key in ("r", "d", "tau", "alpha"):
        r.add(key, getattr(res, key))
    r.add("balance_residual", res.exps.balance_residual(), 1e-12)


def _task_heisenberg(ctx, r):
    p = ctx.s.p
    res = heisenberg_constant(p, budget=ctx.s.budget, full_output=True)
    r.provenance = res.formula_branch
    r.add("heisenberg_constant", res.k0, res.quadrature_error)
    if p == 1:
        r.add("pansu_constant", PANSU_CONSTANT)
        r.add("exceeds_pansu", bool(res.k0 > PANSU_CONSTANT))


def _task_transport(ctx, r):
    exps = ctx.need_exps()
    name, const, source = ctx.holding_constant()
    rng = np.random.default_rng(ctx.s.seed)
    pts = sample_cone_sphere(ctx.cone, 2000, rng) * np.exp(rng.uniform(-2, 2, (2000, 1)))
    r.provenance = f"{name} from {source}"
    for label, phi in (("lambda_0.5", QuadraticPotential(0.5)), ("lambda_1", QuadraticPotential(1.0)),
                       ("lambda_2", QuadraticPotential(2.0)), ("radial_k3", RadialPotential(3.0))):
        chk = pointwise_divergence_check(ctx.omega, ctx.sigma, exps, phi, pts, const, ctx.cone)
        r.add(f"max_violation_{label}", chk.max_violation, 1e-9)


_RUNNERS = {
    "validate": _task_validate,
    "check_c0": _task_check_c0,
    "check_c1": _task_check_c1,
    "k0": _task_k0,
    "sharp": _task_sharp,
    "verify": _task_verify,
    "necessity": _task_necessity,
    "spectral_gap": _task_spectral_gap,
    "ckn": _task_ckn,
    "heisenberg": _task_heisenberg,
    "transport": _task_transport,
}


def run_scenario(s):
    """Execute the scenario's tasks in dependency order and collect a :class:`Report`."""
    ctx = _Context(s)
    report = Report(s, ctx.exps, ctx.error)
    for task in TASKS:
        if task not in s.tasks:
            continue
        r = TaskResult(task)
        try:
            _RUNNERS[task](ctx, r)
        except _Skip as exc:
            r.status = "skipped"
            r.warnings.append(str(exc))
        except (ConeSobolevError, ValueError, ArithmeticError, RuntimeError) as exc:
            r.status = "error"
            r.warnings.append(f"{type(exc).__name__}: {exc}")
        report.results.append(r)
    return report


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    return str(v)


def _csv_value(v):
    if isinstance(v, (float, np.floating)) and not isinstance(v, bool):
        return repr(float(v))
    return _fmt(v)


def report_text(report):
    s = report.scenario
    lines = [f"scenario: {s.name}", f"cone: {s.cone}", f"omega: {s.omega}", f"sigma: {s.sigma}"]
    head = f"n={s.n} p={_fmt(s.p)} tau={_fmt(s.tau)} alpha={_fmt(s.alpha)}"
    if report.exponents is not None:
        e = report.exponents
        lines.append(f"exponents: {head} q={_fmt(e.q)} n_a={_fmt(e.n_a)} p'={_fmt(e.p_conj)}")
    else:
        lines.append(f"exponents: {head} INVALID ({report.validation_error})")
    lines.append(f"knobs: seed={s.seed} samples={s.samples} grid={s.grid} budget={s.budget}")
    lines.append(f"tasks: {', '.join(s.tasks) if s.tasks else '(none)'}")
    for r in report.results:
        lines += ["", f"== {r.task} [{r.status}] =="]
        if r.provenance:
            lines.append(f"provenance: {r.provenance}")
        for name, value, tol in r.values:
            suffix = "" if tol is None else f"  (tolerance {_fmt(tol)})"
            lines.append(f"{name} = {_fmt(value)}{suffix}")
        for tname, (cols, rows) in r.tables.items():
            lines.append(f"table {tname}: {len(rows)} rows ({', '.join(cols)})")
        for w in r.warnings:
            lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_value(v) for v in row])
    return buf.getvalue()


def emit_report(report, out_dir, formats=("text", "csv")):
    """Write the report; returns the list of files written.

    ``text`` writes ``<name>.txt``. ``csv`` writes ``<name>.csv`` with one
    ``task, parameter, value, tolerance`` row per reported value and one
    ``<name>_<task>_<table>.csv`` per probe table.
    """
    for f in formats:
        if f not in ("text", "csv"):
            raise ValueError(f"unknown format {f!r}")
    os.makedirs(out_dir, exist_ok=True)
    name = report.scenario.name
    written = []

    def put(fname, text):
        path = os.path.join(out_dir, fname)
        with open(path, "w", newline="") as fh:
            fh.write(text)
        written.append(path)

    if "text" in formats:
        put(f"{name}.txt", report_text(report))
    if "csv" in formats:
        rows = [(r.task, n, v, "" if t is None else t) for r in report.results for n, v, t in r.values]
        put(f"{name}.csv", _csv_text(("task", "parameter", "value", "tolerance"), rows))
        for r in report.results:
            for tname, (cols, trows) in r.tables.items():
                put(f"{name}_{r.task}_{tname}.csv", _csv_text(cols, trows))
    return written
