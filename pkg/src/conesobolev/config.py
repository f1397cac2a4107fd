"""Scenario configuration files.

A scenario is an INI file with a required ``[scenario]`` section and an
optional ``[knobs]`` section::

    [scenario]
    name = heisenberg
    cone = orthant(0, 1)
    n = 2
    p = 2
    tau = 0
    alpha = 1
    omega = 1
    sigma = x2^1
    tasks = validate, k0, heisenberg

    [knobs]
    seed = 0
    samples = 100000
    grid = 256
    budget = 200

Cones: ``full_space``, ``orthant`` (all coordinates positive),
``orthant(1, 0, ...)`` (positive where the mask is 1), ``halfspaces((a, b),
...)`` (inward normals) and ``sector(a, b)`` (planar, angles in radians;
``pi`` may appear in numeric arguments).

Weights are products and powers of primitives: a positive number, a
coordinate ``x1 .. xn``, ``r`` (Euclidean norm), ``s`` (coordinate sum) and
``ml(t)`` (the degree-``t`` weight ``(x1...xn/(x1+...+xn))^{t/(n-1)}``).
Only ``*`` and ``^`` with numeric exponents are allowed. The exponent ``q``
is always derived from the balance condition and cannot be given.
"""

from __future__ import annotations

import ast
import configparser
import math
import re
from dataclasses import dataclass, fields

import numpy as np

from .core import (
    Constant,
    ConvexCone,
    MarcusLopes,
    Monomial,
    Power,
    Product,
    RadialPower,
    SumPower,
    derive_exponents,
    validate_exponents,
)
from .errors import ConfigError, RangeViolation

TASKS = (
    "validate",
    "check_c0",
    "check_c1",
    "k0",
    "sharp",
    "verify",
    "necessity",
    "spectral_gap",
    "ckn",
    "heisenberg",
    "transport",
)

SCENARIO_KEYS = ("name", "cone", "n", "p", "tau", "alpha", "omega", "sigma", "tasks",
                 "direction", "ckn_beta", "ckn_gamma")
KNOB_KEYS = ("seed", "samples", "grid", "budget")


@dataclass(frozen=True)
class Scenario:
    """A fully validated scenario description (strings kept in canonical form)."""

    name: str
    cone: str
    n: int
    p: float
    tau: float
    alpha: float
    omega: str
    sigma: str
    tasks: tuple = ()
    direction: tuple | None = None
    ckn_beta: float | None = None
    ckn_gamma: float | None = None
    seed: int = 0
    samples: int = 100_000
    grid: int | None = None
    budget: int = 200

    def build_cone(self):
        return parse_cone(self.cone, self.n)

    def build_weights(self):
        return parse_weight(self.omega, self.n), parse_weight(self.sigma, self.n)

    def raw_exponents(self):
        return derive_exponents(self.n, self.p, self.tau, self.alpha)

    def exponents(self):
        """Validated exponents; raises :class:`RangeViolation`."""
        return validate_exponents(self.n, self.p, self.tau, self.alpha)

    def with_knobs(self, **kw):
        vals = {f.name: getattr(self, f.name) for f in fields(self)}
        vals.update({k: v for k, v in kw.items() if v is not None})
        return Scenario(**vals)


# ---------------------------------------------------------------------------
# expression parsing
# ---------------------------------------------------------------------------


def _number(node):
    """Evaluate a numeric expression built from literals, ``pi`` and + - * /."""
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _number(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
        a, b = _number(node.left), _number(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if b == 0:
            raise ValueError("division by zero")
        return a / b
    raise ValueError(f"not a number: {ast.unparse(node)}")


def _parse_expr(text):
    try:
        return ast.parse(text.replace("^", "**"), mode="eval").body
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}") from exc


def parse_cone(text, n):
    """Build a :class:`ConvexCone` from its config spelling."""
    node = _parse_expr(text.strip())
    if isinstance(node, ast.Name):
        name, args = node.id, []
    elif isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        name, args = node.func.id, node.args
    else:
        raise ValueError(f"unknown cone {text!r}")
    if name == "full_space" and not args:
        return ConvexCone.full_space(n)
    if name == "orthant":
        if not args:
            return ConvexCone.orthant(n)
        mask = [bool(_number(a)) for a in args]
        if len(mask) != n:
            raise ValueError(f"orthant mask needs {n} entries")
        return ConvexCone.orthant(n, tuple(mask))
    if name == "halfspaces" and args:
        normals = []
        for a in args:
            if not isinstance(a, ast.Tuple):
                raise ValueError("halfspaces takes tuples of normal components")
            normals.append(tuple(_number(e) for e in a.elts))
        if any(len(v) != n for v in normals):
            raise ValueError(f"normals must have {n} components")
        return ConvexCone.halfspaces(normals)
    if name == "sector" and len(args) == 2:
        if n != 2:
            raise ValueError("sector cones are planar")
        return ConvexCone.sector(_number(args[0]), _number(args[1]))
    raise ValueError(f"unknown cone {text!r}")


def parse_weight(text, n):
    """Build a weight from the ``*``/``^`` grammar over primitive families."""

    def build(node):
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Mult):
            left, right = build(node.left), build(node.right)
            if isinstance(left, Monomial) and isinstance(right, Monomial):
                return Monomial(tuple(a + b for a, b in zip(left.exponents, right.exponents)))
            return left * right
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            base = build(node.left)
            a = _number(node.right)
            if isinstance(base, Constant):
                return Constant(base.c**a)
            if isinstance(base, Monomial):
                return Monomial(tuple(a * e for e in base.exponents))
            if isinstance(base, RadialPower):
                return RadialPower(a * base.t)
            if isinstance(base, SumPower):
                return SumPower(a * base.t)
            if isinstance(base, MarcusLopes):
                return MarcusLopes(a * base.t)
            return Power(base, a)
        if isinstance(node, ast.Name):
            m = re.fullmatch(r"x(\d+)", node.id)
            if m:
                i = int(m.group(1))
                if not 1 <= i <= n:
                    raise ValueError(f"coordinate {node.id} outside dimension {n}")
                e = [0.0] * n
                e[i - 1] = 1.0
                return Monomial(tuple(e))
            if node.id == "r":
                return RadialPower(1.0)
            if node.id == "s":
                return SumPower(1.0)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "ml":
            if len(node.args) != 1 or node.keywords:
                raise ValueError("ml takes one degree argument")
            return MarcusLopes(_number(node.args[0]))
        try:
            c = _number(node)
        except ValueError:
            raise ValueError(f"unsupported weight expression {ast.unparse(node)!r}") from None
        if not c > 0:
            raise ValueError("constant weights must be positive")
        return Constant(c)

    return build(_parse_expr(text.strip()))


def monomial_exponents(w, n):
    """Exponent vector if ``w`` is a constant multiple of a monomial, else ``None``."""
    if isinstance(w, Constant):
        return np.zeros(n)
    if isinstance(w, Monomial):
        return np.asarray(w.exponents, float)
    if isinstance(w, Product):
        parts = [monomial_exponents(f, n) for f in w.factors]
        return None if any(p is None for p in parts) else np.sum(parts, axis=0)
    if isinstance(w, Power):
        base = monomial_exponents(w.base, n)
        return None if base is None else w.a * base
    return None


# ---------------------------------------------------------------------------
# config files
# ---------------------------------------------------------------------------


def _key_lines(text):
    """Map ``(section, key)`` to its 1-based line number."""
    out, section = {}, None
    for k, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.fullmatch(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip()
            continue
        m = re.match(r"([^=:#;\s][^=:]*?)\s*[=:]", s)
        if m and section is not None:
            out.setdefault((section, m.group(1).strip().lower()), k)
    return out


def _float_tuple(text):
    node = _parse_expr(text if text.strip().startswith("(") else f"({text},)")
    if not isinstance(node, ast.Tuple):
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(_number(e) for e in node.elts)


def parse_config(text):
    """Parse and validate a scenario file.

    Raises
    ------
    ConfigError
        ``parse_error`` for malformed files or values, ``unknown_key`` for keys
        or sections outside the grammar (including ``q``), ``invalid_family``
        for cones or weights outside the families; with line numbers when
        known.
    """
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        raise ConfigError("parse_error", str(exc).splitlines()[0], lineno) from None
    lines = _key_lines(text)
    for section in cp.sections():
        if section not in ("scenario", "knobs"):
            raise ConfigError("unknown_key", f"unknown section [{section}]", _section_line(text, section))
        allowed = SCENARIO_KEYS if section == "scenario" else KNOB_KEYS
        for key in cp[section]:
            if key not in allowed:
                hint = " (q is derived from the balance condition)" if key == "q" else ""
                raise ConfigError("unknown_key", f"unknown key {key!r}{hint}", lines.get((section, key)))
    if "scenario" not in cp:
        raise ConfigError("parse_error", "missing [scenario] section", None)
    sc = cp["scenario"]

    def get(section, key, conv, default=None, required=False):
        if section not in cp or key not in cp[section]:
            if required:
                raise ConfigError("parse_error", f"missing key {key!r}", None)
            return default
        raw = cp[section][key]
        try:
            return conv(raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError("parse_error", f"bad value for {key!r}: {exc}", lines.get((section, key))) from None

    def integer(raw):
        v = float(raw)
        if v != int(v):
            raise ValueError("expected an integer")
        return int(v)

    def number(raw):
        return _number(_parse_expr(raw))

    name = get("scenario", "name", str.strip, required=True)
    n = get("scenario", "n", integer, required=True)
    p = get("scenario", "p", number, required=True)
    tau = get("scenario", "tau", number, required=True)
    alpha = get("scenario", "alpha", number, required=True)
    if n < 1:
        raise ConfigError("invalid_value", "n must be positive", lines.get(("scenario", "n")))
    cone = " ".join(sc.get("cone", "full_space").split())
    try:
        parse_cone(cone, n)
    except Exception as exc:
        raise ConfigError("invalid_family", f"cone: {exc}", lines.get(("scenario", "cone"))) from None
    weights = {}
    for key in ("omega", "sigma"):
        raw = " ".join(sc.get(key, "1").split())
        try:
            parse_weight(raw, n)
        except Exception as exc:
            raise ConfigError("invalid_family", f"{key}: {exc}", lines.get(("scenario", key))) from None
        weights[key] = raw
    tasks = tuple(t.strip() for t in sc.get("tasks", "").split(",") if t.strip())
    for t in tasks:
        if t not in TASKS:
            raise ConfigError("invalid_value", f"unknown task {t!r}", lines.get(("scenario", "tasks")))
    direction = get("scenario", "direction", _float_tuple)
    if direction is not None and len(direction) != n:
        raise ConfigError("invalid_value", f"direction needs {n} components", lines.get(("scenario", "direction")))
    return Scenario(
        name=name,
        cone=cone,
        n=n,
        p=p,
        tau=tau,
        alpha=alpha,
        omega=weights["omega"],
        sigma=weights["sigma"],
        tasks=tasks,
        direction=direction,
        ckn_beta=get("scenario", "ckn_beta", number),
        ckn_gamma=get("scenario", "ckn_gamma", number),
        seed=get("knobs", "seed", integer, 0),
        samples=get("knobs", "samples", integer, 100_000),
        grid=get("knobs", "grid", integer),
        budget=get("knobs", "budget", integer, 200),
    )


def _section_line(text, section):
    for k, line in enumerate(text.splitlines(), 1):
        if line.strip() == f"[{section}]":
            return k
    return None


def load_config(path):
    with open(path) as fh:
        return parse_config(fh.read())


def emit_config(s):
    """Config text that :func:`parse_config` turns back into ``s``."""
    out = ["[scenario]", f"name = {s.name}", f"cone = {s.cone}", f"n = {s.n}"]
    out += [f"p = {s.p!r}", f"tau = {s.tau!r}", f"alpha = {s.alpha!r}"]
    out += [f"omega = {s.omega}", f"sigma = {s.sigma}", f"tasks = {', '.join(s.tasks)}"]
    if s.direction is not None:
        out.append("direction = " + ", ".join(repr(v) for v in s.direction))
    if s.ckn_beta is not None:
        out.append(f"ckn_beta = {s.ckn_beta!r}")
    if s.ckn_gamma is not None:
        out.append(f"ckn_gamma = {s.ckn_gamma!r}")
    out += ["", "[knobs]", f"seed = {s.seed}", f"samples = {s.samples}", f"budget = {s.budget}"]
    if s.grid is not None:
        out.append(f"grid = {s.grid}")
    return "\n".join(out) + "\n"


def check_scenario(s):
    """Validate exponents; returns ``(exps or None, error message or None)``."""
    try:
        return s.exponents(), None
    except RangeViolation as exc:
        return None, f"range violation: {exc.relation}"
