"""Grid discretization of test functions and numeric checks of the inequality.

Test functions live on an axis-aligned box split into cells; cells whose
centers fall outside the cone are masked. Integrals use the midpoint rule
and gradients use central differences, one-sided next to masked cells and
at the edges of the box.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import linregress

from .core import sample_cone_sphere, sphere_integral, sphere_rule
from .errors import (
    AssumptionViolation,
    BumpExitsCone,
    DimensionMismatch,
    NotApplicable,
    ResolutionInsufficient,
    SupportTouchesBoundary,
    ZeroGradient,
)
from .optimize import pattern_search

DEFAULT_RESOLUTION = {2: 256, 3: 96}
NEGLIGIBLE = 1e-6


# ---------------------------------------------------------------------------
# grid functions
# ---------------------------------------------------------------------------


@dataclass
class GridFunction:
    """Cell-centered samples of a function on a box, masked outside a cone.

    Attributes
    ----------
    lower, upper : ndarray
        Box corners.
    values : ndarray
        Array of shape ``resolution``; masked cells hold NaN.
    """

    lower: np.ndarray
    upper: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != self.lower.size or self.upper.size != self.lower.size:
            raise DimensionMismatch("box and value array dimensions differ")
        if np.any(self.upper <= self.lower):
            raise ValueError("empty box")

    @property
    def n(self):
        return self.lower.size

    @property
    def resolution(self):
        return self.values.shape

    @property
    def spacing(self):
        return (self.upper - self.lower) / np.asarray(self.resolution)

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    @property
    def mask(self):
        """True on active cells."""
        return ~np.isnan(self.values)

    def axes(self):
        h = self.spacing
        return [self.lower[i] + (np.arange(m) + 0.5) * h[i] for i, m in enumerate(self.resolution)]

    def centers(self):
        """Cell centers, shape ``resolution + (n,)``."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack(mesh, axis=-1)

    @classmethod
    def from_callable(cls, f, lower, upper, resolution, cone=None):
        """Sample ``f`` (mapping ``(..., n)`` points to values) at cell centers."""
        lower = np.asarray(lower, dtype=float)
        res = tuple(int(r) for r in np.broadcast_to(resolution, lower.shape))
        blank = cls(lower, upper, np.zeros(res))
        x = blank.centers()
        active = np.ones(res, dtype=bool) if cone is None else cone.contains(x)
        vals = np.full(res, np.nan)
        if np.any(active):
            vals[active] = np.asarray(f(x[active]), dtype=float)
        return cls(lower, upper, vals)

    def scaled(self, c):
        return GridFunction(self.lower, self.upper, c * self.values)

    def to_text(self):
        """Header line with dimension, box and resolution, then one value per line (row-major)."""
        box = ",".join(f"{a!r},{b!r}" for a, b in zip(self.lower.tolist(), self.upper.tolist()))
        res = ",".join(str(r) for r in self.resolution)
        lines = [f"gridfunction n={self.n} box={box} resolution={res}"]
        lines += ["nan" if v != v else repr(float(v)) for v in self.values.ravel()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = text.strip().splitlines()
        head = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
        n = int(head["n"])
        box = [float(t) for t in head["box"].split(",")]
        res = tuple(int(t) for t in head["resolution"].split(","))
        if len(box) != 2 * n or len(res) != n:
            raise DimensionMismatch("header dimensions are inconsistent")
        vals = np.array([float(t) for t in lines[1:]])
        if vals.size != int(np.prod(res)):
            raise DimensionMismatch(f"expected {np.prod(res)} values, found {vals.size}")
        return cls(box[0::2], box[1::2], vals.reshape(res))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_text(fh.read())


def _shifted(a, axis, k):
    """``a`` moved ``k`` cells along ``axis``, NaN where nothing moved in."""
    out = np.full(a.shape, np.nan)
    src, dst = [slice(None)] * a.ndim, [slice(None)] * a.ndim
    if k > 0:
        src[axis], dst[axis] = slice(0, -k), slice(k, None)
    else:
        src[axis], dst[axis] = slice(-k, None), slice(0, k)
    out[tuple(dst)] = a[tuple(src)]
    return out


def _with_ghosts(v):
    """Pad by one cell and fill masked cells next to active ones by linear extrapolation.

    Two sweeps: the first reaches cells sharing a face with an active cell,
    the second the diagonal ones. Each estimate is ``2 a1 - a2`` along an
    axis, or ``a1`` when the second cell is missing; estimates are averaged.
    """
    w = np.pad(v, 1, constant_values=np.nan)
    for _ in range(2):
        missing = np.isnan(w)
        if not missing.any():
            break
        acc, cnt = np.zeros(w.shape), np.zeros(w.shape)
        for axis in range(w.ndim):
            for k in (1, -1):
                a1, a2 = _shifted(w, axis, k), _shifted(w, axis, 2 * k)
                est = np.where(np.isnan(a2), a1, 2 * a1 - a2)
                ok = ~np.isnan(est)
                acc += np.where(ok, est, 0.0)
                cnt += ok
        w = np.where(missing & (cnt > 0), acc / np.maximum(cnt, 1), w)
    return np.nan_to_num(w)


def gradient_power(u, p):
    """Cell averages of ``|grad u|^p`` from the bilinear gradient at cell corners.

    At each corner the gradient is the average of the differences across
    the ``2^n`` cells meeting there, which is exact for linear ``u``. Each
    cell then averages ``|grad u|^p`` over its ``2^n`` corners. Unlike
    central differences this does not flatten a peak that is only a few
    cells wide. Masked neighbours are linear ghost values. NaN on masked
    cells.
    """
    v = u.values
    n = u.n
    w = _with_ghosts(v)
    comps = []
    for i, h in enumerate(u.spacing):
        d = 0.0
        for offs in itertools.product((0, 1), repeat=n - 1):
            hi, lo = [], []
            rest = iter(offs)
            for ax in range(n):
                if ax == i:
                    hi.append(slice(1, None))
                    lo.append(slice(0, -1))
                else:
                    o = next(rest)
                    sl = slice(o, w.shape[ax] - 1 + o)
                    hi.append(sl)
                    lo.append(sl)
            d = d + (w[tuple(hi)] - w[tuple(lo)])
        comps.append(d / (2 ** (n - 1) * h))
    corner = np.sqrt(sum(c * c for c in comps)) ** p
    out = 0.0
    for offs in itertools.product((0, 1), repeat=n):
        out = out + corner[tuple(slice(o, o + m) for o, m in zip(offs, v.shape))]
    out = out / 2**n
    out[~u.mask] = np.nan
    return out


def _outer_ring(u, cone):
    """Active cells on the box edge whose outer neighbour would lie inside the cone."""
    ring = np.zeros(u.resolution, dtype=bool)
    x = u.centers()
    for i, h in enumerate(u.spacing):
        for side, k in ((-1.0, 0), (1.0, u.resolution[i] - 1)):
            idx = tuple(k if j == i else slice(None) for j in range(u.n))
            pts = x[idx].copy()
            pts[..., i] += side * h
            open_side = np.ones(pts.shape[:-1], bool) if cone is None else cone.contains(pts)
            ring[idx] |= open_side
    return ring & u.mask


def _check_support(u, cone):
    vals = np.abs(np.nan_to_num(u.values))
    top = vals.max() if vals.size else 0.0
    if top > 0 and np.any(vals[_outer_ring(u, cone)] > NEGLIGIBLE * top):
        warnings.warn("support_touches_boundary: function is not negligible on the outer ring of the box",
                      SupportTouchesBoundary, stacklevel=3)


def _weight_on(u, w):
    x = u.centers()[u.mask]
    with np.errstate(all="ignore"):
        return np.asarray(w.value(x), dtype=float)


def weighted_lq_norm(u, omega, q):
    """``(sum |u|^q omega dV)^{1/q}`` over the active cells."""
    if not q > 0:
        raise ValueError("q must be positive")
    vals = np.abs(u.values[u.mask])
    return float(np.sum(vals**q * _weight_on(u, omega)) * u.cell_volume) ** (1.0 / q)


def weighted_grad_lp_norm(u, sigma, p, cone=None):
    """``(sum |grad u|^p sigma dV)^{1/p}`` with :func:`gradient_power`.

    Warns with :class:`SupportTouchesBoundary` if ``u`` is not negligible on
    the outer ring of the box (box faces lying on the cone boundary are
    exempt, since test functions need not vanish there).
    """
    if not p >= 1:
        raise ValueError("p must be at least 1")
    _check_support(u, cone)
    g = gradient_power(u, p)[u.mask]
    return float(np.sum(g * _weight_on(u, sigma)) * u.cell_volume) ** (1.0 / p)


def sobolev_quotient(u, omega, sigma, exps, cone=None):
    """``||u||_{L^q_omega} / ||grad u||_{L^p_sigma}`` with ``q`` taken from ``exps``."""
    den = weighted_grad_lp_norm(u, sigma, exps.p, cone)
    if den == 0:
        raise ZeroGradient("gradient norm vanishes")
    return weighted_lq_norm(u, omega, exps.q) / den


def rayleigh_quotient(u, omega, sigma, cone=None):
    """``int |grad u|^2 sigma / int u^2 omega``."""
    den = weighted_lq_norm(u, omega, 2.0) ** 2
    if den == 0:
        raise ZeroDivisionError("u vanishes")
    return weighted_grad_lp_norm(u, sigma, 2.0, cone) ** 2 / den


# ---------------------------------------------------------------------------
# quotient maximization
# ---------------------------------------------------------------------------


def _cone_directions(cone):
    if cone.n in (2, 3):
        return np.asarray(sphere_rule(cone)[0])
    return sample_cone_sphere(cone, 20_000, 0)


def default_box(cone, scale=1.0):
    """Smallest box containing ``scale * (B cap E)`` (estimated from sphere nodes)."""
    if not cone.normals:
        return -scale * np.ones(cone.n), scale * np.ones(cone.n)
    d = _cone_directions(cone)
    lo = np.minimum(0.0, d.min(axis=0))
    hi = np.maximum(0.0, d.max(axis=0))
    if cone.kind == "orthant":
        mask = np.asarray(cone.params, bool)
        lo[mask], hi[~mask], lo[~mask] = 0.0, 1.0, -1.0
    return scale * lo, scale * hi


def _exit_radius(center, lower, upper, cone):
    """Radius of a ball about ``center`` whose part inside the cone stays in the box."""
    center = np.asarray(center, float)
    if np.all(center == 0) and cone.normals:
        d = _cone_directions(cone)
        with np.errstate(divide="ignore"):
            t = np.where(d > 0, upper / np.where(d > 0, d, 1), np.where(d < 0, lower / np.where(d < 0, d, 1), np.inf))
        return float(np.min(t))
    return float(min(np.min(center - lower), np.min(upper - center)))


def _smooth_step(x):
    """C-infinity step: 0 for ``x <= 0``, 1 for ``x >= 1``."""
    x = np.asarray(x, float)
    a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1)), 0.0)
    b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1 - x, 1)), 0.0)
    return a / (a + b)


def _smooth_step_deriv(x):
    x = np.asarray(x, float)
    inside = (x > 0) & (x < 1)
    xs = np.where(inside, x, 0.5)
    a, b = np.exp(-1 / xs), np.exp(-1 / (1 - xs))
    d = (a / xs**2 * b + a * b / (1 - xs) ** 2) / (a + b) ** 2
    return np.where(inside, d, 0.0)


def talenti_profile(x, gamma, shift, p, n, alpha, radius):
    """Extremal profile ``(gamma + |x + shift|^{p'})^{-(n+alpha-p)/p}`` lowered to vanish at ``radius``."""
    pc = p / (p - 1)
    k = (n + alpha - p) / p
    r = np.linalg.norm(x + shift, axis=-1)
    return np.maximum((gamma + r**pc) ** (-k) - (gamma + radius**pc) ** (-k), 0.0)


def smoothed_cap(x, radius, smoothing, center):
    """Piecewise-linear ramp from 1 to 0 across ``radius +- smoothing/2``."""
    r = np.linalg.norm(x - center, axis=-1)
    return np.clip((radius - r) / smoothing + 0.5, 0.0, 1.0)


def gaussian_bump(x, center, width, cutoff=4.0):
    """Gaussian lowered so that it vanishes ``cutoff`` widths from its center."""
    d2 = np.sum((x - center) ** 2, axis=-1) / width**2
    return np.maximum(np.exp(-0.5 * d2) - math.exp(-0.5 * cutoff**2), 0.0)


@dataclass
class QuotientSearch:
    """Outcome of :func:`maximize_quotient`; ``quotient`` is a lower bound for the best constant."""

    family: str
    quotient: float
    params: dict
    evaluations: int
    history: list = field(default_factory=list)


def maximize_quotient(family, omega, sigma, exps, cone, resolution=None, budget=40, box=None, start=None):
    """Maximize the Sobolev quotient over a parametric family on a fixed grid.

    Parameters
    ----------
    family : {'talenti', 'gaussian_bump', 'smoothed_cap'}
        ``talenti`` varies the scale ``gamma`` of the extremal profile (shift
        kept at ``start["shift"]``, default 0) with the profile scale
        ``gamma^{1/p'}`` at least two cells; ``gaussian_bump`` varies the
        center and width; ``smoothed_cap`` varies radius and ramp width with
        the cap centered at the vertex. Ramps are never narrower than two
        cells.
    budget : int
        Number of quotient evaluations.
    box : (lower, upper), optional
        Defaults to the bounding box of the unit ball inside the cone.
    start : dict, optional
        Initial parameters.

    Returns
    -------
    QuotientSearch
    """
    n = cone.n
    if resolution is None:
        if n not in DEFAULT_RESOLUTION:
            raise NotApplicable("grid verification needs an explicit resolution for n > 3")
        resolution = DEFAULT_RESOLUTION[n]
    lower, upper = default_box(cone) if box is None else (np.asarray(box[0], float), np.asarray(box[1], float))
    blank = GridFunction(lower, upper, np.zeros(np.broadcast_to(resolution, (n,))))
    x = blank.centers()
    active = cone.contains(x)
    pts = x[active]
    hmax = float(blank.spacing.max())
    start = dict(start or {})

    def quotient(vals):
        full = np.full(blank.resolution, np.nan)
        full[active] = vals
        u = GridFunction(lower, upper, full)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SupportTouchesBoundary)
            try:
                return sobolev_quotient(u, omega, sigma, exps, cone)
            except ZeroGradient:
                return math.nan

    if family == "talenti":
        if exps.p == 1:
            raise NotApplicable("talenti family needs p > 1")
        shift = np.asarray(start.get("shift", np.zeros(n)), float)
        R = _exit_radius(-shift, lower, upper, cone) - 2 * hmax
        pc = exps.p / (exps.p - 1)
        # the profile's length scale gamma^{1/p'} spans at least two cells
        gmin = (2 * hmax) ** pc

        def build(z):
            return {"gamma": float(max(gmin, math.exp(z[0]))), "shift": shift.tolist(), "radius": R}

        def f(z):
            prm = build(z)
            return quotient(talenti_profile(pts, prm["gamma"], shift, exps.p, n, exps.alpha, R))

        z0 = [math.log(start.get("gamma", (0.15 * R) ** pc))]
        steps = 0.5 * pc
    elif family == "smoothed_cap":
        center = np.zeros(n)
        R = _exit_radius(center, lower, upper, cone) - hmax

        def build(z):
            s = max(2 * hmax, math.exp(z[1]))
            return {"radius": float(R / (1 + math.exp(-z[0]))), "smoothing": float(s)}

        def f(z):
            prm = build(z)
            if prm["radius"] + prm["smoothing"] / 2 > R or prm["radius"] <= prm["smoothing"] / 2:
                return math.nan
            return quotient(smoothed_cap(pts, prm["radius"], prm["smoothing"], center))

        r0 = start.get("radius", 0.9 * R)
        z0 = [math.log(r0 / (R - r0)), math.log(start.get("smoothing", 2 * hmax))]
        steps = [0.5, 0.5]
    elif family == "gaussian_bump":
        encode, decode = cone.face_coordinates()
        c0 = np.asarray(start.get("center", 0.5 * cone.interior_direction()), float)

        def build(z):
            return {"center": decode(z[:n]).tolist(), "width": float(math.exp(z[n]))}

        def f(z):
            prm = build(z)
            c, w = np.asarray(prm["center"]), prm["width"]
            if w < 2 * hmax or np.any(c - 4 * w < lower) or np.any(c + 4 * w > upper):
                return math.nan
            return quotient(gaussian_bump(pts, c, w))

        z0 = list(encode(c0)) + [math.log(start.get("width", 0.1))]
        steps = 0.25
    else:
        raise ValueError(f"unknown family {family!r}")

    res = pattern_search(f, z0, steps, max_iter=10_000, max_evals=budget, maximize=True)
    return QuotientSearch(family, float(res.fun), build(res.x), int(res.nfev), list(res.history))


# ---------------------------------------------------------------------------
# necessity probes
# ---------------------------------------------------------------------------


@dataclass
class ProbeResult:
    """Measured quotients along a parameter sweep and the fitted log-log slope."""

    parameters: list
    quotients: list
    slope: float
    slope_stderr: float
    predicted: float
    extra: dict = field(default_factory=dict)


def _fit_tail(x, y):
    """Least-squares slope on the last half of the points (at least three)."""
    k = max(3, math.ceil(len(x) / 2))
    fit = linregress(np.asarray(x[-k:]), np.asarray(y[-k:]))
    return float(fit.slope), float(fit.stderr)


def _check_sweep(vals, name):
    vals = [float(v) for v in vals]
    if len(vals) < 4:
        raise ValueError(f"{name} list needs at least 4 values for a slope fit")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValueError(f"{name} list must be strictly increasing")
    return vals


def _bump(z):
    r2 = np.sum(z * z, axis=-1)
    inside = r2 < 1
    out = np.zeros(r2.shape)
    out[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
    return out


def necessity_probe_shift(omega, sigma, exps, cone, direction, deltas, resolution=None):
    """Quotient of a fixed bump translated to ``delta * direction``.

    For large ``delta`` the quotient scales like ``delta^(tau/q - alpha/p)``;
    a positive slope shows that no constant can work.

    Parameters
    ----------
    exps : ExponentSet
        May come from :func:`derive_exponents` (no admissibility check).
    direction : array_like
        Unit vector inside the cone.
    deltas : sequence of float
        Strictly increasing, at least four values.

    Raises
    ------
    BumpExitsCone
        If the unit ball about ``deltas[0] * direction`` leaves the cone.
    """
    deltas = _check_sweep(deltas, "delta")
    y0 = np.asarray(direction, float)
    y0 = y0 / np.linalg.norm(y0)
    n = cone.n
    dist = math.inf if not cone.normals else float(np.min(cone.normal_array @ y0))
    if not cone.contains(y0) or deltas[0] * dist <= 1:
        raise BumpExitsCone(f"unit ball about {deltas[0]} * y0 leaves the cone")
    if resolution is None:
        resolution = 96 if n == 2 else 40
    local = GridFunction(-np.ones(n), np.ones(n), np.zeros((resolution,) * n))
    z = local.centers()
    vals = _bump(z)
    g = gradient_power(GridFunction(local.lower, local.upper, vals), exps.p)
    support = (vals > 0) | (g > 0)
    zs, vs, gs = z[support], vals[support], g[support]
    dV = local.cell_volume
    quots = []
    for d in deltas:
        x = d * y0 + zs
        lhs = np.sum(vs**exps.q * omega.value(x)) * dV
        rhs = np.sum(gs * sigma.value(x)) * dV
        quots.append(lhs ** (1 / exps.q) / rhs ** (1 / exps.p))
    slope, err = _fit_tail(np.log(deltas), np.log(quots))
    return ProbeResult(deltas, quots, slope, err, exps.tau / exps.q - exps.alpha / exps.p)


def _log_probe_integrals(exps, L, nodes_per_unit):
    """Radial integrals of ``|u|^q`` and ``|u'|^p`` for the logarithmic family, in ``s = log t``.

    ``L = log(1/eps)``; working with ``L`` keeps tiny ``eps`` representable.
    """
    beta = (exps.tau + exps.n) / exps.q
    s = np.linspace(-L, math.log(2.0), int(nodes_per_unit * (L + math.log(2.0))) + 1)
    t_eps = np.exp(np.minimum(s + L, 4.0))  # t / eps, capped where phi is already flat
    t = np.exp(s)
    Phi, dPhi = _smooth_step(t_eps - 1), _smooth_step_deriv(t_eps - 1)
    H, dH = 1 - _smooth_step(t - 1), -_smooth_step_deriv(t - 1)
    u = s * Phi * H  # u * t^beta
    du = -beta * s * Phi * H + Phi * H + s * dPhi * t_eps * H + s * Phi * dH * t  # u' * t^(beta+1)
    left = np.abs(u) ** exps.q * np.exp(s * (-beta * exps.q + exps.tau + exps.n))
    right = np.abs(du) ** exps.p * np.exp(s * (-(beta + 1) * exps.p + exps.alpha + exps.n))
    return trapezoid(left, s), trapezoid(right, s)


def necessity_probe_log(exps, cone, epsilons=None, omega=None, sigma=None, log_inverse=None,
                        nodes_per_unit=32, max_nodes=2_000_000):
    """Logarithmic test functions concentrating at the vertex.

    ``u_eps(x) = |x|^{-beta} log|x| phi(|x|/eps) h(|x|)`` with
    ``beta = (tau+n)/q``, supported in ``eps <= |x| <= 2``. The weighted
    norms reduce to one-dimensional integrals in ``log |x|`` times angular
    factors. As ``L = log(1/eps)`` grows, the left norm grows like
    ``L^(1+1/q)`` and the gradient norm like ``L^(1+1/p)``, so the quotient
    is unbounded exactly when ``q < p``.

    Parameters
    ----------
    epsilons : sequence of float, optional
        Values in ``(0, 1/2)``.
    log_inverse : sequence of float, optional
        The same sweep given as ``L = log(1/eps)``, for ``eps`` below the
        floating-point range. Exactly one of the two must be given.
    omega, sigma : Weight, optional
        Supply the angular factors; they do not affect the exponents.

    Returns
    -------
    ProbeResult
        ``parameters`` are the ``L`` values in increasing order, ``quotients``
        the quotients, ``slope`` the fitted exponent of the quotient in ``L``
        and ``predicted = 1/q - 1/p``. ``extra`` holds the fitted exponents of
        both sides and a ``diverges`` flag.

    Raises
    ------
    ResolutionInsufficient
        If the quadrature would need more than ``max_nodes`` nodes or the
        inner transition ring gets fewer than eight.
    """
    if (epsilons is None) == (log_inverse is None):
        raise ValueError("give exactly one of epsilons and log_inverse")
    if epsilons is not None:
        if any(not 0 < e < 0.5 for e in epsilons):
            raise ValueError("epsilons must lie in (0, 1/2)")
        log_inverse = [-math.log(e) for e in epsilons]
    L = sorted(float(v) for v in log_inverse)
    if any(v <= math.log(2) for v in L):
        raise ValueError("epsilons must lie in (0, 1/2)")
    L = _check_sweep(L, "epsilon")
    if nodes_per_unit * math.log(2) < 8 or nodes_per_unit * (L[-1] + math.log(2)) > max_nodes:
        raise ResolutionInsufficient("quadrature cannot resolve the ring eps <= |x| <= 2")
    ang_w = 1.0 if omega is None else sphere_integral(cone, omega.value)
    ang_s = 1.0 if sigma is None else sphere_integral(cone, sigma.value)
    lefts, rights = [], []
    for v in L:
        a, b = _log_probe_integrals(exps, v, nodes_per_unit)
        lefts.append((ang_w * a) ** (1 / exps.q))
        rights.append((ang_s * b) ** (1 / exps.p))
    quots = [a / b for a, b in zip(lefts, rights)]
    lx = np.log(L)
    left_exp, _ = _fit_tail(lx, np.log(lefts))
    right_exp, _ = _fit_tail(lx, np.log(rights))
    slope, err = _fit_tail(lx, np.log(quots))
    extra = {
        "left_exponent": left_exp,
        "right_exponent": right_exp,
        "expected_left": 1 + 1 / exps.q,
        "expected_right": 1 + 1 / exps.p,
        "diverges": bool(slope > 0.02),
    }
    return ProbeResult(L, quots, slope, err, 1 / exps.q - 1 / exps.p, extra)


# ---------------------------------------------------------------------------
# spectral gap
# ---------------------------------------------------------------------------


def spectral_gap_bound(omega, sigma, c0, exps, cone, centers, widths=(0.4, 0.2, 0.1, 0.05, 0.025),
                       domain=None, resolution=48, full_output=False):
    """Lower bound for eigenvalues of ``-div(sigma grad u) = lambda omega u``.

    Evaluates ``(int v w^{-1/2} s^{1/2})^2 / (int v |y|^2 int v)`` for
    compactly supported bumps ``v`` about each center and width, and
    returns ``1/(4 C0^2)`` times the largest value found. As a bump
    concentrates at ``y0`` the ratio tends to ``s(y0) / (w(y0) |y0|^2)``.

    Parameters
    ----------
    centers : array_like
        Bump centers inside the cone (and inside ``domain`` if given).
    widths : sequence of float
        Bump radii; each is clipped so the bump stays inside the cone and
        the domain.
    domain : (lower, upper), optional
        Box containing the bumps.

    Raises
    ------
    AssumptionViolation
        Unless ``alpha = tau + 2``.
    """
    if abs(exps.alpha - exps.tau - 2) > 1e-12:
        raise AssumptionViolation("alpha = tau + 2")
    if not c0 > 0:
        raise ValueError("C0 must be positive")
    centers = np.atleast_2d(np.asarray(centers, float))
    n = cone.n
    local = GridFunction(-np.ones(n), np.ones(n), np.zeros((resolution,) * n)).centers().reshape(-1, n)
    v0 = _bump(local)
    keep = v0 > 0
    local, v0 = local[keep], v0[keep]
    best, arg = -math.inf, None
    for c in centers:
        if not cone.contains(c):
            raise BumpExitsCone("bump center outside the cone")
        room = math.inf if not cone.normals else float(np.min(cone.normal_array @ c))
        if domain is not None:
            room = min(room, float(np.min(c - domain[0])), float(np.min(domain[1] - c)))
        for w in widths:
            w = min(w, 0.999 * room)
            y = c + w * local
            with np.errstate(all="ignore"):
                h = np.exp(0.5 * (sigma.log_value(y) - omega.log_value(y)))
            num = np.sum(v0 * h) ** 2
            den = np.sum(v0 * np.sum(y * y, axis=-1)) * np.sum(v0)
            val = num / den
            if val > best:
                best, arg = val, (c.tolist(), w)
    bound = float(best / (4 * c0**2))
    if full_output:
        return bound, {"ratio": float(best), "center": arg[0], "width": float(arg[1])}
    return bound
