"""Sobolev and isoperimetric constants.

For ``p > 1`` a valid constant is

    K0 = P * inf_v (int v |y|^{p'})^{1/p'} / int v^{1-1/N} h,    int v = 1,

where, in the ``n_a > n`` branch, ``N = n_a``, ``h = w^{-1/q} s^{1/p}`` and
``P = max(C0 (1 - n/n_a), 1/n_a) * q (1/p' + 1/q)``; in the ``n_a = n``
branch ``N = n``, ``h = 1`` and ``P = (C1/n) q (1/p' + 1/q)``. Every single
density ``v`` gives a valid constant, so searching a parametric family only
tightens the bound.

Stationarity of the ratio shows that its minimizers have the form
``h^N (g + |y|^{p'})^{-N}``; the ``talenti`` family below contains them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betaln

from .conditions import monomial_c0
from .core import (
    Constant,
    ConvexCone,
    Monomial,
    Power,
    cone_ball_integral,
    sample_cone_sphere,
    sphere_integral,
    sphere_rule,
    validate_exponents,
)
from .errors import (
    AssumptionViolation,
    BranchMismatch,
    GammaDependence,
    NotApplicable,
    NotEqualWeights,
    QuadratureFailure,
    RangeViolation,
)
from .optimize import pattern_search

FAMILIES = ("talenti", "gaussian_bump", "uniform_cap")


@dataclass(frozen=True)
class TestDensity:
    """A member of one of the parametric density families.

    ``talenti``
        ``h(y)^a (gamma + |y + shift|^{p'})^{-kappa}``; ``params = (a, kappa, gamma)``.
    ``gaussian_bump``
        ``exp(-|y - center|^2 / (2 width^2))`` truncated at six widths;
        ``params = (width,)``.
    ``uniform_cap``
        ``h(y)^a`` on ``{|y| < radius}``; ``params = (a, radius)``.

    Densities are normalized numerically wherever a unit mass is needed.
    """

    __test__ = False  # not a pytest class

    kind: str
    params: tuple
    center: tuple | None = None

    def describe(self):
        vals = ", ".join(f"{v:.6g}" for v in self.params)
        extra = "" if self.center is None else " at (" + ", ".join(f"{c:.6g}" for c in self.center) + ")"
        return f"{self.kind}({vals}){extra}"


@dataclass
class ConstantResult:
    """A computed constant together with how it was obtained."""

    k0: float
    v_star: TestDensity | None
    quadrature_error: float
    formula_branch: str
    prefactor: float = math.nan
    inf_ratio: float = math.nan
    trace: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _branch(exps, branch):
    auto = "ii" if exps.na_equals_n else "i"
    if not exps.na_infinite and exps.n_a < exps.n and not exps.na_equals_n:
        raise BranchMismatch("n_a < n: no branch applies")
    if branch is None:
        return auto
    if branch not in ("i", "ii"):
        raise ValueError("branch must be 'i' or 'ii'")
    if branch != auto:
        raise BranchMismatch(f"branch {branch} requested but n_a = {exps.n_a} selects branch {auto}")
    return branch


def transport_prefactor(exps, constant, branch):
    """``max(C0 (1 - n/n_a), 1/n_a)`` in branch i and ``C1/n`` in branch ii.

    Raises :class:`BranchMismatch` when ``branch`` disagrees with whether
    ``n_a = n``. Exponents with ``n_a < n`` are accepted in branch i so that
    negative controls can evaluate the formula outside its hypotheses.
    """
    if branch not in ("i", "ii"):
        raise ValueError("branch must be 'i' or 'ii'")
    if (branch == "ii") != exps.na_equals_n:
        raise BranchMismatch(f"branch {branch} does not match n_a = {exps.n_a}, n = {exps.n}")
    if branch == "ii":
        return constant / exps.n
    return max(constant * (1.0 - exps.n * exps.inv_na), exps.inv_na)


class _Profile:
    """Angular data of the weight ``h`` used by the density families."""

    def __init__(self, omega, sigma, exps, cone, branch):
        self.exps = exps
        self.cone = cone
        self.n = cone.n
        self.pc = exps.p_conj
        if branch == "ii":
            self.N = float(exps.n)
            self.e = 1.0 - 1.0 / exps.n
            self.dh = 0.0
            self.loghw = lambda y: np.zeros(np.shape(y)[:-1])
        else:
            self.N = exps.n_a
            self.e = 1.0 - exps.inv_na
            self.dh = 1.0 - exps.n * exps.inv_na
            self.loghw = lambda y: sigma.log_value(y) / exps.p - omega.log_value(y) / exps.q
        self._cache = {}

    def log_sphere(self, b, check=True):
        """``log int_{S cap E} h^b`` or NaN if the integral looks divergent."""
        key = round(float(b), 12)
        if key in self._cache:
            return self._cache[key]
        f = lambda y: np.exp(b * self.loghw(y))
        if self.n in (2, 3):
            val = _rule_sum(self.cone, f, 1.0 / 16)
            if check:
                coarse = _rule_sum(self.cone, f, 1.0 / 8)
                if not np.isfinite(val) or abs(coarse - val) > 1e-4 * abs(val):
                    val = math.nan
        else:
            val = sphere_integral(self.cone, f)
        out = math.log(val) if val > 0 else math.nan
        self._cache[key] = out
        return out


def _rule_sum(cone, f, step):
    nodes, w = sphere_rule(cone, step)
    with np.errstate(all="ignore"):
        v = np.asarray(f(nodes)) * w
    return float(np.sum(np.where(np.isfinite(v), v, 0.0)))


def _log_talenti_radial(s, kappa, pc):
    """``log int_0^inf r^{s-1} (1 + r^{p'})^{-kappa} dr``."""
    a = s / pc
    b = kappa - a
    if a <= 0 or b <= 0:
        return math.nan
    return betaln(a, b) - math.log(pc)


def _talenti_log_ratio(prof, a, kappa):
    n, pc, dh, e = prof.n, prof.pc, prof.dh, prof.e
    b = a * e + 1.0
    Sa, Sb = prof.log_sphere(a), prof.log_sphere(b)
    logm = Sa + _log_talenti_radial(a * dh + n, kappa, pc)
    logA = Sa + _log_talenti_radial(a * dh + n + pc, kappa, pc)
    logB = Sb + _log_talenti_radial(b * dh + n, kappa * e, pc)
    return (logA - logm) / pc - (logB - e * logm)


def _cap_log_ratio(prof, a):
    n, pc, dh, e = prof.n, prof.pc, prof.dh, prof.e
    b = a * e + 1.0
    s0, s1, s2 = a * dh + n, a * dh + n + pc, b * dh + n
    if min(s0, s1, s2) <= 0:
        return math.nan
    Sa, Sb = prof.log_sphere(a), prof.log_sphere(b)
    logm = Sa - math.log(s0)
    logA = Sa - math.log(s1)
    logB = Sb - math.log(s2)
    return (logA - logm) / pc - (logB - e * logm)


def _face_distance(cone, c):
    if not cone.normals:
        return math.inf
    return float(np.min(cone.normal_array @ c))


def _bump_grid(center, width, res):
    n = len(center)
    offs = ((np.arange(res) + 0.5) / res * 12.0 - 6.0) * width
    mesh = np.meshgrid(*([offs] * n), indexing="ij")
    d = np.stack([m.ravel() for m in mesh], axis=-1)
    return center + d, np.exp(-0.5 * np.sum(d * d, axis=-1) / width**2), (12.0 * width / res) ** n


def _bump_log_moments(prof, center, width, res):
    pts, v, dV = _bump_grid(np.asarray(center, float), width, res)
    inside = prof.cone.contains(pts)
    v = np.where(inside, v, 0.0)
    with np.errstate(all="ignore"):
        hv = np.where(inside, np.exp(prof.loghw(pts)), 0.0)
    r = np.linalg.norm(pts, axis=-1)
    m = np.sum(v) * dV
    A = np.sum(v * r**prof.pc) * dV
    B = np.sum(v**prof.e * hv) * dV
    return m, A, B


def _bump_log_ratio(prof, center, width, res=48):
    m, A, B = _bump_log_moments(prof, center, width, res)
    if not (m > 0 and A > 0 and B > 0 and np.isfinite(B)):
        return math.nan
    return (math.log(A) - math.log(m)) / prof.pc - (math.log(B) - prof.e * math.log(m))


def _polar_log_moments(prof, vfun):
    """Moments of a general density by sphere rule times a radial DE rule."""
    from .core import _de_rule

    nodes, w = sphere_rule(prof.cone)
    s, sc, ws = _de_rule(1.0 / 16)
    r = s / sc  # maps (0, 1) onto (0, inf)
    wr = ws / sc**2
    m = A = B = 0.0
    for k in range(len(r)):
        y = nodes * r[k]
        with np.errstate(all="ignore"):
            v = vfun(y)
            hv = np.exp(prof.loghw(y))
            base = w * wr[k] * r[k] ** (prof.n - 1)
            terms = np.stack([v, v * r[k] ** prof.pc, v**prof.e * hv]) * base
        terms = np.where(np.isfinite(terms), terms, 0.0)
        m, A, B = m + terms[0].sum(), A + terms[1].sum(), B + terms[2].sum()
    return m, A, B


def density_moments(v, omega, sigma, exps, cone, branch=None):
    """Normalized moments of a test density.

    Returns ``(M, D)`` with ``M = (int v |y|^{p'} / int v)^{1/p'}`` and
    ``D = int v^{1-1/N} h / (int v)^{1-1/N}``; their quotient ``M/D`` is the
    ratio minimized by :func:`k0_general`. For ``p = 1``, ``M`` is the
    radius of the support of ``v`` (infinite for the ``talenti`` family).
    """
    branch = _branch(exps, branch)
    prof = _Profile(omega, sigma, exps, cone, branch)
    p1 = exps.p == 1
    if p1 and v.kind == "talenti":
        return math.inf, math.nan
    if v.kind == "gaussian_bump":
        center, width = np.asarray(v.center, float), v.params[0]
        if p1:
            prof.pc = 2.0  # unused moment; keeps the quadrature finite
        m, A, B = _bump_log_moments(prof, center, width, 64)
        M = float(np.linalg.norm(center) + 6 * width) if p1 else (A / m) ** (1 / prof.pc)
        return M, B / m**prof.e
    if v.kind == "talenti" and v.center is not None and np.any(np.asarray(v.center) != 0):
        a, kappa, gam = v.params
        shift = np.asarray(v.center, float)

        def vfun(y):
            return np.exp(a * prof.loghw(y)) * (gam + np.linalg.norm(y + shift, axis=-1) ** prof.pc) ** (-kappa)

        m, A, B = _polar_log_moments(prof, vfun)
        return (A / m) ** (1 / prof.pc), B / m**prof.e
    if v.kind == "talenti":
        a, kappa, gam = v.params
        # the ratio does not depend on gamma (dilation invariance)
        lr = _talenti_log_ratio(prof, a, kappa)
        n, pc, dh = prof.n, prof.pc, prof.dh
        Sa = prof.log_sphere(a)
        logm = Sa + _log_talenti_radial(a * dh + n, kappa, pc)
        logA = Sa + _log_talenti_radial(a * dh + n + pc, kappa, pc)
        M = math.exp((logA - logm) / pc) * gam ** (1 / pc)
        return M, M / math.exp(lr)
    if v.kind == "uniform_cap":
        a, radius = v.params
        n, pc, dh, e = prof.n, prof.pc, prof.dh, prof.e
        b = a * e + 1.0
        s0, s2 = a * dh + n, b * dh + n
        Sa, Sb = prof.log_sphere(a), prof.log_sphere(b)
        m = math.exp(Sa) * radius**s0 / s0
        B = math.exp(Sb) * radius**s2 / s2
        if p1:
            return float(radius), B / m**e
        s1 = s0 + pc
        A = math.exp(Sa) * radius**s1 / s1
        return (A / m) ** (1 / pc), B / m**e
    raise ValueError(f"unknown density family {v.kind!r}")


def _budget_split(budget, families):
    shares = {"talenti": 0.5, "gaussian_bump": 0.3, "uniform_cap": 0.2}
    total = sum(shares[f] for f in families)
    return {f: max(1, int(budget * shares[f] / total)) for f in families}


def _search_talenti(prof, evals, trace):
    N = prof.N
    starts = [(N, N), (0.0, N), (1.0, N + 2.0)] if math.isfinite(N) else [(2.0, 2.0 + prof.n), (0.0, 1.0 + prof.n)]

    def f(z):
        return _talenti_log_ratio(prof, z[0], z[1])

    x0 = next((s for s in starts if np.isfinite(f(np.array(s)))), None)
    if x0 is None:
        return math.nan, None
    res = pattern_search(f, x0, 0.25 * (1 + np.abs(np.array(x0))), max_iter=10_000,
                         max_evals=evals, maximize=False)
    trace.append(("talenti", res.nfev, res.fun))
    return res.fun, TestDensity("talenti", (float(res.x[0]), float(res.x[1]), 1.0))


def _search_cap(prof, evals, trace):
    f = lambda z: _cap_log_ratio(prof, z[0])
    a0 = prof.N if math.isfinite(prof.N) else 1.0
    if not np.isfinite(f(np.array([a0]))):
        a0 = 0.0
    res = pattern_search(f, [a0], 0.5 * (1 + abs(a0)), max_iter=10_000, max_evals=evals, maximize=False)
    trace.append(("uniform_cap", res.nfev, res.fun))
    return res.fun, TestDensity("uniform_cap", (float(res.x[0]), 1.0))


def _search_bump(prof, evals, trace):
    cone = prof.cone
    encode, decode = cone.face_coordinates()
    n = prof.n
    # start at the sampled sphere point where h is largest
    pts = sample_cone_sphere(cone, 2000, 12345)
    with np.errstate(all="ignore"):
        lh = prof.loghw(pts)
    lh = np.where(np.isfinite(lh), lh, -np.inf)
    c0 = pts[int(np.argmax(lh))] if prof.dh != 0 or np.any(lh != lh[0]) else cone.interior_direction()

    def params(z):
        c = decode(z[:n])
        nc = np.linalg.norm(c)
        if not nc > 0:
            return None, None
        c = c / nc
        dist = _face_distance(cone, c)
        if not (dist > 0 and cone.contains(c)) or z[n] > 0:
            return None, None
        return c, math.exp(z[n]) * min(dist, 1.0) / 6.0

    def f(z):
        c, w = params(z)
        if c is None:
            return math.nan
        return _bump_log_ratio(prof, c, w)

    z0 = np.concatenate([encode(c0), [0.0]])
    res = pattern_search(f, z0, 0.25, max_iter=10_000, max_evals=evals, maximize=False)
    c, w = params(res.x)
    trace.append(("gaussian_bump", res.nfev, res.fun))
    if c is None:
        return math.nan, None
    return res.fun, TestDensity("gaussian_bump", (float(w),), tuple(float(t) for t in c))


def k0_general(omega, sigma, exps, cone, condition_constant, families=FAMILIES, budget=200, branch=None):
    """Valid Sobolev constant for ``p > 1`` by searching density families.

    Parameters
    ----------
    condition_constant : float
        ``C0`` when ``n_a > n`` (branch ``'i'``), ``C1`` when ``n_a = n``
        (branch ``'ii'``).
    families : sequence of str
        Subset of ``('talenti', 'gaussian_bump', 'uniform_cap')``.
    budget : int
        Total number of ratio evaluations, shared between families in fixed
        proportions. The result is non-increasing in ``budget``.

    Raises
    ------
    NotApplicable
        If ``p = 1`` (use :func:`k0_p1`).
    BranchMismatch
        If ``branch`` disagrees with ``n_a``.
    QuadratureFailure
        If no family member has finite moments.
    """
    if exps.p <= 1:
        raise NotApplicable("k0_general needs p > 1; use k0_p1")
    branch = _branch(exps, branch)
    if not condition_constant > 0:
        raise ValueError("condition constant must be positive")
    for fam in families:
        if fam not in FAMILIES:
            raise ValueError(f"unknown family {fam!r}")
    prof = _Profile(omega, sigma, exps, cone, branch)
    pref = transport_prefactor(exps, condition_constant, branch) * exps.q * (1 - exps.inv_na)
    split = _budget_split(budget, families)
    searchers = {"talenti": _search_talenti, "gaussian_bump": _search_bump, "uniform_cap": _search_cap}
    trace = []
    best, best_v = math.inf, None
    for fam in families:
        val, v = searchers[fam](prof, split[fam], trace)
        if np.isfinite(val) and val < best:
            best, best_v = val, v
    if best_v is None:
        raise QuadratureFailure("no density in the families has finite moments")
    err = _quadrature_check(prof, best_v, best)
    ratio = math.exp(best)
    return ConstantResult(pref * ratio, best_v, err, f"transport, branch {branch}", pref, ratio, trace)


def _quadrature_check(prof, v, logval):
    """Relative change of the optimal ratio under a coarser rule."""
    if v.kind == "gaussian_bump":
        coarse = _bump_log_ratio(prof, np.asarray(v.center), v.params[0], 24)
        return abs(math.expm1(coarse - logval))
    if prof.n not in (2, 3):
        return math.nan
    coarse_prof = _Profile.__new__(_Profile)
    coarse_prof.__dict__.update(prof.__dict__)
    coarse_prof._cache = {}
    coarse_prof.log_sphere = lambda b, check=False: math.log(
        _rule_sum(prof.cone, lambda y: np.exp(b * prof.loghw(y)), 1.0 / 8)
    )
    if v.kind == "talenti":
        coarse = _talenti_log_ratio(coarse_prof, v.params[0], v.params[1])
    else:
        coarse = _cap_log_ratio(coarse_prof, v.params[0])
    return abs(math.expm1(coarse - logval))


def k0_p1(omega, sigma, exps, cone, condition_constant, branch=None):
    """Closed-form isoperimetric constant for ``p = 1``.

    Branch i: ``max(C0 (1 - n/n_a), 1/n_a) (int_{B cap E} w)^{1-1/n_a} / int_{B cap E} s``.
    Branch ii: ``(C1/n) (int_{B cap E} w)^{1-1/n} / int_{B cap E} w^{1-1/n}``.
    """
    if exps.p != 1:
        raise NotApplicable("k0_p1 needs p = 1")
    branch = _branch(exps, branch)
    pref = transport_prefactor(exps, condition_constant, branch)
    Iw, ew = cone_ball_integral(cone, omega, full_output=True)
    if branch == "i":
        expo = 1.0 - exps.inv_na
        Is, es = cone_ball_integral(cone, sigma, full_output=True)
    else:
        expo = 1.0 - 1.0 / exps.n
        Is, es = cone_ball_integral(cone, Power(omega, expo), full_output=True)
    k0 = pref * Iw**expo / Is
    err = expo * ew / Iw + es / Is
    return ConstantResult(k0, None, err, f"closed form, branch {branch}", pref, Iw**expo / Is)


def _check_equal(omega, sigma, cone):
    pts = sample_cone_sphere(cone, 256, 99)
    ratio = omega.value(pts) / sigma.value(pts)
    if not np.all(np.isfinite(ratio)) or np.ptp(ratio) > 1e-10 * np.max(np.abs(ratio)):
        raise NotEqualWeights("omega is not a constant multiple of sigma")


def k0_sharp_equal(sigma, exps, cone, omega=None, gamma=1.0):
    """Sharp constant for equal weights.

    For ``p = 1`` this is ``(1/n_a) (int_{B cap E} s)^{-1/n_a}``. For
    ``p > 1`` it is the Sobolev quotient of the extremal profile
    ``u_g(x) = (g + |x|^{p'})^{-(n+alpha-p)/p}`` written through the
    moments of ``u_g^q s``; it is evaluated at ``g = gamma`` and ``4 gamma``.

    Raises
    ------
    NotEqualWeights
        If ``omega`` is given and is not proportional to ``sigma``, or the
        exponents have ``tau != alpha``.
    GammaDependence
        If the two evaluations differ by more than ``1e-3`` relative.
    """
    if omega is not None:
        _check_equal(omega, sigma, cone)
    if abs(exps.tau - exps.alpha) > 1e-12:
        raise NotEqualWeights("equal weights need tau = alpha")
    n, p, a, na = exps.n, exps.p, exps.alpha, exps.n_a
    if p == 1:
        Is, err = cone_ball_integral(cone, sigma, full_output=True)
        return ConstantResult(Is ** (-1.0 / na) / na, None, err / Is / na, "sharp, p = 1")
    lS = math.log(sphere_integral(cone, sigma.value))
    vals = [_sob2(lS, n, p, a, na, exps.q, g) for g in (gamma, 4 * gamma)]
    rel = abs(vals[1] - vals[0]) / abs(vals[0])
    if rel > 1e-3:
        raise GammaDependence(f"sharp constant changes by {rel:.2e} between gamma values")
    return ConstantResult(vals[0], TestDensity("talenti", (0.0, 0.0, gamma)), rel, "sharp, p > 1")


def _sob2(lS, n, p, a, na, q, g):
    pc = p / (p - 1)
    k = (n + a - p) / p  # u = (g + r^{p'})^{-k}
    deg = a + n  # radial power of sigma times the volume element

    def logI(s, kap):
        # log int_0^inf r^{s-1} (g + r^{p'})^{-kap} dr
        return _log_talenti_radial(s, kap, pc) + (s / pc - kap) * math.log(g)

    l1 = lS + logI(deg + pc, q * k)
    l2 = lS + logI(deg, q * k)
    l3 = lS + logI(deg, q * (1 - 1 / na) * k)
    pref = p * (na - 1) / (na * (na - p))
    return pref * math.exp(l1 / pc + l2 / q - l3)


@dataclass(frozen=True)
class CKNParameters:
    r: float
    d: float
    tau: float
    alpha: float
    exps: object


def ckn_parameters(n, p, beta, gamma):
    """Exponents turning a radial-weight inequality into the cone setting.

    The target inequality has weights ``|x|^{gamma r}`` on the left and
    ``|x|^{beta p}`` on the right with ``1/r = 1/p + (beta - 1 - gamma)/n``.
    It follows from the cone inequality with ``tau = n(d-1) + gamma r d`` and
    ``alpha = (n-p)(d-1) + beta p d``; ``d`` is the smallest half-integer
    above ``max(1, (n-1)/K)``, ``K = n - 1 + beta + gamma r/p'``, which
    makes ``tau/p' + alpha/p`` positive.

    Raises
    ------
    AssumptionViolation
        Naming ``"1/r + gamma/n > 0"`` or ``"0 <= beta-gamma <= 1"``.
    """
    if not 0 <= beta - gamma <= 1:
        raise AssumptionViolation("0 <= beta-gamma <= 1")
    inv_r = 1.0 / p + (beta - 1.0 - gamma) / n
    if not inv_r + gamma / n > 0 or not inv_r > 0:
        raise AssumptionViolation("1/r + gamma/n > 0")
    r = 1.0 / inv_r
    inv_pc = 0.0 if p == 1 else 1.0 - 1.0 / p
    K = n - 1 + beta + gamma * r * inv_pc
    if not K > 0:
        raise AssumptionViolation("1/r + gamma/n > 0")
    lower = max(1.0, (n - 1) / K)
    d = math.floor(2 * lower) / 2 + 0.5
    tau = n * (d - 1) + gamma * r * d
    alpha = (n - p) * (d - 1) + beta * p * d
    exps = validate_exponents(n, p, tau, alpha)
    if abs(exps.q - r) > 1e-9 * r:
        raise AssumptionViolation(f"derived q = {exps.q} differs from r = {r}")
    return CKNParameters(r, d, tau, alpha, exps)


def additive_k0(parts, p):
    """Constant on a union of ``M`` disjoint cones: ``M^{1/p'} max K_i``.

    ``parts`` holds either constants or ``(cone, k0)`` pairs.
    """
    ks = [float(k[1]) if isinstance(k, tuple) else float(k) for k in parts]
    if not ks:
        raise ValueError("empty_parts: at least one part is required")
    inv_pc = 0.0 if p == 1 else 1.0 - 1.0 / p
    return len(ks) ** inv_pc * max(ks)


def heisenberg_setup(p):
    """Cone, weights, exponents and ``C0`` of the reduced Heisenberg problem."""
    if not 1 <= p < 4:
        raise RangeViolation("1 <= p < 4")
    cone = ConvexCone.orthant(2, (False, True))
    omega, sigma = Constant(1.0), Monomial((0.0, p / 2))
    exps = validate_exponents(2, p, 0.0, p / 2)
    c0 = monomial_c0((0.0, 0.0), (0.0, p / 2), p)
    return cone, omega, sigma, exps, c0


def heisenberg_constant(p, budget=200, full_output=False):
    """Constant of the Heisenberg-group Sobolev inequality for axially symmetric functions.

    The reduced problem lives on a half-plane with ``sigma = x_2^{p/2}``.
    For ``p = 1`` this is :func:`k0_p1`, which there equals
    ``5 pi^{5/4} / (2^{13/4} Gamma(3/4)^2)``; for ``1 < p < 4`` it is
    :func:`k0_general`.
    """
    cone, omega, sigma, exps, c0 = heisenberg_setup(p)
    if p == 1:
        res = k0_p1(omega, sigma, exps, cone, c0)
    else:
        res = k0_general(omega, sigma, exps, cone, c0, budget=budget)
    return res if full_output else res.k0


PANSU_CONSTANT = 3**0.75 / (4 * math.sqrt(math.pi))


def talenti_constant(n, p):
    """Classical sharp Sobolev constant on ``R^n`` for ``1 < p < n``."""
    g = math.gamma
    return (
        math.pi**-0.5
        * n ** (-1 / p)
        * ((p - 1) / (n - p)) ** (1 - 1 / p)
        * (g(1 + n / 2) * g(n) / (g(n / p) * g(1 + n - n / p))) ** (1 / n)
    )
