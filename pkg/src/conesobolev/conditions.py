"""Structural conditions on a weight pair.

Two conditions are handled:

* the concavity-type condition used when ``n_a > n`` (possibly infinite):
  there is ``C0`` with

  ``((s(y)/s(x))^{1/p} (w(x)/w(y))^{1/q})^{n_a/(n_a-n)}
  <= C0 ((1/p') grad w(x)/w(x) + (1/p) grad s(x)/s(x)) . y``

  for ``x, y`` in the cone (``w`` = omega, ``s`` = sigma);
* its counterpart for ``n_a = n``: the gradient term above is nonnegative
  and ``w^{1/q} / s^{1/p}`` is bounded by ``C1``.

Both are quantified over all points and can only be estimated by sampling;
see :class:`ConditionReport` for the possible verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import sample_cone_sphere, validate_exponents
from .errors import AssumptionViolation, NotApplicable, OutsideCone
from .optimize import pattern_search

HOLDS = "holds_with_constant"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

# absolute tolerance for sign tests on normalized points
SIGN_TOL = 1e-9
# relative spread allowed between successive sample doublings
STABLE_TOL = 1e-3
# distance from the faces used for the boundary-sensitivity rerun, and the
# gain over it that is read as divergence
HOLD_OFF = 1e-6
DIVERGENCE_GAIN = 1.5


@dataclass
class ConditionReport:
    """Outcome of a sampled condition check.

    ``trace`` holds the estimate after each of the nested sample prefixes
    (a quarter, a half and all of the samples), each followed by local
    refinement; it is non-decreasing.
    """

    condition: str
    constant_estimate: float
    witness_x: np.ndarray
    witness_y: np.ndarray | None
    samples_used: int
    gradient_positivity_violations: int
    verdict: str
    trace: list = field(default_factory=list)
    note: str = ""


def _require_c0(exps):
    if exps.na_equals_n or (not exps.na_infinite and exps.n_a < exps.n):
        raise NotApplicable("the C0 condition needs n_a > n; use check_c1 when n_a = n")


def _log_grad(w, x):
    with np.errstate(divide="ignore", invalid="ignore"):
        return w.grad(x) / w.value(x)[..., None]


def _drift(omega, sigma, exps, x):
    """``(1/p') grad w/w + (1/p) grad s/s`` at ``x``."""
    d = _log_grad(sigma, x) / exps.p
    if exps.inv_pconj != 0.0:
        d = d + exps.inv_pconj * _log_grad(omega, x)
    return d


def _ratio(omega, sigma, exps, x, y):
    with np.errstate(all="ignore"):
        base = (sigma.log_value(y) - sigma.log_value(x)) / exps.p + (
            omega.log_value(x) - omega.log_value(y)
        ) / exps.q
        lhs = np.exp(exps.concavity_exponent * base)
        rhs = np.sum(_drift(omega, sigma, exps, x) * y, axis=-1)
        out = np.where(rhs > 0, lhs / rhs, np.inf)
    return np.where(np.isfinite(lhs) & np.isfinite(rhs), out, np.nan)


def c0_ratio(omega, sigma, exps, x, y, cone=None):
    """Smallest admissible ``C0`` for the single pair ``(x, y)``.

    Returns ``inf`` when the gradient term is nonpositive, which refutes
    the condition at this pair. Vectorized over leading axes.

    Raises
    ------
    NotApplicable
        If ``n_a = n``.
    OutsideCone
        If a point is outside ``cone`` or a weight is not positive there.
    """
    _require_c0(exps)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if cone is not None and not (np.all(cone.contains(x)) and np.all(cone.contains(y))):
        raise OutsideCone("c0_ratio needs points inside the cone")
    for w in (omega, sigma):
        vals = np.concatenate([np.ravel(w.value(x)), np.ravel(w.value(y))])
        if not np.all(np.isfinite(vals) & (vals > 0)):
            raise OutsideCone("weights must be positive and finite at both points")
    r = _ratio(omega, sigma, exps, x, y)
    return float(r) if np.ndim(r) == 0 else r


def _unit(z):
    nz = np.linalg.norm(z)
    return z / nz if nz > 0 else z


def _boundary_distance(cone, x):
    if not cone.normals:
        return math.inf
    return float(np.min(cone.normal_array @ _unit(x)))


def _chunked(fn, X, Y=None, chunk=65536):
    out = []
    for k in range(0, len(X), chunk):
        out.append(fn(X[k : k + chunk]) if Y is None else fn(X[k : k + chunk], Y[k : k + chunk]))
    return np.concatenate(out)


def _refine(objective, z0, iters):
    # two passes: a coarse one that may travel toward the boundary, then a
    # fine polish of the incumbent
    res = pattern_search(objective, z0, 0.25, iters, expand=2.0, max_step=2.0)
    fine = pattern_search(objective, res.x, 0.01, iters)
    return fine if fine.fun >= res.fun else res


def _stabilized(trace):
    top = max(abs(trace[-1]), 1e-300)
    return all(abs(trace[i + 1] - trace[i]) <= STABLE_TOL * top for i in range(len(trace) - 1))


def _prefixes(count):
    return [max(1, count // 4), max(1, count // 2), count]


def estimate_best_c0(omega, sigma, exps, cone, sample_count=100_000, seed=0, refine_iters=40):
    """Estimate the best constant ``C0`` by sampling pairs on the sphere.

    The ratio is invariant under independent positive rescaling of ``x`` and
    ``y``, so both are drawn on the unit sphere inside the cone. The sup is
    taken over nested prefixes of the sample (a quarter, a half, all), each
    followed by a pattern search started from the best pair of that prefix.

    Verdicts: ``refuted`` if some pair has a nonpositive gradient term (or
    the sup runs off to the cone boundary without settling), ``holds`` if the
    three estimates agree to ``1e-3`` relative, ``inconclusive`` otherwise.
    """
    _require_c0(exps)
    n = cone.n
    rng = np.random.default_rng(seed)
    X = sample_cone_sphere(cone, sample_count, rng)
    Y = sample_cone_sphere(cone, sample_count, rng)
    ratios = _chunked(lambda a, b: _ratio(omega, sigma, exps, a, b), X, Y)
    ratios = np.where(np.isnan(ratios), -np.inf, ratios)
    bad = np.isposinf(ratios)
    if np.any(bad):
        k = int(np.argmax(bad))
        return ConditionReport(
            "C0", math.inf, X[k], Y[k], sample_count, int(bad.sum()), REFUTED,
            [math.inf], "gradient term is nonpositive at the witness pair",
        )

    encode, decode = cone.face_coordinates()

    def objective(z, margin=0.0):
        x, y = _unit(decode(z[:n])), _unit(decode(z[n:]))
        if not (_inside(cone, x, margin) and _inside(cone, y, margin)):
            return -np.inf
        r = _ratio(omega, sigma, exps, x, y)
        return -np.inf if np.isnan(r) else float(r)

    trace = []
    best_val, best_x, best_y = -np.inf, X[0], Y[0]
    for m in _prefixes(sample_count):
        k = int(np.argmax(ratios[:m]))
        if ratios[k] > best_val:
            best_val, best_x, best_y = float(ratios[k]), X[k], Y[k]
        z0 = np.concatenate([encode(X[k]), encode(Y[k])])
        res = _refine(objective, z0, refine_iters)
        if res.fun > best_val:
            best_val = float(res.fun)
            best_x, best_y = _unit(decode(res.x[:n])), _unit(decode(res.x[n:]))
        trace.append(best_val)
        if best_val == np.inf:
            return ConditionReport(
                "C0", math.inf, best_x, best_y, sample_count, 0, REFUTED, trace,
                "refinement reached a pair with nonpositive gradient term",
            )
    held_off = _held_off(objective, z0, refine_iters)
    verdict, note = _verdict(trace, held_off, cone, best_x, best_y)
    return ConditionReport("C0", best_val, best_x, best_y, sample_count, 0, verdict, trace, note)


def _inside(cone, x, margin):
    if not cone.contains(x):
        return False
    return margin == 0.0 or _boundary_distance(cone, x) >= margin


def _held_off(objective, z0, iters):
    """Refined sup with the search kept ``HOLD_OFF`` away from the faces."""
    res = _refine(lambda z: objective(z, HOLD_OFF), z0, iters)
    return res.fun


def _verdict(trace, held_off, cone, *witnesses):
    """Classify a sup estimate.

    ``held_off`` is the sup found when points must stay ``HOLD_OFF`` away
    from the faces. A large gain from relaxing that margin to the default
    one means the sup is driven by the boundary and diverges there.
    """
    value = trace[-1]
    near = min(_boundary_distance(cone, w) for w in witnesses if w is not None)
    if near < HOLD_OFF and np.isfinite(held_off) and held_off > 0:
        gain = value / held_off
        if gain > DIVERGENCE_GAIN:
            return REFUTED, f"supremum diverges at the cone boundary (gain {gain:.3g})"
        if gain > 1 + STABLE_TOL:
            return INCONCLUSIVE, f"supremum sensitive to the boundary margin (gain {gain:.6g})"
    if _stabilized(trace):
        return HOLDS, ""
    return INCONCLUSIVE, "estimate did not stabilize across sample doublings"


def check_c1(omega, sigma, exps, cone, sample_count=100_000, seed=0, refine_iters=40):
    """Check the ``n_a = n`` condition.

    The constant is the sup of ``w^{1/q}/s^{1/p}`` over the unit sphere in
    the cone (the ratio is 0-homogeneous); gradient positivity is tested on
    independent sampled pairs with tolerance ``1e-9``.
    """
    if not exps.na_equals_n:
        raise NotApplicable("check_c1 needs n_a = n")
    rng = np.random.default_rng(seed)
    X = sample_cone_sphere(cone, sample_count, rng)
    Y = sample_cone_sphere(cone, sample_count, rng)

    def logg(x):
        with np.errstate(all="ignore"):
            v = omega.log_value(x) / exps.q - sigma.log_value(x) / exps.p
        return np.where(np.isnan(v), -np.inf, v)

    g = _chunked(logg, X)
    drift = _chunked(
        lambda a, b: np.sum(_drift(omega, sigma, exps, a) * b, axis=-1), X, Y
    )
    violations = int(np.sum(~(drift >= -SIGN_TOL)))

    encode, decode = cone.face_coordinates()

    def objective(z, margin=0.0):
        x = _unit(decode(z))
        if not _inside(cone, x, margin):
            return -np.inf
        return float(logg(x))

    trace = []
    best_val, best_x = -np.inf, X[0]
    for m in _prefixes(sample_count):
        k = int(np.argmax(g[:m]))
        if g[k] > best_val:
            best_val, best_x = float(g[k]), X[k]
        res = _refine(objective, encode(X[k]), refine_iters)
        if res.fun > best_val:
            best_val, best_x = float(res.fun), _unit(decode(res.x))
        trace.append(math.exp(best_val))
    held_off = math.exp(_held_off(objective, encode(X[k]), refine_iters))
    verdict, note = _verdict(trace, held_off, cone, best_x)
    if violations:
        verdict, note = REFUTED, f"{violations} sampled pairs with negative gradient term"
    return ConditionReport(
        "C1", math.exp(best_val), best_x, None, sample_count, violations, verdict, trace, note
    )


def monomial_c0(tau_vec, alpha_vec, p, n=None):
    """Closed-form ``C0`` for monomial weights ``x^tau`` and ``x^alpha``.

    With ``b_i = alpha_i/p - tau_i/q`` and ``g_i = tau_i/p' + alpha_i/p``::

        C0 = e * (prod_i (b_i/g_i)^{b_i})^e,   e = n_a/(n_a - n)

    using ``0^0 = 1``; ``e = 1`` when ``n_a`` is infinite.

    Raises
    ------
    AssumptionViolation
        Naming the first index where ``alpha_i >= 0``, ``b_i >= 0``,
        ``g_i >= 0`` or ``g_i = 0 => tau_i = alpha_i = 0`` fails.
    NotApplicable
        If ``n_a = n``.
    """
    tau_vec = np.asarray(tau_vec, dtype=float)
    alpha_vec = np.asarray(alpha_vec, dtype=float)
    if n is None:
        n = len(tau_vec)
    if len(tau_vec) != n or len(alpha_vec) != n:
        raise AssumptionViolation("exponent vectors must have length n")
    exps = validate_exponents(n, p, float(tau_vec.sum()), float(alpha_vec.sum()))
    _require_c0(exps)
    beta = alpha_vec / exps.p - tau_vec / exps.q
    gam = exps.inv_pconj * tau_vec + alpha_vec / exps.p
    tol = 1e-12
    for i in range(n):
        if alpha_vec[i] < 0:
            raise AssumptionViolation(f"alpha_{i + 1} >= 0 fails")
        if beta[i] < -tol:
            raise AssumptionViolation(f"beta_{i + 1} >= 0 fails")
        if gam[i] < -tol:
            raise AssumptionViolation(f"gamma_{i + 1} >= 0 fails")
        if abs(gam[i]) <= tol and (abs(tau_vec[i]) > tol or abs(alpha_vec[i]) > tol):
            raise AssumptionViolation(f"gamma_{i + 1} = 0 requires tau_{i + 1} = alpha_{i + 1} = 0")
    e = exps.concavity_exponent
    logprod = 0.0
    for b, g in zip(beta, gam):
        if b > tol:
            logprod += b * math.log(b / g)
    return e * math.exp(e * logprod)


def concavity_sufficient(omega, sigma, exps, cone, sample_count=20_000, seed=0, full_output=False):
    """Sampled test of the concavity route to the C0 condition.

    Tests midpoint concavity of ``F = w^d s^g`` with
    ``d = -(1/q) n_a/(n_a-n)`` and ``g = (1/p) n_a/(n_a-n)`` together with
    ``grad w(x) . y >= 0``. When both hold, the pair satisfies the condition
    with ``C0 = n_a/(n_a - n)``.

    Pairs are a unit vector ``x`` and ``y = lam * u`` with ``u`` a unit vector
    and ``lam`` log-uniform in ``[1/4, 4]``, since ``F`` is 1-homogeneous
    and its concavity involves unequal lengths.
    """
    if exps.na_infinite or exps.na_equals_n or exps.n_a < exps.n:
        raise NotApplicable("concavity test needs finite n_a > n")
    e = exps.concavity_exponent
    d, g = -e / exps.q, e / exps.p
    rng = np.random.default_rng(seed)
    X = sample_cone_sphere(cone, sample_count, rng)
    U = sample_cone_sphere(cone, sample_count, rng)
    lam = np.exp(rng.uniform(math.log(0.25), math.log(4.0), sample_count))
    Y = U * lam[:, None]

    def F(z):
        with np.errstate(all="ignore"):
            return np.exp(d * omega.log_value(z) + g * sigma.log_value(z))

    fx, fy, fm = F(X), F(Y), F(0.5 * (X + Y))
    scale = 1.0 + 0.5 * (np.abs(fx) + np.abs(fy))
    midpoint_fail = int(np.sum(~(fm >= 0.5 * (fx + fy) - SIGN_TOL * scale)))
    with np.errstate(all="ignore"):
        gw = np.sum(omega.grad(X) * U, axis=-1)
    grad_fail = int(np.sum(~(gw >= -SIGN_TOL)))
    ok = midpoint_fail == 0 and grad_fail == 0
    if full_output:
        return ok, {"midpoint_failures": midpoint_fail, "gradient_failures": grad_fail,
                    "c0": e if ok else None}
    return ok


def rigidity_floor(exps):
    """Lower bound ``1/(n_a - n)`` for any valid ``C0`` when ``tau <= alpha``."""
    if exps.na_infinite or exps.na_equals_n or exps.n_a < exps.n:
        raise NotApplicable("rigidity floor needs finite n_a > n")
    return 1.0 / (exps.n_a - exps.n)


def below_floor(estimate, exps, tol=1e-3):
    """True when a C0 estimate is inconsistent with the rigidity floor."""
    if exps.tau > exps.alpha:
        return False
    return estimate < rigidity_floor(exps) * (1 - tol)
