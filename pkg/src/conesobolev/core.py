"""Cones, homogeneous weights, exponent bookkeeping and sphere quadrature.

Everything downstream works with three objects defined here:

* :class:`ConvexCone` -- an open convex cone ``E`` described by inward unit
  normals, ``E = {x : n_i . x > 0}`` (no normals means the whole space);
* weights -- positively homogeneous functions with analytic gradients,
  composed from a small set of primitive families;
* :class:`ExponentSet` -- the tuple ``(n, p, tau, alpha)`` together with the
  derived Sobolev exponent ``q``, the fractional dimension ``n_a`` and the
  conjugate exponent ``p'``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog
from scipy.special import gammaln

from .errors import (
    DimensionMismatch,
    EmptyCone,
    NondifferentiablePoint,
    Nonintegrable,
    OutsideCone,
    RangeViolation,
)

# Points closer than this (relative to |x|) to a face are treated as outside.
BOUNDARY_MARGIN = 1e-9


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexCone:
    """Open convex cone ``{x : n_i . x > 0 for all i}`` in ``R^n``.

    Use the constructors :meth:`full_space`, :meth:`orthant`,
    :meth:`halfspaces` and :meth:`sector` rather than the raw fields.
    ``kind`` and ``params`` only record how the cone was built so that it
    can be written back to a configuration file.
    """

    n: int
    normals: tuple = ()
    kind: str = "full_space"
    params: tuple = ()

    @classmethod
    def full_space(cls, n):
        return cls(int(n), (), "full_space", ())

    @classmethod
    def orthant(cls, n, mask=None):
        """Cone where the coordinates listed in ``mask`` are positive.

        ``mask`` is a sequence of booleans of length ``n`` (default: all
        coordinates positive).
        """
        n = int(n)
        if mask is None:
            mask = (True,) * n
        mask = tuple(bool(m) for m in mask)
        if len(mask) != n:
            raise DimensionMismatch(f"mask has length {len(mask)}, expected {n}")
        normals = tuple(
            tuple(1.0 if j == i else 0.0 for j in range(n)) for i in range(n) if mask[i]
        )
        return cls(n, normals, "orthant", mask)

    @classmethod
    def halfspaces(cls, normals):
        """Intersection of the open half-spaces ``n_i . x > 0``."""
        arr = np.atleast_2d(np.asarray(normals, dtype=float))
        norms = np.linalg.norm(arr, axis=1)
        if np.any(norms == 0):
            raise ValueError("normals must be nonzero")
        arr = arr / norms[:, None]
        normals = tuple(tuple(float(v) for v in row) for row in arr)
        return cls(arr.shape[1], normals, "halfspaces", normals)

    @classmethod
    def sector(cls, a, b):
        """Planar sector of directions with polar angle in ``(a, b)``.

        Requires ``0 < b - a <= pi`` so that the sector is convex.
        """
        a, b = float(a), float(b)
        if not 0 < b - a <= math.pi + 1e-15:
            raise ValueError("sector opening must lie in (0, pi]")
        # inward normals of the two bounding rays
        n1 = (-math.sin(a), math.cos(a))
        n2 = (math.sin(b), -math.cos(b))
        if abs(b - a - math.pi) < 1e-15:
            normals = (n1,)
        else:
            normals = (n1, n2)
        return cls(2, normals, "sector", (a, b))

    # --
    @property
    def normal_array(self):
        return np.asarray(self.normals, dtype=float).reshape(-1, self.n)

    def contains(self, x):
        """Strict membership test, vectorized over leading axes."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise DimensionMismatch(f"point has dimension {x.shape[-1]}, cone has {self.n}")
        finite = np.all(np.isfinite(x), axis=-1)
        if not self.normals:
            return finite
        margin = BOUNDARY_MARGIN * np.linalg.norm(x, axis=-1)
        dots = x @ self.normal_array.T
        return finite & np.all(dots > margin[..., None], axis=-1)

    def face_coordinates(self):
        """Coordinates in which the faces of the cone sit at minus infinity.

        Returns ``(encode, decode)``. For a cone with ``k <= n`` independent
        normals, ``encode(x) = (log(N x), Z^T x)`` with ``Z`` an orthonormal
        basis of the complement; other cones use plain coordinates. Searches
        run in these coordinates approach the boundary geometrically.
        """
        return _face_coordinates(self)

    def interior_direction(self):
        """Unit vector deep inside the cone (Chebyshev-type center).

        Raises
        ------
        EmptyCone
            If the cone has empty interior.
        """
        return _interior_direction(self)


def cone_contains(cone, x):
    """Return True iff ``x`` lies strictly inside ``cone``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatch("cone_contains expects a single point")
    return bool(cone.contains(x))


@lru_cache(maxsize=64)
def _interior_direction(cone):
    n = cone.n
    if not cone.normals:
        e = np.zeros(n)
        e[-1] = 1.0
        return e
    N = cone.normal_array
    # maximize t subject to N a >= t, -1 <= a_j <= 1
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A = np.hstack([-N, np.ones((N.shape[0], 1))])
    res = linprog(
        c,
        A_ub=A,
        b_ub=np.zeros(N.shape[0]),
        bounds=[(-1, 1)] * n + [(None, 1)],
        method="highs",
    )
    if res.status != 0 or -res.fun <= 1e-10:
        raise EmptyCone("cone has empty interior")
    best = res.x[:n] / np.linalg.norm(res.x[:n])
    # the normalized mean of the normals is often more central (it is exact
    # for half-spaces and symmetric orthants); keep whichever is deeper
    mean = N.sum(axis=0)
    if np.linalg.norm(mean) > 1e-12:
        mean = mean / np.linalg.norm(mean)
        if np.min(N @ mean) >= np.min(N @ best) - 1e-12:
            best = mean
    return best


@lru_cache(maxsize=64)
def _face_coordinates(cone):
    N = cone.normal_array
    k, n = N.shape
    if k == 0 or k > n or np.linalg.matrix_rank(N) < k:
        return (lambda x: np.asarray(x, dtype=float)), (lambda u: np.asarray(u, dtype=float))
    Z = null_space(N)
    M = np.vstack([N, Z.T])
    Minv = np.linalg.inv(M)

    def encode(x):
        w = M @ np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.concatenate([np.log(w[:k]), w[k:]])

    def decode(u):
        u = np.asarray(u, dtype=float)
        return Minv @ np.concatenate([np.exp(u[:k]), u[k:]])

    return encode, decode


def sample_cone_sphere(cone, count, seed=0, min_acceptance=1e-3):
    """Draw ``count`` uniform points of the unit sphere inside ``cone``.

    Deterministic for a fixed ``seed`` (an int or a numpy ``Generator``).

    Raises
    ------
    EmptyCone
        If the cone is empty or the rejection acceptance rate falls below
        ``min_acceptance``.
    """
    count = int(count)
    if count <= 0:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    n = cone.n
    if cone.kind == "orthant" or not cone.normals:
        g = rng.standard_normal((count, n))
        if cone.kind == "orthant":
            mask = np.asarray(cone.params, dtype=bool)
            g[:, mask] = np.abs(g[:, mask])
        out = g / np.linalg.norm(g, axis=1, keepdims=True)
        bad = ~cone.contains(out)
        while np.any(bad):  # measure-zero events, kept for strictness
            g = rng.standard_normal((int(bad.sum()), n))
            if cone.kind == "orthant":
                g[:, mask] = np.abs(g[:, mask])
            out[bad] = g / np.linalg.norm(g, axis=1, keepdims=True)
            bad = ~cone.contains(out)
        return out
    cone.interior_direction()  # raises EmptyCone for degenerate cones
    chunks, have, drawn = [], 0, 0
    batch = max(1024, 2 * count)
    while have < count:
        g = rng.standard_normal((batch, n))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        keep = g[cone.contains(g)]
        drawn += batch
        chunks.append(keep)
        have += len(keep)
        if drawn >= 100_000 and have / drawn < min_acceptance:
            raise EmptyCone(f"acceptance rate {have / drawn:.2e} below {min_acceptance}")
    return np.concatenate(chunks)[:count]


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------


class Weight:
    """Positively homogeneous weight with an analytic gradient.

    Subclasses implement ``value(x)`` and ``grad(x)`` for arrays of shape
    ``(..., n)`` and expose the homogeneity ``degree``. ``w1 * w2`` and
    ``w ** a`` build products and powers.
    """

    degree = 0.0

    def __call__(self, x):
        return self.value(x)

    def __mul__(self, other):
        if not isinstance(other, Weight):
            return NotImplemented
        left = self.factors if isinstance(self, Product) else (self,)
        right = other.factors if isinstance(other, Product) else (other,)
        return Product(left + right)

    def __pow__(self, a):
        return Power(self, float(a))

    def log_value(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(self.value(x))


@dataclass(frozen=True)
class Constant(Weight):
    c: float = 1.0

    @property
    def degree(self):
        return 0.0

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return np.full(x.shape[:-1], float(self.c))

    def grad(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class Monomial(Weight):
    """``prod_i x_i^{e_i}``."""

    exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(float(e) for e in self.exponents))

    @property
    def degree(self):
        return float(sum(self.exponents))

    def _active(self):
        e = np.asarray(self.exponents)
        return e, e != 0

    def value(self, x):
        x = np.asarray(x, dtype=float)
        e, act = self._active()
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.prod(x[..., act] ** e[act], axis=-1)

    def log_value(self, x):
        x = np.asarray(x, dtype=float)
        e, act = self._active()
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.sum(e[act] * np.log(x[..., act]), axis=-1)

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        e, act = self._active()
        g = np.zeros_like(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            g[..., act] = self.value(x)[..., None] * e[act] / x[..., act]
        return g


@dataclass(frozen=True)
class RadialPower(Weight):
    """``|x|^t``."""

    t: float

    @property
    def degree(self):
        return float(self.t)

    def value(self, x):
        r = np.linalg.norm(np.asarray(x, dtype=float), axis=-1)
        with np.errstate(divide="ignore"):
            return r ** self.t

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.t * r ** (self.t - 2.0))[..., None] * x


@dataclass(frozen=True)
class SumPower(Weight):
    """``(x_1 + ... + x_n)^t``."""

    t: float

    @property
    def degree(self):
        return float(self.t)

    def value(self, x):
        s = np.sum(np.asarray(x, dtype=float), axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            return s ** self.t

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        s = np.sum(x, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = self.t * s ** (self.t - 1.0)
        return np.broadcast_to(d[..., None], x.shape).copy()


@dataclass(frozen=True)
class MarcusLopes(Weight):
    """``(x_1 ... x_n / (x_1 + ... + x_n))^{t/(n-1)}`` on the positive orthant."""

    t: float

    @property
    def degree(self):
        return float(self.t)

    def log_value(self, x):
        x = np.asarray(x, dtype=float)
        n = x.shape[-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.t / (n - 1) * (np.sum(np.log(x), axis=-1) - np.log(np.sum(x, axis=-1)))

    def value(self, x):
        return np.exp(self.log_value(x))

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        n = x.shape[-1]
        s = np.sum(x, axis=-1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.value(x)[..., None] * (self.t / (n - 1)) * (1.0 / x - 1.0 / s)


@dataclass(frozen=True)
class Product(Weight):
    factors: tuple

    @property
    def degree(self):
        return float(sum(f.degree for f in self.factors))

    def value(self, x):
        out = self.factors[0].value(x)
        for f in self.factors[1:]:
            out = out * f.value(x)
        return out

    def log_value(self, x):
        return sum(f.log_value(x) for f in self.factors)

    def grad(self, x):
        # product rule written with logarithmic derivatives; valid where w > 0
        total = 0.0
        for f in self.factors:
            with np.errstate(divide="ignore", invalid="ignore"):
                total = total + f.grad(x) / f.value(x)[..., None]
        return self.value(x)[..., None] * total


@dataclass(frozen=True)
class Power(Weight):
    base: Weight
    a: float

    @property
    def degree(self):
        return float(self.a * self.base.degree)

    def value(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.base.value(x) ** self.a

    def log_value(self, x):
        return self.a * self.base.log_value(x)

    def grad(self, x):
        b = self.base.value(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.a * b ** (self.a - 1.0))[..., None] * self.base.grad(x)


def _check_point(w, x, cone):
    x = np.asarray(x, dtype=float)
    if cone is not None:
        if x.shape[-1] != cone.n:
            raise DimensionMismatch(f"point has dimension {x.shape[-1]}, cone has {cone.n}")
        if not np.all(cone.contains(x)):
            raise OutsideCone(f"point {x} is not inside the cone")
    return x


def weight_eval(w, x, cone=None):
    """Evaluate ``w`` at ``x``, checking that the value is positive and finite."""
    x = _check_point(w, x, cone)
    v = w.value(x)
    if not np.all(np.isfinite(v) & (v > 0)):
        raise OutsideCone(f"weight is not positive and finite at {x}")
    return v


def weight_grad(w, x, cone=None):
    """Analytic gradient of ``w`` at ``x``."""
    x = _check_point(w, x, cone)
    weight_eval(w, x)
    g = w.grad(x)
    if not np.all(np.isfinite(g)):
        raise NondifferentiablePoint(f"weight is not differentiable at {x}")
    return g


def euler_residual(w, x, cone=None):
    """Relative Euler residual ``(grad w(x) . x - deg w(x)) / w(x)``."""
    x = _check_point(w, x, cone)
    v = weight_eval(w, x)
    g = weight_grad(w, x)
    return (np.sum(g * x, axis=-1) - w.degree * v) / v


def finite_difference_grad(w, x, h=1e-6):
    """Central-difference gradient, used only to cross-check ``grad``."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.shape[-1]):
        e = np.zeros(x.shape[-1])
        e[i] = h * max(1.0, abs(x[..., i]).max())
        g[..., i] = (w.value(x + e) - w.value(x - e)) / (2 * e[i])
    return g


# ---------------------------------------------------------------------------
# Exponents
# ---------------------------------------------------------------------------

_EPS = 1e-12


@dataclass(frozen=True)
class ExponentSet:
    """Exponent tuple with its derived quantities.

    ``n_a`` and ``p_conj`` may be ``math.inf``.
    """

    n: int
    p: float
    tau: float
    alpha: float
    q: float
    n_a: float
    p_conj: float

    @property
    def inv_pconj(self):
        """``1/p'``, exactly zero when ``p = 1``."""
        return 0.0 if self.p == 1 else 1.0 - 1.0 / self.p

    @property
    def inv_na(self):
        """``1/n_a``, exactly zero when ``n_a`` is infinite."""
        return 0.0 if math.isinf(self.n_a) else 1.0 / self.n_a

    @property
    def na_infinite(self):
        return math.isinf(self.n_a)

    @property
    def na_equals_n(self):
        return not self.na_infinite and abs(self.n_a - self.n) <= 1e-9 * self.n

    @property
    def concavity_exponent(self):
        """``n_a / (n_a - n)``, equal to 1 when ``n_a`` is infinite."""
        if self.na_infinite:
            return 1.0
        return self.n_a / (self.n_a - self.n)

    def balance_residual(self):
        return (self.tau + self.n) / self.q - ((self.alpha + self.n) / self.p - 1.0)


def derive_exponents(n, p, tau, alpha, q=None):
    """Derived exponents without admissibility checks.

    ``q`` defaults to the value forced by the balance condition; it may be
    supplied explicitly for probing scenarios outside the admissible range.
    """
    n, p, tau, alpha = int(n), float(p), float(tau), float(alpha)
    if q is None:
        denom = alpha + n - p
        if denom <= 0:
            raise RangeViolation("p < alpha+n")
        q = p * (tau + n) / denom
    q = float(q)
    if abs(q - p) <= _EPS * p:
        q = p
        n_a = math.inf
    else:
        inv = 1.0 / p - 1.0 / q
        n_a = math.inf if inv == 0 else 1.0 / inv
    p_conj = math.inf if p == 1 else p / (p - 1.0)
    return ExponentSet(n, p, tau, alpha, q, n_a, p_conj)


def validate_exponents(n, p, tau, alpha):
    """Derive and check an admissible exponent tuple.

    Raises
    ------
    RangeViolation
        Naming the first violated relation, checked in the order
        ``n >= 2``, ``p >= 1``, ``tau+n > 0``, ``alpha+n > 0``,
        ``p < alpha+n``, ``alpha+n <= tau+p+n``, ``alpha >= (1-p/n) tau``.
    """
    if int(n) != n or n < 2:
        raise RangeViolation("n >= 2")
    if not p >= 1:
        raise RangeViolation("p >= 1")
    if not tau + n > 0:
        raise RangeViolation("tau+n > 0")
    if not alpha + n > 0:
        raise RangeViolation("alpha+n > 0")
    if not p < alpha + n:
        raise RangeViolation("p < alpha+n")
    if alpha + n > tau + p + n + _EPS * max(1.0, abs(tau) + p + n):
        raise RangeViolation("alpha+n <= tau+p+n")
    if alpha < (1.0 - p / n) * tau - _EPS * max(1.0, abs(tau)):
        raise RangeViolation("alpha >= (1-p/n) tau")
    exps = derive_exponents(n, p, tau, alpha)
    if not exps.na_infinite and exps.n_a < n:
        # only reachable through rounding at the boundary
        exps = ExponentSet(exps.n, exps.p, exps.tau, exps.alpha, exps.q, float(n), exps.p_conj)
    return exps


# ---------------------------------------------------------------------------
# Sphere quadrature
# ---------------------------------------------------------------------------


def _de_rule(step=1.0 / 16, tmax=3.5):
    """Double-exponential rule on (0, 1).

    Returns nodes ``s`` together with ``1 - s`` (computed without
    cancellation) and weights. The rule tolerates integrable algebraic
    singularities at both endpoints.
    """
    t = np.arange(-tmax, tmax + step / 2, step)
    u = math.pi * np.sinh(t)
    s = 1.0 / (1.0 + np.exp(-u))
    sc = 1.0 / (1.0 + np.exp(u))
    w = step * math.pi * np.cosh(t) * s * sc
    return s, sc, w


def _frame(a):
    """Orthonormal basis whose first vector is ``a``."""
    n = len(a)
    m = np.eye(n)
    m[:, 0] = a
    qm, _ = np.linalg.qr(m)
    if qm[:, 0] @ a < 0:
        qm = -qm
    return qm.T  # rows: a, e1, e2, ...


def _exit_angle(A, B):
    """Angle at which ``cos(t) A + sin(t) B`` turns nonpositive (A > 0)."""
    return np.arctan2(A, -B)


@lru_cache(maxsize=64)
def sphere_rule(cone, step=1.0 / 16):
    """Product quadrature nodes and weights for ``S^{n-1} cap E`` (n = 2, 3).

    Directions are parametrized by the angle from an interior axis and, in
    three dimensions, an azimuth around it. The azimuth range is split at
    the edges of the cone so that the exit angle is smooth on each piece;
    a double-exponential rule then absorbs boundary singularities of the
    integrand.
    """
    n = cone.n
    if n not in (2, 3):
        raise NotImplementedError("product sphere rule only for n = 2, 3")
    a = cone.interior_direction()
    F = _frame(a)
    N = cone.normal_array
    s, sc, ws = _de_rule(step)
    if n == 2:
        nodes, weights = [], []
        for sign in (1.0, -1.0):
            e = sign * F[1]
            tmax = math.pi
            if len(N):
                tmax = float(np.min(_exit_angle(N @ a, N @ e)))
            th = tmax * s
            pts = np.cos(th)[:, None] * a + np.sin(th)[:, None] * e
            nodes.append(pts)
            weights.append(tmax * ws)
        out = (np.concatenate(nodes), np.concatenate(weights))
    else:
        e1, e2 = F[1], F[2]
        cuts = []
        if len(N) >= 2:
            for i in range(len(N)):
                for j in range(i + 1, len(N)):
                    d = np.cross(N[i], N[j])
                    nd = np.linalg.norm(d)
                    if nd < 1e-12:
                        continue
                    d /= nd
                    for cand in (d, -d):
                        if np.all(N @ cand >= -1e-12):
                            cuts.append(math.atan2(cand @ e2, cand @ e1) % (2 * math.pi))
        cuts = sorted(set(round(c, 14) for c in cuts))
        if cuts:
            segs = [(cuts[k], cuts[k + 1]) for k in range(len(cuts) - 1)]
            segs.append((cuts[-1], cuts[0] + 2 * math.pi))
        else:
            segs = [(0.0, 2 * math.pi)]
        nodes, weights = [], []
        for lo, hi in segs:
            L = hi - lo
            ph = lo + L * s
            wph = L * ws
            dirs = np.cos(ph)[:, None] * e1 + np.sin(ph)[:, None] * e2
            if len(N):
                tmax = np.min(_exit_angle((N @ a)[None, :], dirs @ N.T), axis=1)
            else:
                tmax = np.full(len(ph), math.pi)
            th = tmax[:, None] * s[None, :]
            # distance to the far end computed from the complement to keep accuracy
            sin_th = np.sin(th)
            pts = (
                np.cos(th)[..., None] * a
                + sin_th[..., None] * dirs[:, None, :]
            )
            wt = wph[:, None] * tmax[:, None] * ws[None, :] * sin_th
            nodes.append(pts.reshape(-1, 3))
            weights.append(wt.ravel())
        out = (np.concatenate(nodes), np.concatenate(weights))
    out[0].setflags(write=False)
    out[1].setflags(write=False)
    return out


def _sphere_area(n):
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def sphere_integral(cone, f, samples=200_000, seed=0, full_output=False):
    """Integral of ``f`` over ``S^{n-1} cap E``.

    ``f`` maps an ``(m, n)`` array of unit vectors to ``m`` values. For
    n = 2, 3 a deterministic product rule is used; for n > 3 the estimate is
    Monte Carlo over uniform sphere samples and the standard error is
    reported when ``full_output`` is set.
    """
    if cone.n in (2, 3):
        nodes, w = sphere_rule(cone)
        with np.errstate(all="ignore"):
            vals = np.asarray(f(nodes), dtype=float) * w
        vals = np.where(np.isfinite(vals), vals, 0.0)
        val = float(np.sum(vals))
        err = 0.0
    else:
        rng = np.random.default_rng(seed)
        n = cone.n
        batches = 20
        per = max(1, samples // batches)
        means = []
        for _ in range(batches):
            g = rng.standard_normal((per, n))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            inside = cone.contains(g)
            vals = np.zeros(per)
            if np.any(inside):
                vals[inside] = f(g[inside])
            means.append(vals.mean())
        means = np.asarray(means) * _sphere_area(n)
        val = float(means.mean())
        err = float(means.std(ddof=1) / math.sqrt(batches))
    return (val, err) if full_output else val


def cone_ball_integral(cone, w, samples=200_000, seed=0, full_output=False):
    """``int_{B cap E} w`` through the radial reduction.

    For a weight of degree ``d`` the ball integral equals the sphere
    integral divided by ``d + n``.

    Raises
    ------
    Nonintegrable
        If ``d + n <= 0``.
    """
    d = w.degree
    if d + cone.n <= 0:
        raise Nonintegrable(f"degree + n = {d + cone.n} <= 0")
    val, err = sphere_integral(cone, w.value, samples, seed, full_output=True)
    val, err = val / (d + cone.n), err / (d + cone.n)
    return (val, err) if full_output else val


def unit_ball_volume(n):
    return math.exp(0.5 * n * math.log(math.pi) - gammaln(n / 2 + 1))
