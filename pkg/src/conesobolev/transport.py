"""Optimal transport checks of the mass-transport argument.

Discrete problems with quadratic cost are solved exactly: monotone
rearrangement in one dimension, an assignment problem for two uniform
measures with the same number of atoms, and a linear program otherwise.
The pointwise inequality behind the constants is checked on analytic
convex potentials, whose Hessians are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog
from scipy.sparse import coo_matrix, vstack

from .constants import density_moments, transport_prefactor
from .errors import (
    BinningMismatch,
    DimensionMismatch,
    MapLeavesCone,
    NormalizationFailure,
    OutsideCone,
    SizeExceeded,
)
from .verifier import weighted_grad_lp_norm

MAX_ATOMS = 2000
MASS_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many atoms with positive masses summing to one."""

    points: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        m = np.asarray(self.masses, dtype=float)
        if pts.shape[0] != m.size:
            raise DimensionMismatch("one mass per atom is required")
        if np.any(m <= 0) or abs(m.sum() - 1) > MASS_TOL:
            raise ValueError("masses must be positive and sum to 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", m)

    @classmethod
    def uniform(cls, points):
        pts = np.asarray(points, dtype=float)
        return cls(pts, np.full(len(pts), 1.0 / len(pts)))

    @classmethod
    def from_weights(cls, points, weights):
        """Normalize nonnegative weights, dropping atoms of zero weight."""
        w = np.asarray(weights, dtype=float)
        keep = w > 0
        return cls(np.asarray(points, dtype=float)[keep], w[keep] / w[keep].sum())

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return self.masses.size

    def check_cone(self, cone):
        if not np.all(cone.contains(self.points)):
            raise OutsideCone("atom outside the cone")
        return self

    def to_text(self):
        """One ``x1 ... xn mass`` line per atom."""
        rows = [" ".join(repr(float(v)) for v in (*p, m)) for p, m in zip(self.points, self.masses)]
        return "\n".join(rows) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = np.array([[float(t) for t in line.split()] for line in text.strip().splitlines() if line.strip()])
        return cls(rows[:, :-1], rows[:, -1])


@dataclass(frozen=True)
class TransportPlan:
    """Coupling matrix ``coupling[i, j]`` between source atom i and target atom j."""

    coupling: np.ndarray
    cost: float
    method: str

    def support(self, tol=1e-14):
        return np.argwhere(self.coupling > tol)

    def marginal_error(self, mu, nu):
        return max(np.abs(self.coupling.sum(1) - mu.masses).max(), np.abs(self.coupling.sum(0) - nu.masses).max())

    def is_permutation(self):
        c = self.coupling
        return c.shape[0] == c.shape[1] and np.all(np.count_nonzero(c, axis=1) == 1) and np.all(
            np.count_nonzero(c, axis=0) == 1
        )


def _cost_matrix(x, y):
    return np.sum((x[:, None, :] - y[None, :, :]) ** 2, axis=-1)


def _monotone_plan(mu, nu):
    """North-west corner rule on sorted atoms (optimal for convex costs on the line)."""
    i_ord = np.argsort(mu.points[:, 0], kind="stable")
    j_ord = np.argsort(nu.points[:, 0], kind="stable")
    a, b = mu.masses[i_ord].copy(), nu.masses[j_ord].copy()
    plan = np.zeros((len(mu), len(nu)))
    i = j = 0
    while i < len(a) and j < len(b):
        m = min(a[i], b[j])
        plan[i_ord[i], j_ord[j]] += m
        a[i] -= m
        b[j] -= m
        # advance whichever side is exhausted; ties advance both
        if a[i] <= MASS_TOL * 1e-2:
            i += 1
        if j < len(b) and b[j] <= MASS_TOL * 1e-2:
            j += 1
    return plan


def _lp_plan(mu, nu, C):
    m, k = C.shape
    rows = coo_matrix((np.ones(m * k), (np.repeat(np.arange(m), k), np.arange(m * k))), shape=(m, m * k))
    cols = coo_matrix((np.ones(m * k), (np.tile(np.arange(k), m), np.arange(m * k))), shape=(k, m * k))
    A = vstack([rows, cols]).tocsr()
    b = np.concatenate([mu.masses, nu.masses])
    res = linprog(C.ravel(), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(f"transport LP failed: {res.message}")
    return np.maximum(res.x.reshape(m, k), 0.0)


def solve_discrete_ot(mu, nu):
    """Exact optimal coupling for the quadratic cost.

    Raises
    ------
    SizeExceeded
        If either measure has more than 2000 atoms.
    """
    if len(mu) > MAX_ATOMS or len(nu) > MAX_ATOMS:
        raise SizeExceeded(f"at most {MAX_ATOMS} atoms per measure")
    if mu.dim != nu.dim:
        raise DimensionMismatch("measures live in different dimensions")
    C = _cost_matrix(mu.points, nu.points)
    if mu.dim == 1:
        plan, method = _monotone_plan(mu, nu), "monotone"
    elif len(mu) == len(nu) and np.ptp(mu.masses) == 0 and np.ptp(nu.masses) == 0:
        r, c = linear_sum_assignment(C)
        plan = np.zeros(C.shape)
        plan[r, c] = mu.masses[0]
        method = "assignment"
    else:
        plan, method = _lp_plan(mu, nu, C), "linprog"
    return TransportPlan(plan, float(np.sum(plan * C)), method)


def is_cyclically_monotone(plan, mu, nu, cycles=2000, max_length=3, seed=0, tol=1e-12):
    """Spot-check cyclical monotonicity of the plan's support on random cycles.

    Returns the largest gain ``sum c(x_k, y_k) - sum c(x_k, y_{k+1})`` found
    (non-positive up to ``tol`` for an optimal plan) together with a flag.
    """
    supp = plan.support()
    rng = np.random.default_rng(seed)
    worst = -math.inf
    if len(supp) < 2:
        return True, 0.0
    for _ in range(cycles):
        k = int(rng.integers(2, max_length + 1))
        idx = supp[rng.choice(len(supp), size=min(k, len(supp)), replace=False)]
        x, y = mu.points[idx[:, 0]], nu.points[idx[:, 1]]
        now = np.sum((x - y) ** 2)
        shifted = np.sum((x - np.roll(y, -1, axis=0)) ** 2)
        worst = max(worst, float(now - shifted))
    return worst <= tol, worst


def barycentric_map(plan, mu, nu):
    """Images ``T(x_i) = sum_j pi_ij y_j / mu_i`` (approximate for non-permutation plans)."""
    return (plan.coupling @ nu.points) / mu.masses[:, None]


def grid_measure(u, omega, q):
    """Atoms at active cell centers with masses proportional to ``|u|^q omega``."""
    x = u.centers()[u.mask]
    w = np.abs(u.values[u.mask]) ** q * np.asarray(omega.value(x), dtype=float)
    if not np.isfinite(w).all() or w.sum() <= 0:
        raise NormalizationFailure("u^q omega has no finite positive mass")
    return DiscreteMeasure.from_weights(x, w)


def _histogram(points, masses, edges):
    h, _ = np.histogramdd(points, bins=edges, weights=masses)
    return h


def monge_ampere_residual(u, omega, target, transport_map, exps, bins=None):
    """Total-variation distance between ``T # (u^q omega)`` and the target.

    Parameters
    ----------
    u : GridFunction
        Source density ``u^q omega`` is discretized on its active cells.
    target : DiscreteMeasure or callable
        Target measure, or a density evaluated at bin centers.
    transport_map : callable or ndarray
        Map applied to the cell centers, or precomputed images (one row per
        active cell, e.g. from :func:`barycentric_map`).
    bins : int, optional
        Bins per axis; defaults to ``max(4, round(N^{1/(2d)}))`` for ``N``
        source atoms in dimension ``d``, about ``sqrt(N)`` bins in all.

    Raises
    ------
    BinningMismatch
        If images and target have different dimensions.
    """
    mu = grid_measure(u, omega, exps.q)
    x = u.centers()[u.mask]
    with np.errstate(all="ignore"):
        w = np.abs(u.values[u.mask]) ** exps.q * np.asarray(omega.value(x), dtype=float)
    keep = w > 0
    if callable(transport_map):
        images = np.asarray(transport_map(mu.points), dtype=float)
    else:
        images = np.asarray(transport_map, dtype=float)
        if images.ndim == 1:
            images = images[:, None]
        if images.shape[0] == keep.size:
            images = images[keep]
    if images.ndim == 1:
        images = images[:, None]
    if images.shape[0] != len(mu):
        raise BinningMismatch("one image per source atom is required")
    d = images.shape[1]
    nb = max(4, round(len(mu) ** (0.5 / d))) if bins is None else int(bins)
    if isinstance(target, DiscreteMeasure):
        if target.dim != d:
            raise BinningMismatch("images and target have different dimensions")
        lo = np.minimum(images.min(0), target.points.min(0))
        hi = np.maximum(images.max(0), target.points.max(0))
        edges = [np.linspace(lo[i], hi[i] + 1e-12 * max(1, abs(hi[i])), nb + 1) for i in range(d)]
        h_t = _histogram(target.points, target.masses, edges)
    else:
        lo, hi = images.min(0), images.max(0)
        edges = [np.linspace(lo[i], hi[i] + 1e-12 * max(1, abs(hi[i])), nb + 1) for i in range(d)]
        mids = np.meshgrid(*[0.5 * (e[1:] + e[:-1]) for e in edges], indexing="ij")
        c = np.stack(mids, axis=-1)
        dens = np.asarray(target(c.reshape(-1, d)), dtype=float).reshape(c.shape[:-1])
        if dens.shape != (nb,) * d:
            raise BinningMismatch("target density does not match the binning")
        h_t = dens / dens.sum()
    h_p = _histogram(images, mu.masses, edges)
    return 0.5 * float(np.abs(h_p - h_t).sum())


# ---------------------------------------------------------------------------
# analytic potentials and the pointwise inequality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticPotential:
    """``phi(x) = lam |x|^2 / 2 + b . x``."""

    lam: float
    shift: tuple = ()

    def _b(self, n):
        return np.zeros(n) if not self.shift else np.asarray(self.shift, float)

    def grad(self, x):
        return self.lam * x + self._b(x.shape[-1])

    def det_hessian(self, x):
        return np.full(x.shape[:-1], self.lam ** x.shape[-1])

    def laplacian(self, x):
        return np.full(x.shape[:-1], self.lam * x.shape[-1])


@dataclass(frozen=True)
class RadialPotential:
    """``phi(x) = r^k / k`` for ``k > 1``; its gradient ``r^{k-2} x`` preserves every cone."""

    k: float

    def _r(self, x):
        return np.linalg.norm(x, axis=-1)

    def grad(self, x):
        return (self._r(x) ** (self.k - 2))[..., None] * x

    def det_hessian(self, x):
        r, n = self._r(x), x.shape[-1]
        return (self.k - 1) * r ** (self.k - 2) * (r ** (self.k - 2)) ** (n - 1)

    def laplacian(self, x):
        r, n = self._r(x), x.shape[-1]
        return (self.k - 1 + n - 1) * r ** (self.k - 2)


@dataclass
class DivergenceCheck:
    """Largest relative excess ``(lhs - rhs) / max(|lhs|, |rhs|)`` over the points."""

    max_violation: float
    point: np.ndarray | None
    lhs: float
    rhs: float


def divergence_sides(omega, sigma, exps, phi, x, constant, branch=None):
    """Both sides of the pointwise divergence inequality at points ``x``."""
    if branch is None:
        branch = "ii" if exps.na_equals_n else "i"
    inv_na, inv_pc = exps.inv_na, exps.inv_pconj
    y = phi.grad(x)
    w, s = omega.value(x), sigma.value(x)
    det = phi.det_hessian(x)
    f = w**inv_pc * s ** (1 / exps.p)
    drift = inv_pc * np.sum(omega.grad(x) * y, -1) / w + np.sum(sigma.grad(x) * y, -1) / s / exps.p
    div = f * (drift + phi.laplacian(x))
    if branch == "ii":
        lhs = w ** (1 - inv_na) * det**inv_na
        rhs = constant * inv_na * div
    else:
        lhs = w ** (1 - inv_na) * omega.value(y) ** (-1 / exps.q) * sigma.value(y) ** (1 / exps.p) * det**inv_na
        rhs = transport_prefactor(exps, constant, "i") * div
    return lhs, rhs


def pointwise_divergence_check(omega, sigma, exps, phi, points, constant, cone=None, branch=None):
    """Evaluate the pointwise divergence inequality on sample points.

    The left side is ``w^{1-1/n_a} w(grad phi)^{-1/q} s(grad phi)^{1/p}
    det(D^2 phi)^{1/n_a}`` and the right side ``C div(w^{1/p'} s^{1/p}
    grad phi)`` with ``C = max(C0 (1 - n/n_a), 1/n_a)``. In branch ii (``n_a = n``)
    the left side is ``w^{1-1/n} det(D^2 phi)^{1/n}`` and ``C = C1/n``.

    Raises
    ------
    MapLeavesCone
        If ``grad phi`` sends a sample point outside the cone.
    """
    x = np.atleast_2d(np.asarray(points, float))
    if cone is not None:
        if not np.all(cone.contains(x)):
            raise OutsideCone("sample point outside the cone")
        if not np.all(cone.contains(phi.grad(x))):
            raise MapLeavesCone("grad phi leaves the cone")
    with np.errstate(all="ignore"):
        lhs, rhs = divergence_sides(omega, sigma, exps, phi, x, constant, branch)
        scale = np.maximum(np.abs(lhs), np.abs(rhs))
        rel = np.where(scale > 0, (lhs - rhs) / np.where(scale > 0, scale, 1), 0.0)
    rel = np.where(np.isnan(rel), np.inf, rel)
    k = int(np.argmax(rel))
    worst = float(rel[k])
    return DivergenceCheck(worst, x[k] if worst > 0 else None, float(lhs[k]), float(rhs[k]))


def integrated_chain_check(u, v, omega, sigma, exps, constant, cone, branch=None, normalize=True):
    """Both ends of the integrated transport estimate for one pair ``(u, v)``.

    ``lhs = int v^{1-1/N} h`` and ``rhs = P (int v |y|^{p'})^{1/p'}
    ||grad u||_{L^p_sigma}`` with ``P`` the prefactor of :mod:`constants`,
    for ``u`` scaled to ``int u^q w = 1`` and ``v`` a unit-mass density.

    Returns
    -------
    dict
        ``lhs``, ``rhs`` and ``holds = lhs <= 1.01 rhs``.

    Raises
    ------
    NormalizationFailure
        If ``int u^q w`` is zero or not finite, or differs from 1 while
        ``normalize`` is off.
    """
    if branch is None:
        branch = "ii" if exps.na_equals_n else "i"
    x = u.centers()[u.mask]
    mass = float(np.sum(np.abs(u.values[u.mask]) ** exps.q * omega.value(x)) * u.cell_volume)
    if not (math.isfinite(mass) and mass > 0):
        raise NormalizationFailure("int u^q omega must be finite and positive")
    if not normalize and abs(mass - 1) > 1e-6:
        raise NormalizationFailure(f"int u^q omega = {mass}, expected 1")
    u = u.scaled(mass ** (-1 / exps.q))
    grad_norm = weighted_grad_lp_norm(u, sigma, exps.p, cone)
    pref = transport_prefactor(exps, constant, branch) * exps.q * (1 - (1 / exps.n if branch == "ii" else exps.inv_na))
    M, D = density_moments(v, omega, sigma, exps, cone, branch)
    lhs, rhs = float(D), float(pref * M * grad_norm)
    return {"lhs": lhs, "rhs": rhs, "holds": bool(lhs <= rhs * 1.01)}
