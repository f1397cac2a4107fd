"""Random generators shared by the unit and acceptance suites."""

from conesobolev import conditions as cond
from conesobolev.core import validate_exponents
from conesobolev.errors import AssumptionViolation, RangeViolation


def random_ckn(rng, count):
    """Parameter tuples satisfying both assumptions of ``ckn_parameters``."""
    out = []
    while len(out) < count:
        n = int(rng.integers(2, 6))
        p = float(rng.uniform(1, 4)) if rng.random() > 0.2 else 1.0
        gamma = float(rng.uniform(-1.5, 1.5))
        beta = gamma + float(rng.uniform(0, 1))
        inv_r = 1 / p + (beta - 1 - gamma) / n
        if inv_r > 1e-3 and inv_r + gamma / n > 1e-3:
            out.append((n, p, beta, gamma))
    return out


def random_monomial_pairs(rng, count):
    """Admissible planar ``(tau_vec, alpha_vec, p)`` with ``n_a`` strictly above 2."""
    out = []
    while len(out) < count:
        p = float(rng.uniform(1, 3))
        tau, alpha = rng.uniform(0, 2, 2), rng.uniform(0, 2, 2)
        try:
            e = validate_exponents(2, p, tau.sum(), alpha.sum())
            if e.n_a <= 2 + 1e-3:
                continue
            cond.monomial_c0(tau, alpha, p)
        except (RangeViolation, AssumptionViolation):
            continue
        out.append((tau, alpha, p))
    return out
