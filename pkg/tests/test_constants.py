import math

import numpy as np
import pytest

from conesobolev import constants as K
from conesobolev.conditions import monomial_c0
from conesobolev.core import Constant, ConvexCone, Monomial, derive_exponents, validate_exponents
from conesobolev.errors import AssumptionViolation, BranchMismatch, NotApplicable, NotEqualWeights
from helpers import random_ckn

ONE = Constant(1.0)
UPPER = ConvexCone.sector(0, math.pi)
X2 = Monomial((0, 1))


# -- k0_general --------------------------------------------------------------


def test_classical_k0_general_brackets_talenti():
    e = validate_exponents(3, 2, 0, 0)
    res = K.k0_general(ONE, ONE, e, ConvexCone.full_space(3), 1.0)
    sharp = K.talenti_constant(3, 2)
    assert sharp * (1 - 1e-9) <= res.k0 <= 3 * sharp
    assert res.k0 == pytest.approx(sharp, rel=1e-6)


def test_k0_general_reports_best_family():
    e = validate_exponents(2, 2, 0, 1)
    cone = ConvexCone.orthant(2, (False, True))
    sigma = Monomial((0, 1))
    c0 = monomial_c0((0, 0), (0, 1), 2)
    both = K.k0_general(ONE, sigma, e, cone, c0, families=("gaussian_bump", "uniform_cap"), budget=80)
    best = {fam: logr for fam, _, logr in both.trace}
    assert set(best) == {"gaussian_bump", "uniform_cap"}
    assert both.inf_ratio == pytest.approx(math.exp(min(best.values())), rel=1e-12)
    assert both.k0 == pytest.approx(both.prefactor * both.inf_ratio, rel=1e-12)
    assert both.v_star.kind == min(best, key=best.get)


def test_k0_general_improves_with_budget():
    cone, omega, sigma, exps, c0 = K.heisenberg_setup(2)
    vals = [K.k0_general(omega, sigma, exps, cone, c0, budget=b).k0 for b in (20, 60, 200)]
    assert vals[0] >= vals[1] >= vals[2]


def test_k0_general_rejects_p1():
    with pytest.raises(NotApplicable):
        K.k0_general(ONE, ONE, validate_exponents(2, 1, 0, 0), ConvexCone.full_space(2), 1.0)


def test_branch_must_match_exponents():
    with pytest.raises(BranchMismatch):
        K.transport_prefactor(validate_exponents(3, 2, 0, 0), 1.0, "i")


# -- p = 1 -------------------------------------------------------------------


def test_k0_p1_disk():
    res = K.k0_p1(ONE, ONE, validate_exponents(2, 1, 0, 0), ConvexCone.full_space(2), 1.0)
    assert res.k0 == pytest.approx(0.5 / math.sqrt(math.pi), abs=1e-9)


def test_k0_p1_weighted_half_plane():
    e = validate_exponents(2, 1, 1, 1)
    assert e.n_a == pytest.approx(3)
    res = K.k0_p1(X2, X2, e, UPPER, monomial_c0((0, 1), (0, 1), 1))
    assert res.k0 == pytest.approx((1 / 3) * (2 / 3) ** (-1 / 3), abs=1e-9)


def test_k0_p1_quarter_plane():
    res = K.k0_p1(ONE, ONE, validate_exponents(2, 1, 0, 0), ConvexCone.orthant(2), 1.0)
    assert res.k0 == pytest.approx(0.5 * (math.pi / 4) ** -0.5, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_k0_p1_equal_weights_at_na_equal_n(n):
    cone = ConvexCone.orthant(n, (True,) + (False,) * (n - 1))
    res = K.k0_p1(ONE, ONE, validate_exponents(n, 1, 0, 0), cone, 1.0)
    half_ball = 0.5 * math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    # n > 3 integrates by Monte Carlo and reports a standard error
    tol = 1e-9 if n <= 3 else 4 * res.quadrature_error
    assert abs(res.k0 / (half_ball ** (-1 / n) / n) - 1) <= tol


# -- sharp equal weights -----------------------------------------------------


def test_sharp_equal_p1_cases():
    assert K.k0_sharp_equal(ONE, validate_exponents(2, 1, 0, 0), ConvexCone.full_space(2)).k0 == pytest.approx(
        1 / (2 * math.sqrt(math.pi)), rel=1e-9)
    assert K.k0_sharp_equal(X2, validate_exponents(2, 1, 1, 1), UPPER).k0 == pytest.approx(
        (1 / 3) * (2 / 3) ** (-1 / 3), rel=1e-9)


@pytest.mark.parametrize("n,p", [(3, 2), (3, 1.5), (4, 2.5), (5, 3)])
def test_sharp_equal_matches_talenti(n, p):
    res = K.k0_sharp_equal(ONE, validate_exponents(n, p, 0, 0), ConvexCone.full_space(n))
    assert res.k0 == pytest.approx(K.talenti_constant(n, p), rel=1e-2)


@pytest.mark.parametrize("gamma", [0.3, 1.0, 2.5])
def test_sharp_constant_is_gamma_independent(gamma):
    e = validate_exponents(2, 2, 2, 2)
    sigma = Monomial((1, 1))
    a = K.k0_sharp_equal(sigma, e, ConvexCone.orthant(2), gamma=gamma).k0
    b = K.k0_sharp_equal(sigma, e, ConvexCone.orthant(2), gamma=4 * gamma).k0
    assert abs(a / b - 1) < 1e-3


def test_sharp_rejects_unequal_weights():
    with pytest.raises(NotEqualWeights):
        K.k0_sharp_equal(X2, validate_exponents(2, 2, 0, 1), UPPER, omega=ONE)


# -- CKN ---------------------------------------------------------------------


def test_ckn_worked_case():
    res = K.ckn_parameters(3, 2, 0, -0.5)
    assert res.r == pytest.approx(3) and res.d == 2
    assert res.tau == pytest.approx(0, abs=1e-12) and res.alpha == pytest.approx(1)
    e = res.exps
    assert (e.tau + 3) / e.q == pytest.approx((e.alpha + 3) / 2 - 1, abs=1e-12) == pytest.approx(1)


def test_ckn_equal_beta_gamma():
    # 1/r = 1/p - 1/n when beta = gamma
    res = K.ckn_parameters(3, 2, 1, 1)
    assert res.r == pytest.approx(6)
    res = K.ckn_parameters(3, 2, 1, 0)
    assert res.r == pytest.approx(2) and math.isinf(res.exps.n_a)


def test_ckn_rejects_large_gap():
    with pytest.raises(AssumptionViolation) as info:
        K.ckn_parameters(3, 2, 2, 0)
    assert str(info.value) == "0 <= beta-gamma <= 1"


def test_ckn_random_tuples_are_admissible():
    for n, p, beta, gamma in random_ckn(np.random.default_rng(5), 100):
        res = K.ckn_parameters(n, p, beta, gamma)
        e = validate_exponents(n, p, res.tau, res.alpha)
        assert e.q == pytest.approx(res.r, rel=1e-9)
        assert abs((e.tau + n) / e.q - ((e.alpha + n) / p - 1)) <= 1e-12 * max(1, (e.tau + n) / e.q)
        assert res.tau * e.inv_pconj + res.alpha / p > 0


# -- additivity --------------------------------------------------------------


def test_additive_k0():
    assert K.additive_k0([0.7], 2) == 0.7
    assert K.additive_k0([1, 1, 1, 1], 2) == pytest.approx(2.0)
    assert K.additive_k0([0.1, 0.3, 0.2, 0.1, 0.05, 0.3, 0.2, 0.1], 1) == pytest.approx(0.3)
    assert K.additive_k0([(ConvexCone.orthant(2), 1.0), (ConvexCone.orthant(2), 2.0)], 2) == pytest.approx(2 * math.sqrt(2))


# -- Heisenberg --------------------------------------------------------------


def test_heisenberg_p1():
    c = K.heisenberg_constant(1)
    assert c == pytest.approx(5 * math.pi**1.25 / (2**3.25 * math.gamma(0.75) ** 2), rel=1e-10)
    assert abs(c - 1.46389) <= 1e-4
    assert c > K.PANSU_CONSTANT == pytest.approx(0.32152, abs=1e-5)


def test_heisenberg_p2():
    cone, omega, sigma, exps, c0 = K.heisenberg_setup(2)
    assert exps.q == pytest.approx(4) and exps.n_a == pytest.approx(4)
    c = K.heisenberg_constant(2)
    assert math.isfinite(c) and c > 0


def test_density_moments_are_finite_for_talenti():
    e = derive_exponents(3, 2, 0, 0)
    assert e.n_a < 3 and e.na_equals_n  # rounding must not change the branch
    M, D = K.density_moments(K.TestDensity("talenti", (3.0, 3.0, 1.0)), ONE, ONE, e, ConvexCone.full_space(3))
    assert math.isfinite(M) and math.isfinite(D) and M > 0 and D > 0
