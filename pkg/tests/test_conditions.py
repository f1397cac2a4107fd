import math

import numpy as np
import pytest

from conesobolev import conditions as cond
from conesobolev.core import (
    Constant,
    ConvexCone,
    MarcusLopes,
    Monomial,
    RadialPower,
    SumPower,
    sample_cone_sphere,
    validate_exponents,
)
from conesobolev.errors import NotApplicable
from helpers import random_monomial_pairs

Q2 = ConvexCone.orthant(2)
UPPER = ConvexCone.sector(0, math.pi)
X1X2 = Monomial((1, 1))


# -- c0_ratio ----------------------------------------------------------------


def test_ratio_equal_monomial_at_diagonal():
    e = validate_exponents(2, 2, 2, 2)
    assert cond.c0_ratio(X1X2, X1X2, e, (1.0, 1.0), (1.0, 1.0)) == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize("w,n,p,deg", [
    (Monomial((1, 2)), 2, 2.0, 3.0),
    (RadialPower(1.5), 3, 1.5, 1.5),
    (SumPower(1.5), 2, 3.0, 1.5),
])
def test_ratio_on_diagonal_is_reciprocal_drift(w, n, p, deg):
    e = validate_exponents(n, p, deg, deg)
    x = np.full(n, 0.7) + np.arange(n) * 0.1
    assert cond.c0_ratio(w, w, e, x, x) == pytest.approx(1 / (deg * e.inv_pconj + deg / p), rel=1e-12)


def test_ratio_is_invariant_under_separate_dilations():
    e = validate_exponents(2, 1.5, 1.0, 1.2)
    omega, sigma = SumPower(1.0), Monomial((0.4, 0.8))
    rng = np.random.default_rng(0)
    x = sample_cone_sphere(Q2, 200, seed=1)
    y = sample_cone_sphere(Q2, 200, seed=2)
    base = cond.c0_ratio(omega, sigma, e, x, y)
    lam = np.exp(rng.uniform(-3, 3, (200, 1)))
    mu = np.exp(rng.uniform(-3, 3, (200, 1)))
    scaled = cond.c0_ratio(omega, sigma, e, lam * x, mu * y)
    assert np.max(np.abs(scaled / base - 1)) < 1e-10


# -- estimate_best_c0 ---------------------------------------------------------


def test_equal_monomial_best_c0():
    e = validate_exponents(2, 2, 2, 2)
    rep = cond.estimate_best_c0(X1X2, X1X2, e, Q2, 100_000, 0)
    assert rep.verdict == cond.HOLDS
    assert rep.constant_estimate == pytest.approx(0.5, abs=1e-3)
    np.testing.assert_allclose(np.linalg.norm(rep.witness_x), 1.0, rtol=1e-12)
    assert np.all(np.diff(rep.trace) >= 0)


def test_half_power_sigma_best_c0():
    e = validate_exponents(2, 1, 0, 0.5)
    rep = cond.estimate_best_c0(Constant(1.0), Monomial((0, 0.5)), e, UPPER, 100_000, 0)
    assert rep.verdict == cond.HOLDS
    assert rep.constant_estimate == pytest.approx(2.0, abs=1e-2)
    assert rep.constant_estimate >= cond.rigidity_floor(e) == pytest.approx(0.5)


@pytest.mark.parametrize("p", [2.0, 2.5])
def test_sum_weight_pair_holds_for_large_p(p):
    e = validate_exponents(2, p, 1, 1)
    rep = cond.estimate_best_c0(SumPower(1.0), Monomial((0.5, 0.5)), e, Q2, 50_000, 0)
    assert rep.verdict == cond.HOLDS


@pytest.mark.parametrize("p", [1.0, 1.2])
def test_sum_weight_pair_diverges_for_small_p(p):
    # near x2 -> 0 with y along e2 the ratio grows like x2^{1/p - 2/3}
    e = validate_exponents(2, p, 1, 1)
    rep = cond.estimate_best_c0(SumPower(1.0), Monomial((0.5, 0.5)), e, Q2, 50_000, 0)
    assert rep.verdict == cond.REFUTED


def test_estimate_rejects_na_equal_n():
    with pytest.raises(NotApplicable):
        cond.estimate_best_c0(Constant(1.0), Constant(1.0), validate_exponents(2, 1, 0, 0), Q2, 1000, 0)


# -- check_c1 ----------------------------------------------------------------


def test_c1_constant_weights():
    rep = cond.check_c1(Constant(1.0), Constant(1.0), validate_exponents(3, 2, 0, 0), ConvexCone.full_space(3), 20_000, 0)
    assert rep.constant_estimate == pytest.approx(1.0, abs=1e-12)
    assert rep.gradient_positivity_violations == 0
    assert rep.verdict == cond.HOLDS


def test_c1_sum_power_pair():
    e = validate_exponents(2, 1, 1, 0.5)
    assert e.na_equals_n
    rep = cond.check_c1(SumPower(1.0), RadialPower(0.5), e, Q2, 100_000, 0)
    assert rep.constant_estimate == pytest.approx(2**0.25, abs=1e-6)
    assert rep.gradient_positivity_violations == 0


def test_c1_unbounded_zero_homogeneous_ratio_is_refuted():
    rep = cond.check_c1(Monomial((1, -1)), Constant(1.0), validate_exponents(2, 1, 0, 0), Q2, 20_000, 0)
    assert rep.verdict == cond.REFUTED


# -- monomial_c0 -------------------------------------------------------------


def test_monomial_c0_equal_weights_is_rigid():
    e = validate_exponents(2, 2, 2, 2)
    assert cond.monomial_c0((1, 1), (1, 1), 2) == 1 / (e.n_a - e.n)


def test_monomial_c0_infinite_na():
    assert cond.monomial_c0((0, 0), (1, 1), 2) == pytest.approx(1.0, rel=1e-12)
    e = validate_exponents(2, 2, 0, 2)
    rep = cond.estimate_best_c0(Constant(1.0), X1X2, e, Q2, 50_000, 0)
    assert rep.constant_estimate == pytest.approx(1.0, rel=1e-3)


def test_monomial_c0_half_power():
    assert cond.monomial_c0((0, 0), (0, 0.5), 1) == pytest.approx(2.0, rel=1e-12)


# -- concavity ---------------------------------------------------------------


@pytest.mark.parametrize("a", [0.5, 1.0, 1.5])
def test_concavity_marcus_lopes(a):
    e = validate_exponents(3, 2, 0, a)
    ok, info = cond.concavity_sufficient(Constant(1.0), MarcusLopes(a), e, ConvexCone.orthant(3), full_output=True)
    assert ok and info["c0"] == pytest.approx(2 / a, rel=1e-12)


def test_concavity_equal_monomial():
    assert cond.concavity_sufficient(X1X2, X1X2, validate_exponents(2, 2, 2, 2), Q2)


def test_concavity_fails_for_steep_radial_weight():
    e = validate_exponents(2, 2, 3, 3)
    assert not cond.concavity_sufficient(RadialPower(3), RadialPower(3), e, ConvexCone.full_space(2))


# -- rigidity floor ----------------------------------------------------------


def test_rigidity_floor():
    e = validate_exponents(2, 2, 2, 2)
    assert e.n_a == pytest.approx(4)
    assert cond.rigidity_floor(e) == pytest.approx(0.5, rel=1e-14)
    rep = cond.estimate_best_c0(X1X2, X1X2, e, Q2, 20_000, 0)
    assert not cond.below_floor(rep.constant_estimate, e)
    assert rep.constant_estimate == pytest.approx(cond.rigidity_floor(e), abs=1e-3)


def test_monomial_c0_matches_sampled_estimate():
    for k, (tau, alpha, p) in enumerate(random_monomial_pairs(np.random.default_rng(21), 20)):
        e = validate_exponents(2, p, tau.sum(), alpha.sum())
        rep = cond.estimate_best_c0(Monomial(tau), Monomial(alpha), e, Q2, 100_000, k)
        assert rep.verdict == cond.HOLDS
        assert abs(rep.constant_estimate - cond.monomial_c0(tau, alpha, p)) <= 1e-2
