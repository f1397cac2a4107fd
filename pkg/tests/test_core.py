import math

import numpy as np
import pytest

from conesobolev.core import (
    Constant,
    ConvexCone,
    MarcusLopes,
    Monomial,
    RadialPower,
    SumPower,
    cone_ball_integral,
    cone_contains,
    derive_exponents,
    euler_residual,
    finite_difference_grad,
    sample_cone_sphere,
    validate_exponents,
    weight_eval,
    weight_grad,
)
from conesobolev.errors import EmptyCone, OutsideCone, RangeViolation


# -- cones -------------------------------------------------------------------


CONES = [
    ConvexCone.full_space(2),
    ConvexCone.orthant(3),
    ConvexCone.orthant(3, (True, False, True)),
    ConvexCone.sector(0.3, 1.9),
    ConvexCone.halfspaces([(1.0, 0.2, 0.0), (0.0, 1.0, -0.3)]),
]


@pytest.mark.parametrize("cone", CONES, ids=lambda c: c.kind)
def test_cone_is_closed_under_dilation_and_midpoints(cone):
    rng = np.random.default_rng(3)
    pts = sample_cone_sphere(cone, 500, seed=4)
    lam = np.exp(rng.uniform(-5, 5, (500, 1)))
    assert np.all(cone.contains(lam * pts))
    other = sample_cone_sphere(cone, 500, seed=5) * np.exp(rng.uniform(-3, 3, (500, 1)))
    assert np.all(cone.contains(0.5 * (pts + other)))


def test_orthant_mask_selects_positive_coordinates():
    cone = ConvexCone.orthant(3, (True, False, True))
    assert cone_contains(cone, (1.0, -4.0, 2.0))
    assert not cone_contains(cone, (1.0, 4.0, -2.0))


def test_cone_contains_examples():
    q = ConvexCone.orthant(2)
    assert cone_contains(q, (1, 1))
    assert not cone_contains(q, (1, -1))
    assert not cone_contains(ConvexCone.sector(0, math.pi), (0, -1))


def test_sample_cone_sphere_examples():
    v = sample_cone_sphere(ConvexCone.full_space(2), 4, seed=7)
    assert v.shape == (4, 2)
    np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1.0, rtol=1e-14)
    w = sample_cone_sphere(ConvexCone.orthant(2), 100, seed=1)
    assert w.shape == (100, 2) and np.all(w > 0)
    np.testing.assert_array_equal(w, sample_cone_sphere(ConvexCone.orthant(2), 100, seed=1))


def test_contradictory_normals_give_empty_cone():
    cone = ConvexCone.halfspaces([(1.0, 0.0), (-1.0, 0.0)])
    with pytest.raises(EmptyCone):
        sample_cone_sphere(cone, 10, seed=0)


# -- weights -----------------------------------------------------------------


def test_monomial_value_and_gradient():
    w = Monomial((2, 3))
    assert weight_eval(w, (1.0, 2.0)) == pytest.approx(8.0)
    np.testing.assert_allclose(weight_grad(w, (1.0, 2.0)), (16.0, 12.0))


def test_radial_power_value_and_gradient():
    w = RadialPower(2)
    assert weight_eval(w, (3.0, 4.0)) == pytest.approx(25.0)
    np.testing.assert_allclose(weight_grad(w, (3.0, 4.0)), (6.0, 8.0))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.5])
def test_marcus_lopes_at_diagonal(alpha):
    assert weight_eval(MarcusLopes(alpha), (1.0, 1.0)) == pytest.approx(0.5**alpha, rel=1e-14)


def test_euler_residual_examples():
    assert euler_residual(Monomial((2, 3)), (1.0, 2.0)) == pytest.approx(0.0, abs=1e-14)
    assert euler_residual(SumPower(1), (1.0, 1.0, 1.0)) == pytest.approx(0.0, abs=1e-14)


FAMILIES = [
    (Constant(2.0), ConvexCone.full_space(3)),
    (Monomial((0.5, 1.5, 0.0)), ConvexCone.orthant(3, (True, True, False))),
    (RadialPower(-0.7), ConvexCone.full_space(3)),
    (SumPower(1.3), ConvexCone.orthant(3)),
    (MarcusLopes(0.8), ConvexCone.orthant(3)),
    (Monomial((1, 0, 0)) * RadialPower(0.5), ConvexCone.orthant(3, (True, False, False))),
    (SumPower(2.0) ** 0.25, ConvexCone.orthant(3)),
]


@pytest.mark.parametrize("w,cone", FAMILIES, ids=lambda v: type(v).__name__)
def test_weight_family_properties(w, cone):
    rng = np.random.default_rng(11)
    x = sample_cone_sphere(cone, 10_000, seed=12) * np.exp(rng.uniform(-2, 2, (10_000, 1)))
    assert np.max(np.abs(euler_residual(w, x, cone))) < 1e-10
    lam = np.exp(rng.uniform(-2, 2, 10_000))
    np.testing.assert_allclose(w.value(lam[:, None] * x), lam**w.degree * w.value(x), rtol=1e-10)
    assert np.all(weight_eval(w, x) > 0)
    np.testing.assert_allclose(w.grad(x[:20]), finite_difference_grad(w, x[:20]), rtol=1e-5, atol=1e-7)


def test_weight_outside_cone_is_rejected():
    with pytest.raises(OutsideCone):
        weight_eval(Monomial((1, 1)), (1.0, -1.0), ConvexCone.orthant(2))


# -- exponents ---------------------------------------------------------------


def test_classical_exponents():
    e = validate_exponents(3, 2, 0, 0)
    assert e.q == pytest.approx(6) and e.n_a == pytest.approx(3) and e.p_conj == pytest.approx(2)


def test_infinite_na_when_alpha_is_p_plus_tau():
    e = validate_exponents(2, 2, 2, 4)
    assert e.q == pytest.approx(2) and math.isinf(e.n_a)


def test_p_must_be_below_alpha_plus_n():
    with pytest.raises(RangeViolation) as info:
        validate_exponents(2, 3, 0, 0)
    assert info.value.relation == "p < alpha+n"


def test_derived_exponents_satisfy_balance():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        p = rng.uniform(1, 4)
        tau = rng.uniform(0, 3)
        alpha = rng.uniform(max(p - n, 0) + 0.01, tau + p)
        e = derive_exponents(n, p, tau, alpha)
        assert (tau + n) / e.q == pytest.approx((alpha + n) / p - 1, rel=1e-12)
        assert 1 / e.n_a == pytest.approx(1 / p - 1 / e.q, abs=1e-12)


# -- ball integrals ----------------------------------------------------------


def test_ball_integrals():
    assert cone_ball_integral(ConvexCone.full_space(2), Constant(1.0)) == pytest.approx(math.pi, rel=1e-8)
    upper = ConvexCone.sector(0, math.pi)
    assert cone_ball_integral(upper, Monomial((0, 1))) == pytest.approx(2 / 3, rel=1e-8)
    assert cone_ball_integral(ConvexCone.orthant(2), Constant(1.0)) == pytest.approx(math.pi / 4, rel=1e-8)
