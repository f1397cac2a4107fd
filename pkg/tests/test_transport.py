import math
import warnings

import numpy as np
import pytest

from conesobolev.conditions import monomial_c0
from conesobolev.constants import TestDensity
from conesobolev.core import (
    Constant,
    ConvexCone,
    Monomial,
    RadialPower,
    derive_exponents,
    sample_cone_sphere,
    validate_exponents,
)
from conesobolev.errors import MapLeavesCone, SizeExceeded, SupportTouchesBoundary
from conesobolev.transport import (
    DiscreteMeasure,
    QuadraticPotential,
    RadialPotential,
    barycentric_map,
    grid_measure,
    integrated_chain_check,
    is_cyclically_monotone,
    monge_ampere_residual,
    pointwise_divergence_check,
    solve_discrete_ot,
)
from conesobolev.verifier import GridFunction, default_box, talenti_profile

ONE = Constant(1.0)
X2 = Monomial((0, 1))
UPPER = ConvexCone.sector(0, math.pi)
Q2 = ConvexCone.orthant(2)


# -- discrete transport ------------------------------------------------------


def test_one_dimensional_rescaling_matches_quantile_map():
    rng = np.random.default_rng(0)
    x = np.sort(rng.uniform(0, 1, 64))
    mu = DiscreteMeasure.uniform(x[rng.permutation(64)])
    nu = DiscreteMeasure.uniform(3 * mu.points[:, 0] + 1)
    plan = solve_discrete_ot(mu, nu)
    img = barycentric_map(plan, mu, nu)[:, 0]
    # inverse CDF of the target composed with the source CDF is y = 3x + 1
    np.testing.assert_array_equal(img, 3 * mu.points[:, 0] + 1)
    assert plan.is_permutation()


def test_equal_measures_give_identity_plan():
    mu = DiscreteMeasure.uniform(np.random.default_rng(1).normal(size=(20, 2)))
    plan = solve_discrete_ot(mu, mu)
    np.testing.assert_allclose(plan.coupling, np.eye(20) / 20)
    assert plan.cost == pytest.approx(0.0, abs=1e-15)


def test_translation_plan():
    pts = np.random.default_rng(2).uniform(size=(16, 2))
    b = np.array([0.3, -0.2])
    mu, nu = DiscreteMeasure.uniform(pts), DiscreteMeasure.uniform(pts + b)
    plan = solve_discrete_ot(mu, nu)
    assert plan.is_permutation()
    ok, gain = is_cyclically_monotone(plan, mu, nu)
    assert ok and gain <= 1e-12
    assert plan.cost == pytest.approx(b @ b, rel=1e-12)


def test_unequal_masses_use_linear_program():
    rng = np.random.default_rng(3)
    mu = DiscreteMeasure.from_weights(rng.uniform(size=(12, 2)), rng.uniform(0.5, 1, 12))
    nu = DiscreteMeasure.from_weights(rng.uniform(size=(9, 2)), rng.uniform(0.5, 1, 9))
    plan = solve_discrete_ot(mu, nu)
    assert plan.method == "linprog"
    assert plan.marginal_error(mu, nu) < 1e-9
    assert is_cyclically_monotone(plan, mu, nu, tol=1e-9)[0]


def test_size_limit():
    mu = DiscreteMeasure.uniform(np.zeros((2001, 2)))
    with pytest.raises(SizeExceeded):
        solve_discrete_ot(mu, mu)


def test_measure_text_round_trip():
    rng = np.random.default_rng(4)
    mu = DiscreteMeasure.from_weights(rng.normal(size=(7, 3)), rng.uniform(size=7))
    back = DiscreteMeasure.from_text(mu.to_text())
    np.testing.assert_array_equal(back.points, mu.points)
    np.testing.assert_array_equal(back.masses, mu.masses)


# -- Monge-Ampere residual ---------------------------------------------------


def _quadratic_map(x):
    return x + x * x / 2


def _quadratic_map_density(y):
    # pushforward of the uniform density by x + x^2/2 in each coordinate
    return np.prod(1 / np.sqrt(1 + 2 * np.clip(y, 0, None)), axis=-1)


def _uniform_source(d, m):
    u = GridFunction(np.zeros(d), np.ones(d), np.ones((m,) * d))
    return u, grid_measure(u, ONE, 2)


E = validate_exponents(2, 1, 0, 0)


def test_residual_of_identity_is_zero():
    u, mu = _uniform_source(2, 16)
    assert monge_ampere_residual(u, ONE, mu, lambda x: x, E) == 0.0


@pytest.mark.parametrize("m", [64, 256, 1024])
def test_residual_of_one_dimensional_solver_map(m):
    u, mu = _uniform_source(1, m)
    # target atoms sit half a cell off the images of the source atoms
    nu = DiscreteMeasure.uniform(_quadratic_map(mu.points + 0.5 / m))
    img = barycentric_map(solve_discrete_ot(mu, nu), mu, nu)
    res = monge_ampere_residual(u, ONE, _quadratic_map_density, img, E)
    assert res < 2 / math.sqrt(m)
    wrong = monge_ampere_residual(u, ONE, _quadratic_map_density, lambda x: x, E)
    assert wrong > 0.05


def test_residual_of_two_dimensional_solver_map():
    u, mu = _uniform_source(2, 16)
    nu = DiscreteMeasure.uniform(_quadratic_map(mu.points + 1 / 32))
    plan = solve_discrete_ot(mu, nu)
    assert plan.method == "assignment"
    img = barycentric_map(plan, mu, nu)
    exact = monge_ampere_residual(u, ONE, _quadratic_map_density, _quadratic_map, E)
    solved = monge_ampere_residual(u, ONE, _quadratic_map_density, img, E)
    assert solved < 2.5 * exact + 2 / math.sqrt(len(mu))
    assert monge_ampere_residual(u, ONE, nu, img, E) == pytest.approx(0.0, abs=1e-12)


# -- pointwise inequality ----------------------------------------------------

EQUAL = [
    (X2, validate_exponents(2, 2, 1, 1), UPPER, monomial_c0((0, 1), (0, 1), 2)),
    (Monomial((1, 1)), validate_exponents(2, 2, 2, 2), Q2, monomial_c0((1, 1), (1, 1), 2)),
]


@pytest.mark.parametrize("w,e,cone,c0", EQUAL, ids=["half_plane", "quadrant"])
@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_pointwise_inequality_on_equal_weights(w, e, cone, c0, lam):
    rng = np.random.default_rng(6)
    x = sample_cone_sphere(cone, 2000, seed=7) * np.exp(rng.uniform(-2, 2, (2000, 1)))
    res = pointwise_divergence_check(w, w, e, QuadraticPotential(lam), x, c0, cone)
    assert res.max_violation <= 1e-9


@pytest.mark.parametrize("k", [3.0, 4.0])
def test_pointwise_inequality_for_radial_potentials(k):
    w, e, cone, c0 = EQUAL[1]
    x = sample_cone_sphere(cone, 2000, seed=8) * np.exp(np.random.default_rng(9).uniform(-2, 2, (2000, 1)))
    assert pointwise_divergence_check(w, w, e, RadialPotential(k), x, c0, cone).max_violation <= 1e-9


def test_pointwise_inequality_fails_without_the_condition():
    e = derive_exponents(2, 1, 1, 0)
    x = sample_cone_sphere(ConvexCone.full_space(2), 2000, seed=10)
    # a translated map sends points near e1 to the zero of the weight
    phi = QuadraticPotential(1.0, shift=(-1.0, 0.0))
    res = pointwise_divergence_check(RadialPower(1.0), ONE, e, phi, x, 1.0, branch="i")
    assert res.max_violation > 0 and res.point is not None


def test_map_must_preserve_the_cone():
    w, e, cone, c0 = EQUAL[1]
    phi = QuadraticPotential(1.0, shift=(-5.0, 0.0))
    with pytest.raises(MapLeavesCone):
        pointwise_divergence_check(w, w, e, phi, [[1.0, 1.0]], c0, cone)


# -- integrated chain --------------------------------------------------------


def test_chain_holds_for_classical_pair():
    e = validate_exponents(3, 2, 0, 0)
    u = GridFunction.from_callable(lambda x: talenti_profile(x, 0.05, 0, 2, 3, 0, 0.95), -np.ones(3), np.ones(3), 64)
    v = TestDensity("gaussian_bump", (0.3,), (0.0, 0.0, 0.0))
    res = integrated_chain_check(u, v, ONE, ONE, e, 1.0, ConvexCone.full_space(3))
    assert res["holds"]


def test_chain_is_nearly_tight_for_equal_weight_extremals():
    e = validate_exponents(2, 2, 1, 1)
    a = 0.03
    u = GridFunction.from_callable(lambda x: talenti_profile(x, a * a, 0, 2, 2, 1, 0.98), *default_box(UPPER), 256,
                                   cone=UPPER)
    v = TestDensity("talenti", (e.n_a, e.n_a, a * a))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SupportTouchesBoundary)
        res = integrated_chain_check(u, v, X2, X2, e, 1 / (e.n_a - 2), UPPER)
    assert res["holds"]
    assert res["lhs"] / res["rhs"] >= 0.95
