"""Check the mass-transport argument step by step.

1. Discrete optimal transport recovers the monotone map on the line.
2. The pushforward of the source under the computed map matches the
   target density up to histogram error.
3. The pointwise inequality behind the constant holds for gradients of
   convex potentials when the structural condition holds, and fails for
   a pair that violates it.
"""

import numpy as np

from conesobolev import (
    Constant,
    ConvexCone,
    DiscreteMeasure,
    Monomial,
    QuadraticPotential,
    RadialPower,
    barycentric_map,
    derive_exponents,
    monge_ampere_residual,
    monomial_c0,
    pointwise_divergence_check,
    solve_discrete_ot,
    validate_exponents,
)
from conesobolev.core import sample_cone_sphere
from conesobolev.transport import grid_measure
from conesobolev.verifier import GridFunction

one = Constant(1.0)
rng = np.random.default_rng(0)

mu = DiscreteMeasure.uniform(rng.uniform(0, 1, 64))
nu = DiscreteMeasure.uniform(3 * mu.points[:, 0] + 1)
img = barycentric_map(solve_discrete_ot(mu, nu), mu, nu)[:, 0]
print("1D rescaling recovered exactly:", np.array_equal(img, 3 * mu.points[:, 0] + 1))

for m in (64, 256, 1024):
    u = GridFunction(np.zeros(1), np.ones(1), np.ones(m))
    src = grid_measure(u, one, 2)
    z = src.points + 0.5 / m
    tgt = DiscreteMeasure.uniform(z + z * z / 2)
    images = barycentric_map(solve_discrete_ot(src, tgt), src, tgt)
    res = monge_ampere_residual(u, one, lambda y: 1 / np.sqrt(1 + 2 * y[..., 0]), images,
                                validate_exponents(2, 1, 0, 0))
    print(f"  {m:5d} atoms: pushforward residual {res:.4f}")

quadrant = ConvexCone.orthant(2)
w, e = Monomial((1, 1)), validate_exponents(2, 2, 2, 2)
x = sample_cone_sphere(quadrant, 2000, seed=1) * np.exp(rng.uniform(-2, 2, (2000, 1)))
for lam in (0.5, 1.0, 2.0):
    chk = pointwise_divergence_check(w, w, e, QuadraticPotential(lam), x, monomial_c0((1, 1), (1, 1), 2), quadrant)
    print(f"x1 x2 weights, map {lam} x: worst relative excess {chk.max_violation:+.2e}")

chk = pointwise_divergence_check(RadialPower(1.0), one, derive_exponents(2, 1, 1, 0),
                                 QuadraticPotential(1.0, shift=(-1.0, 0.0)),
                                 sample_cone_sphere(ConvexCone.full_space(2), 2000, seed=2), 1.0, branch="i")
print(f"omega = |x|, map x - e1: worst relative excess {chk.max_violation:+.3f} at {np.round(chk.point, 3)}")
