"""Why the structural condition cannot be dropped.

With omega = |x| and sigma = 1 in the plane the balance condition fixes
q, yet the inequality fails: a bump pushed out to distance delta has a
quotient growing like delta^(tau/q - alpha/p) = delta^(1/3). For an
admissible pair the same experiment gives a non-positive slope.
"""

from conesobolev import (
    Constant,
    ConvexCone,
    Monomial,
    RadialPower,
    derive_exponents,
    necessity_probe_log,
    necessity_probe_shift,
    validate_exponents,
)

plane = ConvexCone.full_space(2)
deltas = [2.0 * 2**k for k in range(8)]

bad = necessity_probe_shift(RadialPower(1.0), Constant(1.0), derive_exponents(2, 1, 1, 0), plane, (1, 0), deltas)
print("omega = |x|, sigma = 1, p = 1")
for d, qv in zip(bad.parameters, bad.quotients):
    print(f"  delta = {d:7.1f}   quotient = {qv:.6f}")
print(f"  fitted slope {bad.slope:.5f}, predicted {bad.predicted:.5f}\n")

good = necessity_probe_shift(Monomial((1, 1)), Monomial((1, 1)), validate_exponents(2, 2, 2, 2),
                             ConvexCone.orthant(2), (1, 1), [4.0 * 2**k for k in range(8)])
print(f"omega = sigma = x1 x2, p = 2: fitted slope {good.slope:.5f} (bounded quotients)\n")

# the logarithmic probe detects q < p, where no bump translation is needed
e = derive_exponents(3, 2, 0, 3)
log = necessity_probe_log(e, ConvexCone.full_space(3), log_inverse=[50, 100, 200, 400, 800, 1600])
print(f"n = 3, p = 2, alpha = 3 gives q = {e.q:.3f} < p; log probe slope {log.slope:.4f}, "
      f"diverges = {log.extra['diverges']}")
