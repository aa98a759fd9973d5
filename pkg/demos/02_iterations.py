"""Plain and averaged iteration of a rotation of the hyperbolic plane.

The Picard orbit of a rotation never settles, while the averaged iterations
converge to the center.  The checker confirms the inequality chain that the
rate proofs rely on, step by step.

Run:  python3 demos/02_iterations.py
"""

import math

from ucwiter.iterate import (check_lemma41, first_hit, ishikawa_orbit, km_orbit, make_schedule,
                             picard_orbit)
from ucwiter.mappings import rotation_map
from ucwiter.spaces import HyperbolicPlane

H = HyperbolicPlane()
R = rotation_map(H, [0.0, 0.0], math.pi / 2)
x0 = H.point([0.8, 0.0])
p = R.known_fixed_point

pic = picard_orbit(R, x0, 40, p=p)
print(f"Picard: residual stays at {pic.residual[0]:.4f} -> {pic.residual[-1]:.4f}")

km_s = make_schedule({"lambda": {"kind": "constant", "value": 0.5}, "s": {"kind": "zero"}})
km = km_orbit(R, x0, km_s, 40, p=p)
print(f"KM (lambda = 1/2): residual {km.residual[0]:.4f} -> {km.residual[-1]:.2e}, "
      f"first below 0.01 at n = {first_hit(km, 0.01)}")

ish_s = make_schedule({"lambda": {"kind": "alternating"},
                       "s": {"kind": "geometric", "c": 0.5, "q": 0.5}})
ish = ishikawa_orbit(R, x0, ish_s, 40, p=p)
print(f"Ishikawa (alternating lambda, s_n = 0.5^(n+1)): residual {ish.residual[-1]:.2e}")
print("distance to the fixed point is nonincreasing:",
      all(a >= b - 1e-12 for a, b in zip(ish.dist_p, ish.dist_p[1:])))
print("inequality chain violations:", check_lemma41(ish, ish_s, p).count)
