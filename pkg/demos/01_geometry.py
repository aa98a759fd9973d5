"""Four geodesic spaces, their convexity mapping, and moduli of uniform convexity.

Run:  python3 demos/01_geometry.py
"""

from ucwiter.modulus import cat0_modulus, lp_modulus, verify_modulus
from ucwiter.spaces import Euclidean, HyperbolicPlane, LpSpace, StarTree, check_axioms

E, L3, H, T = Euclidean(2), LpSpace(3, 3), HyperbolicPlane(), StarTree(5)

# Midpoints.  In the star tree the path between two rays runs through the origin.
print("Euclidean midpoint of (0,0) and (2,0):", E.combine(E.point([0, 0]), E.point([2, 0]), 0.5))
print("tree midpoint of ray 0 at 1 and ray 3 at 3:", T.combine((0, 1.0), (3, 3.0), 0.5))
x, y = H.point([0.5, 0.0]), H.point([-0.5, 0.0])
m = H.combine(x, y, 0.5)
print(f"hyperbolic midpoint is equidistant: {H.dist(x, m):.12f} {H.dist(m, y):.12f}")

# The axioms are checked on random tuples; every count should be zero.
for sp in (E, L3, H, T):
    print(f"{sp!r:<24} axiom violations: {check_axioms(sp, trials=2000)}")

# A modulus maps (r, eps) to the guaranteed relative shrink of a midpoint.
print("cat0 modulus at eps=1:", cat0_modulus()(1.0, 1.0))
print("l4 modulus at eps=1:  ", lp_modulus(4)(1.0, 1.0))
rep = verify_modulus(H, cat0_modulus(), trials=2000)
print(f"cat0 modulus on the hyperbolic plane: {rep.violations} violations in {rep.trials} trials")
rep = verify_modulus(L3, cat0_modulus(), trials=2000)
print(f"cat0 modulus on l3 (not CAT(0)): {rep.violations} violations, witness {rep.witness}")
