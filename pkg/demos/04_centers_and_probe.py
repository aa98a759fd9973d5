"""Asymptotic centers and projections, followed by the fixed-point probe.

Run:  python3 demos/04_centers_and_probe.py
"""

from ucwiter.analysis import (BoundedSequence, asymptotic_center, chebyshev_projection,
                              fixed_point_probe)
from ucwiter.mappings import ray_cycle_map, rotation_map, translation_map
from ucwiter.spaces import Ball, Euclidean, HalfSpace, HyperbolicPlane, StarTree, WholeSpace

E = Euclidean(2)
alt = BoundedSequence([E.point([-1.0, 0.0]), E.point([1.0, 0.0])] * 10)
res = asymptotic_center(E, alt, WholeSpace(E))
print(f"center of +-(1,0): {res.center}, radius {res.radius:.9f}")
res = asymptotic_center(E, alt, HalfSpace(E, [-1.0, 0.0], -0.5))
print(f"restricted to x >= 1/2: {res.center}, radius {res.radius:.9f}")

H = HyperbolicPlane()
ball = Ball(H, [0.3, 0.0], 0.5)
print("hyperbolic ball projection (hyperboloid coordinates):", chebyshev_projection(H.point([2.0, 1.0]), ball))

T = StarTree(4)
for name, (f, x0) in {
    "rotation": (rotation_map(E, [0.5, 0.5], 2.0), E.point([3.0, 0.0])),
    "ray cycle": (ray_cycle_map(T, 1), (0, 2.0)),
    "translation": (translation_map(E, [1.0, 0.0]), E.point([0.0, 0.0])),
}.items():
    rep = fixed_point_probe(f, x0, horizon=300)
    print(f"{name:<12} Picard bounded {rep.picard_bounded!s:<5}  verdict {rep.verdict}")
