"""Nonexpansive self-maps and an empirical nonexpansiveness checker."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .spaces import (Euclidean, HyperbolicPlane, LpSpace, SpaceError, StarTree,
                     WholeSpace, _VectorSpace, make_set)


class MappingError(ValueError):
    pass


@dataclass(frozen=True)
class NonexpansiveMap:
    """A map ``T: C -> C`` claimed to satisfy ``d(Tx, Ty) <= d(x, y)``.

    ``fixed_point_near(x)``, when available, returns some fixed point of the
    map (used to obtain the distance bound ``b`` for the rate formulas).
    """

    space: object
    apply: Callable
    domain: object
    kind: str
    known_fixed_point: Optional[object] = None
    fixed_point_near: Optional[Callable] = None
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.apply(x)

    def fixed_point_for(self, x):
        if self.fixed_point_near is not None:
            return self.fixed_point_near(x)
        return self.known_fixed_point

    def descriptor(self):
        return {"kind": self.kind, **self.params}


def identity_map(space, domain=None):
    domain = WholeSpace(space) if domain is None else domain
    return NonexpansiveMap(space, lambda x: x, domain, "identity",
                           fixed_point_near=lambda x: x)


def averaged(T, lam):
    """``x -> (1 - lam) x (+) lam T(x)``; same fixed points as ``T``."""
    if not (0.0 < lam <= 1.0):
        raise MappingError(f"averaging weight must lie in (0, 1], got {lam!r}")
    sp = T.space
    return NonexpansiveMap(
        sp, lambda x: sp.combine(x, T(x), lam), T.domain, "averaged",
        known_fixed_point=T.known_fixed_point, fixed_point_near=T.fixed_point_near,
        params={"inner": T.descriptor(), "lam": lam})


def compose(maps):
    """``maps[-1] o ... o maps[0]`` (the first map is applied first)."""
    maps = list(maps)
    if not maps:
        raise MappingError("compose needs at least one map")
    sp = maps[0].space

    def apply(x):
        for T in maps:
            x = T(x)
        return x

    def common_fixed_point(x):
        # a fixed point of one factor that all factors fix, if the hints agree
        for T in maps:
            p = T.fixed_point_for(x)
            if p is not None and all(sp.dist(S(p), p) <= sp.tol(1.0) for S in maps):
                return p
        return None

    return NonexpansiveMap(sp, apply, maps[0].domain, "compose",
                           fixed_point_near=common_fixed_point,
                           params={"maps": [T.descriptor() for T in maps]})


def projection_map(C_target, tol=1e-12):
    """Nearest-point projection onto a closed convex set."""
    from .analysis import chebyshev_projection

    sp = C_target.space
    P = lambda x: chebyshev_projection(x, C_target, tol)
    return NonexpansiveMap(sp, P, WholeSpace(sp), "projection",
                           fixed_point_near=P, params={"set": C_target.descriptor()})


def _rotation_matrix(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def rotation_map(space, center, angle):
    """Rotation by ``angle`` about ``center``.

    Euclidean spaces rotate the first two coordinates; ``l_p`` spaces only
    admit quarter turns (coordinate permutations with a sign change are
    ``l_p`` isometries, general rotations are not); the hyperbolic plane
    conjugates a rotation about the origin by a Lorentz boost.
    """
    center = space.point(center)
    if isinstance(space, HyperbolicPlane):
        B = space.boost(center)
        J = np.diag([1.0, 1.0, -1.0])
        R = np.eye(3)
        R[:2, :2] = _rotation_matrix(angle)
        M = B @ R @ (J @ B.T @ J)
        apply = lambda x: space.lift(*(M[:2] @ x))
    elif isinstance(space, (Euclidean, LpSpace)):
        if space.dim < 2:
            raise MappingError("rotations need dimension >= 2")
        if isinstance(space, LpSpace) and space.p != 2.0:
            quarter = angle / (math.pi / 2)
            if abs(quarter - round(quarter)) > 1e-12:
                raise MappingError("l_p rotations are limited to multiples of pi/2")
            angle = round(quarter) * math.pi / 2
        R = np.round(_rotation_matrix(angle), 15) if isinstance(space, LpSpace) \
            else _rotation_matrix(angle)

        def apply(x):
            y = x.copy()
            y[:2] = center[:2] + R @ (x[:2] - center[:2])
            return y
    else:
        raise MappingError(f"rotations are not supported on {space!r}")
    return NonexpansiveMap(space, apply, WholeSpace(space), "rotation",
                           known_fixed_point=center,
                           params={"center": space.to_list(center), "angle": angle})


def translation_map(space, offset):
    """``x -> x + offset`` on a coordinate space: an isometry without fixed points."""
    if not isinstance(space, _VectorSpace):
        raise MappingError("translations need a coordinate space")
    off = np.asarray(offset, dtype=float)
    return NonexpansiveMap(space, lambda x: x + off, WholeSpace(space), "translation",
                           params={"offset": off.tolist()})


def ray_cycle_map(space, shift=1):
    """Star-tree isometry ``(i, r) -> (i + shift mod k, r)`` fixing the origin."""
    if not isinstance(space, StarTree):
        raise MappingError("ray cycling needs a star tree")
    k = space.n_rays
    return NonexpansiveMap(space, lambda x: space.point(((x[0] + shift) % k, x[1])),
                           WholeSpace(space), "ray_cycle",
                           known_fixed_point=space.origin(), params={"shift": shift})


def scale_map(space, center, factor):
    """``x -> center + factor (x - center)`` in a coordinate space.

    Nonexpansive iff ``|factor| <= 1``; factors above one give the
    deliberately expansive maps used to test the checkers.
    """
    if not isinstance(space, _VectorSpace):
        raise MappingError("scaling needs a coordinate space")
    c = space.point(center)
    return NonexpansiveMap(space, lambda x: c + factor * (x - c), WholeSpace(space), "scale",
                           known_fixed_point=c,
                           params={"center": c.tolist(), "factor": factor})


def make_map(space, desc):
    """Build a map from a descriptor such as ``{"kind": "rotation", ...}``."""
    desc = dict(desc)
    kind = desc.get("kind")
    if kind == "identity":
        return identity_map(space)
    if kind == "rotation":
        return rotation_map(space, desc.get("center", space.origin()), desc["angle"])
    if kind == "projection":
        return projection_map(make_set(space, desc["set"]))
    if kind == "averaged":
        return averaged(make_map(space, desc["inner"]), desc["lam"])
    if kind == "compose":
        return compose([make_map(space, d) for d in desc["maps"]])
    if kind == "translation":
        return translation_map(space, desc["offset"])
    if kind == "ray_cycle":
        return ray_cycle_map(space, desc.get("shift", 1))
    if kind == "scale":
        return scale_map(space, desc.get("center", space.origin()), desc["factor"])
    raise MappingError(f"unknown mapping kind {kind!r}")


@dataclass
class NonexpansiveReport:
    trials: int
    max_excess: float
    violations: int
    witness: Optional[dict] = None

    @property
    def ok(self):
        return self.violations == 0


def check_nonexpansive(T, trials=1000, rng_seed=0, scale=2.0):
    """Sample pairs from the domain and compare ``d(Tx, Ty)`` with ``d(x, y)``.

    Also checks that images stay in the domain.  Violations are excesses
    beyond the space's tolerance band.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sp = T.space
    rng = np.random.default_rng(rng_seed)
    worst, bad, witness = -math.inf, 0, None
    for _ in range(trials):
        x = T.domain.sample(rng, scale)
        # half of the pairs are close together, where rounding matters most
        if rng.uniform() < 0.5:
            y = T.domain.sample(rng, scale)
        else:
            y = sp.combine(x, T.domain.sample(rng, scale), rng.uniform(0.0, 0.1))
        Tx, Ty = T(x), T(y)
        dxy = sp.dist(x, y)
        excess = sp.dist(Tx, Ty) - dxy
        worst = max(worst, excess)
        escaped = not (T.domain.contains(Tx) and T.domain.contains(Ty))
        if excess > sp.tol(dxy) or escaped:
            bad += 1
            if witness is None:
                witness = {"x": sp.to_list(x), "y": sp.to_list(y), "excess": excess,
                           "escaped_domain": escaped}
    return NonexpansiveReport(trials, worst, bad, witness)
