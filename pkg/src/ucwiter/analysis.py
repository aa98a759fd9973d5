"""Asymptotic radii and centers, nearest-point projections, and fixed-point
diagnostics.

Limits superior over infinite sequences are replaced by maxima over an
explicit tail window of a finite sequence.  Minimizations over convex sets
run in one of three ways depending on the set:

* geodesic segments: bounded scalar minimization along the parameter,
* star trees: bounded scalar minimization on every ray the set meets,
* coordinate spaces and the hyperbolic plane: SLSQP in chart coordinates
  with the set's inequality constraints.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize

from .spaces import Segment, SpaceError, StarTree


class NumericError(RuntimeError):
    """An optimizer failed to converge; carries diagnostics."""

    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


@dataclass
class BoundedSequence:
    points: list
    tail_start: int = 0
    bound: Optional[float] = None

    def __post_init__(self):
        if not self.points:
            raise SpaceError("a bounded sequence needs at least one point")
        if not (0 <= self.tail_start < len(self.points)):
            raise SpaceError(f"empty tail window: tail_start={self.tail_start}, "
                             f"length={len(self.points)}")

    @property
    def tail(self):
        return self.points[self.tail_start:]


def asymptotic_radius_at(space, y, seq):
    """``max_{n >= tail_start} d(y, x_n)``: the tail-window surrogate of
    ``limsup_n d(y, x_n)``."""
    return max(space.dist(y, x) for x in seq.tail)


# ---------------------------------------------------------------------------
# generic convex minimization


def _minimize_on_segment(f, seg, xtol):
    res = optimize.minimize_scalar(lambda t: f(seg.at(t)), bounds=(0.0, 1.0),
                                   method="bounded", options={"xatol": xtol})
    cands = [(res.fun, res.x), (f(seg.a), 0.0), (f(seg.b), 1.0)]
    val, t = min(cands)
    return seg.at(t), val


def _minimize_on_tree(f, space, C, upper, xtol):
    best = None
    for ray, (lo, hi) in C.ray_intervals(upper).items():
        hi = min(hi, upper)
        if hi < lo:
            continue
        g = lambda r: f(space.point((ray, r)))
        if hi > lo:
            res = optimize.minimize_scalar(g, bounds=(lo, hi), method="bounded",
                                           options={"xatol": xtol})
            cands = [(res.fun, res.x), (g(lo), lo), (g(hi), hi)]
        else:
            cands = [(g(lo), lo)]
        for val, r in cands:
            if best is None or val < best[0]:
                best = (val, space.point((ray, r)))
    if best is None:
        raise NumericError("convex set does not meet any ray")
    return best[1], best[0]


def _chart_constraints(C):
    return [{"type": "ineq", "fun": g} for g in C.chart_constraints()]


def _polish_in_chart(space, C, start, sq_terms, tol, maxiter=500):
    """Minimize ``max_i d(y, z_i)^2`` over ``y in C`` in chart coordinates.

    Epigraph form: variables ``(v, t)``, minimize ``t`` subject to
    ``t >= d(from_chart(v), z_i)^2`` and the set's constraints.  Squared
    distances keep the problem smooth at a degenerate optimum.
    """
    v0 = space.chart(start)
    t0 = max(space.dist(start, z) ** 2 for z in sq_terms) * 1.01 + 1e-12
    n = len(v0)
    cons = [{"type": "ineq",
             "fun": lambda w: w[n] - np.array([space.dist(space.from_chart(w[:n]), z) ** 2
                                               for z in sq_terms])}]
    for c in _chart_constraints(C):
        g = c["fun"]
        cons.append({"type": "ineq", "fun": (lambda w, g=g: np.atleast_1d(g(w[:n])))})
    res = optimize.minimize(lambda w: w[n], np.append(v0, t0), method="SLSQP",
                            constraints=cons,
                            options={"ftol": min(tol, 1e-10) ** 2, "maxiter": maxiter})
    y = space.from_chart(res.x[:n])
    if not C.contains(y, 10 * tol):
        raise NumericError("optimizer left the convex set",
                           {"message": res.message, "nit": res.nit})
    if not res.success and res.status not in (8, 9):
        raise NumericError(f"SLSQP failed: {res.message}", {"nit": res.nit, "status": res.status})
    return y


def _minimize_max_dist(space, C, targets, tol, start=None):
    """Minimizer over ``C`` of ``y -> max_i d(y, targets_i)``."""
    f = lambda y: max(space.dist(y, z) for z in targets)
    if isinstance(C, Segment):
        y, _ = _minimize_on_segment(f, C, tol * 1e-3)
        return y
    if isinstance(space, StarTree):
        upper = max(z[1] for z in targets) + 1.0
        y, _ = _minimize_on_tree(f, space, C, upper, tol * 1e-3)
        return y
    if start is None:
        start = _chart_mean(space, targets)
    start = C.closed_form_projection(start) if C.closed_form_projection(start) is not None \
        else start
    return _polish_in_chart(space, C, start, targets, tol)


def _chart_mean(space, pts):
    return space.from_chart(np.mean([space.chart(p) for p in pts], axis=0))


# ---------------------------------------------------------------------------
# projection


def chebyshev_projection(x, C, tol=1e-9, method="auto", start=None):
    """Nearest point of the closed convex set ``C`` to ``x``.

    ``method="auto"`` uses a closed form when the set provides one and the
    numerical route otherwise; ``method="numeric"`` forces the optimizer
    (optionally from ``start``), which is how the closed forms are
    cross-checked.
    """
    if method not in ("auto", "numeric"):
        raise ValueError(f"unknown projection method {method!r}")
    if method == "auto":
        z = C.closed_form_projection(x)
        if z is not None:
            return z
    sp = C.space
    if isinstance(C, Segment) or isinstance(sp, StarTree):
        return _minimize_max_dist(sp, C, [x], tol)
    if start is None:
        start = C.sample(np.random.default_rng(0))
    return _polish_in_chart(sp, C, start, [x], tol)


# ---------------------------------------------------------------------------
# asymptotic centers


@dataclass
class AsymptoticCenterResult:
    center: object
    radius: float
    uniqueness_radius: float
    diagnostics: dict = field(default_factory=dict)


def _uniqueness_radius(modulus, radius, tol):
    """Radius of the ball guaranteed to contain every ``tol``-minimizer.

    If ``r(y) <= M := radius + tol`` for two points at distance ``D``, their
    midpoint has ``r <= (1 - eta(M + 1, D / (M + 1))) M``, which cannot fall
    below the minimum ``radius``.  Hence ``eta(M + 1, D / (M + 1)) <= tol / M``;
    the largest such ``D`` is found by bisection (``eta`` nondecreasing in eps).
    """
    M = radius + tol
    if M <= 0:
        return 0.0
    s = M + 1.0
    thresh = tol / M
    if modulus(s, 2.0) <= thresh:
        return 2.0 * s
    lo, hi = 0.0, 2.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid == 0.0 or modulus(s, mid) <= thresh:
            lo = mid
        else:
            hi = mid
    return hi * s


def asymptotic_center(space, seq, C, tol=1e-9, modulus=None, probes=64, rng_seed=0):
    """Minimizer over ``C`` of the tail-window asymptotic radius.

    After solving, ``probes`` random points of ``C`` near the center are
    evaluated; none may improve the radius by more than ``tol`` (recorded in
    ``diagnostics``).  With a ``modulus``, ``uniqueness_radius`` bounds the
    distance from the center of any point whose radius is within ``tol`` of
    the minimum.
    """
    targets = seq.tail
    center = _minimize_max_dist(space, C, targets, tol)
    radius = asymptotic_radius_at(space, center, seq)
    rng = np.random.default_rng(rng_seed)
    probe_vals = []
    scale = max(radius, 1e-3) * 1e-2
    for _ in range(probes):
        y = space.sample_ball(rng, center, scale)
        z = C.closed_form_projection(y)
        if z is None:
            if not C.contains(y):
                continue
            z = y
        probe_vals.append(asymptotic_radius_at(space, z, seq))
    best_probe = min(probe_vals, default=math.inf)
    gap = radius - best_probe
    if gap > max(tol, 1e-7) * max(1.0, radius):
        raise NumericError("asymptotic center not optimal against probes",
                           {"radius": radius, "best_probe": best_probe})
    uniq = _uniqueness_radius(modulus, radius, max(tol, 1e-12)) if modulus else math.nan
    return AsymptoticCenterResult(center, radius, uniq,
                                  {"probe_count": len(probe_vals), "best_probe": best_probe,
                                   "probe_gap": gap, "tail_start": seq.tail_start,
                                   "tail_length": len(targets)})


# ---------------------------------------------------------------------------
# approximate fixed points and boundedness diagnostics


def approx_fixed_set_member(T, x, b, eps, y):
    """Is ``y`` in ``Fix_eps(T, x, b) = {y in C : d(y, x) <= b, d(y, Ty) < eps}``?"""
    if not (eps > 0 and b > 0):
        raise ValueError("need eps > 0 and b > 0")
    sp = T.space
    return T.domain.contains(y, 0.0) and sp.dist(y, x) <= b and sp.dist(y, T(y)) < eps


@dataclass
class ProbeReport:
    horizon: int
    radius_cap: float
    picard_bounded: bool
    km_bounded: bool
    picard_min_residual: float
    km_min_residual: float
    km_min_residual_index: int
    approx_fixed_points: dict
    verdict: str

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def fixed_point_probe(T, x0, horizon=2000, radius_cap=100.0, eps_ladder=(1e-1, 1e-2, 1e-3)):
    """Empirical boundedness indicators for a nonexpansive map.

    Runs the Picard iteration and the Krasnoselski iteration with weight 1/2
    from ``x0`` and records whether each stays within ``radius_cap`` of
    ``x0``, the smallest residual ``d(x_n, Tx_n)`` seen, and, per ``eps`` in
    the ladder, whether an orbit point witnessed ``Fix_eps(T, x0, radius_cap)``.
    For a map with fixed points every indicator should be positive; for a
    fixed-point-free map every indicator should be negative.  Anything else
    is reported as ``"inconsistent"``.  Unboundedness is only witnessed up to
    the cap and the horizon.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    sp = T.space

    def run(step):
        x, bounded, best, best_i = x0, True, math.inf, 0
        hits = {e: False for e in eps_ladder}
        for n in range(horizon + 1):
            Tx = T(x)
            r = sp.dist(x, Tx)
            within = sp.dist(x, x0) <= radius_cap
            bounded &= within
            if r < best:
                best, best_i = r, n
            for e in eps_ladder:
                hits[e] |= within and r < e
            if not bounded:
                break
            x = step(x, Tx)
        return bounded, best, best_i, hits

    pic = run(lambda x, Tx: Tx)
    km = run(lambda x, Tx: sp.combine(x, Tx, 0.5))
    witnessed = {e: pic[3][e] or km[3][e] for e in eps_ladder}
    positive = [pic[0], km[0], all(witnessed.values())]
    if all(positive):
        verdict = "fixed-point"
    elif not any(positive):
        verdict = "no-fixed-point"
    else:
        verdict = "inconsistent"
    return ProbeReport(horizon, radius_cap, pic[0], km[0], pic[1], km[1], km[2],
                       {str(e): v for e, v in witnessed.items()}, verdict)
