"""Moduli of uniform convexity and their empirical verification.

A modulus ``eta(r, eps)`` certifies that for all ``a, x, y`` with
``d(x, a) <= r``, ``d(y, a) <= r`` and ``d(x, y) >= eps * r`` the midpoint of
``x`` and ``y`` lies within ``(1 - eta(r, eps)) * r`` of ``a``.

Besides the float evaluator every modulus carries an exact evaluator,
``lower(r, eps)``, returning a :class:`~fractions.Fraction` that is a
guaranteed lower bound on the true value.  The rate formulas in
:mod:`ucwiter.rates` use it so that rounding can only enlarge a bound.
"""

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import mpmath
import numpy as np


class ModulusError(ValueError):
    """Modulus evaluated outside its domain, or an invalid modulus."""


def _check_domain(r, eps):
    if not r > 0:
        raise ModulusError(f"modulus needs r > 0, got r={r!r}")
    if not (0 < eps <= 2):
        raise ModulusError(f"modulus needs eps in (0, 2], got eps={eps!r}")


@dataclass(frozen=True)
class Modulus:
    """A modulus of uniform convexity.

    ``func`` evaluates in floating point; ``exact`` returns an exact lower
    bound as a Fraction.  ``tilde``/``exact_tilde`` are present when the
    modulus factors as ``eta(r, eps) = eps * tilde(r, eps)`` with ``tilde``
    nondecreasing in ``eps``.
    """

    name: str
    func: Callable[[float, float], float]
    exact: Callable[[Fraction, Fraction], Fraction]
    monotone: bool = True
    tilde: Optional[Callable[[float, float], float]] = None
    exact_tilde: Optional[Callable[[Fraction, Fraction], Fraction]] = None
    params: dict = field(default_factory=dict)

    def __call__(self, r, eps):
        _check_domain(r, eps)
        v = float(self.func(r, eps))
        if not v > 0.0:
            raise ModulusError(f"{self.name} modulus returned {v!r} at r={r}, eps={eps}")
        return min(v, 1.0)

    def lower(self, r, eps):
        r, eps = Fraction(r), Fraction(eps)
        _check_domain(r, eps)
        v = self.exact(r, eps)
        if not v > 0:
            raise ModulusError(f"{self.name} modulus lower bound {v} is not positive")
        return min(v, Fraction(1))

    @property
    def factored(self):
        return self.tilde is not None

    def eval_tilde(self, r, eps):
        if self.tilde is None:
            raise ModulusError(f"{self.name} modulus has no factored form")
        _check_domain(r, eps)
        return float(self.tilde(r, eps))

    def lower_tilde(self, r, eps):
        if self.exact_tilde is None:
            raise ModulusError(f"{self.name} modulus has no factored form")
        r, eps = Fraction(r), Fraction(eps)
        _check_domain(r, eps)
        return self.exact_tilde(r, eps)

    def descriptor(self):
        return {"kind": self.name, **self.params}


def cat0_modulus():
    """``eta(r, eps) = eps^2 / 8``, valid in every CAT(0) space."""
    return Modulus(
        name="cat0",
        func=lambda r, eps: eps * eps / 8.0,
        exact=lambda r, eps: eps * eps / 8,
        tilde=lambda r, eps: eps / 8.0,
        exact_tilde=lambda r, eps: eps / 8,
    )


_MP_DIGITS = 50
_MP_MARGIN = Fraction(1, 2 ** 80)


def _mpf_to_fraction(v):
    man, exp = v.man, v.exp
    return Fraction(int(man) * 2 ** exp) if exp >= 0 else Fraction(int(man), 2 ** -exp)


def _lp_eta_float(p):
    def f(r, eps):
        t = (eps / 2.0) ** p
        # 1 - (1 - t)^(1/p) without cancellation for small t
        return -math.expm1(math.log1p(-t) / p) if t < 1.0 else 1.0
    return f


def _lp_eta_exact(p):
    def f(r, eps):
        if eps == 2:
            return Fraction(1)
        with mpmath.workdps(_MP_DIGITS):
            t = (mpmath.mpf(eps.numerator) / eps.denominator / 2) ** mpmath.mpf(p)
            v = -mpmath.expm1(mpmath.log1p(-t) / mpmath.mpf(p))
        return _mpf_to_fraction(v) * (1 - _MP_MARGIN)
    return f


def lp_modulus(p):
    """Clarkson-type modulus ``1 - (1 - (eps/2)^p)^(1/p)`` of ``l_p``, ``p >= 2``.

    Independent of ``r``, hence monotone.  The function is convex in
    ``eps`` and vanishes at 0, so ``eta / eps`` is nondecreasing and the
    factored form is available.
    """
    p = float(p)
    if not (2.0 <= p < math.inf):
        raise ModulusError(f"the l_p modulus is only provided for p >= 2, got p={p!r}")
    f, fx = _lp_eta_float(p), _lp_eta_exact(p)
    return Modulus(
        name="lp",
        func=f,
        exact=fx,
        tilde=lambda r, eps: f(r, eps) / eps,
        exact_tilde=lambda r, eps: fx(r, eps) / eps,
        params={"p": p},
    )


def table_modulus(r_grid, eps_grid, values, monotone=True):
    """Modulus looked up in a user-supplied grid.

    ``values[i][j]`` is the modulus at ``(r_grid[i], eps_grid[j])``.  Lookups
    round conservatively: ``r`` up to the next grid radius (the table must
    be nonincreasing in ``r``) and ``eps`` down to the previous grid value
    (the table must be nondecreasing in ``eps``).  Queries with ``r`` beyond
    the grid or ``eps`` below it cannot be answered soundly and raise.
    """
    rs = [float(v) for v in r_grid]
    es = [float(v) for v in eps_grid]
    tab = np.asarray(values, dtype=float)
    if tab.shape != (len(rs), len(es)):
        raise ModulusError("table shape does not match the grids")
    if rs != sorted(rs) or es != sorted(es):
        raise ModulusError("table grids must be increasing")
    if np.any(tab <= 0) or np.any(tab > 1):
        raise ModulusError("table values must lie in (0, 1]")
    if np.any(np.diff(tab, axis=0) > 0):
        raise ModulusError("table must be nonincreasing in r")
    if np.any(np.diff(tab, axis=1) < 0):
        raise ModulusError("table must be nondecreasing in eps")
    exact_tab = [[Fraction(float(v)) for v in row] for row in tab]

    def index(r, eps):
        i = bisect.bisect_left(rs, float(r))
        j = bisect.bisect_right(es, float(eps)) - 1
        if i == len(rs):
            raise ModulusError(f"r={float(r)} exceeds the largest tabulated radius {rs[-1]}")
        if j < 0:
            raise ModulusError(f"eps={float(eps)} is below the smallest tabulated eps {es[0]}")
        return i, j

    def f(r, eps):
        i, j = index(r, eps)
        return float(tab[i, j])

    def fx(r, eps):
        i, j = index(r, eps)
        return exact_tab[i][j]

    return Modulus(name="table", func=f, exact=fx, monotone=monotone,
                   params={"r_grid": rs, "eps_grid": es, "values": tab.tolist()})


def constant_modulus(value):
    """``eta == value``; only useful as a deliberately wrong modulus in tests."""
    v = Fraction(value)
    return Modulus(name="constant", func=lambda r, eps: float(v), exact=lambda r, eps: v,
                   params={"value": float(value)})


def make_modulus(desc):
    desc = dict(desc)
    kind = desc.pop("kind", None)
    if kind == "cat0":
        return cat0_modulus()
    if kind == "lp":
        return lp_modulus(desc["p"])
    if kind == "table":
        return table_modulus(desc["r_grid"], desc["eps_grid"], desc["values"])
    raise ModulusError(f"unknown modulus kind {kind!r}")


def groetsch_bound(m, r, eps, lam):
    """``(1 - 2 lam (1 - lam) eta(r, eps)) r``.

    Upper bound on ``d((1 - lam) x (+) lam y, a)`` whenever
    ``d(x, a), d(y, a) <= r`` and ``d(x, y) >= eps r``.
    """
    if not r > 0:
        raise ModulusError(f"need r > 0, got {r!r}")
    if not (0 <= lam <= 1):
        raise ModulusError(f"need lam in [0, 1], got {lam!r}")
    return (1.0 - 2.0 * lam * (1.0 - lam) * m(r, eps)) * r


@dataclass
class ModulusReport:
    trials: int
    violations: int
    worst_margin: float
    witness: Optional[dict] = None
    fallbacks: int = 0

    @property
    def ok(self):
        return self.violations == 0


def _push_to_sphere(space, a, x, r):
    return x if space.dist(a, x) == 0.0 else space.extend(a, x, r)


def _sample_admissible(space, rng, r, eps, retries):
    """Points ``a, x, y`` with ``d(x, a), d(y, a) <= r``, ``d(x, y) >= eps r``.

    Returns ``(a, x, y, eps_used, fallback)``; when rejection sampling runs
    out of retries, ``eps`` is lowered to the separation actually drawn.
    """
    a = space.random_point(rng, 1.0)
    on_sphere = rng.uniform() < 0.5  # the implication is tightest there
    best = None
    for _ in range(retries):
        x = space.sample_ball(rng, a, r)
        y = space.sample_ball(rng, a, r)
        if on_sphere:
            x, y = _push_to_sphere(space, a, x, r), _push_to_sphere(space, a, y, r)
        d = space.dist(x, y)
        if d >= eps * r:
            return a, x, y, eps, False
        if best is None or d > best[2]:
            best = (x, y, d)
    x, y, d = best
    return a, x, y, min(2.0, d / r), True


def verify_modulus(space, m, trials=10_000, rng_seed=0, r_range=(1e-2, 1e2), retries=25):
    """Check the uniform-convexity implication on random admissible tuples.

    ``r`` is log-uniform in ``r_range`` and ``eps`` uniform in ``(0, 2]``.
    A violation is a midpoint farther than ``(1 - eta(r, eps)) r`` from ``a``
    beyond the space's tolerance band.  The upper end of ``r_range`` is
    clipped to ``space.reliable_radius``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng_seed)
    lo = math.log(r_range[0])
    hi = math.log(min(r_range[1], getattr(space, "reliable_radius", math.inf)))
    violations = fallbacks = 0
    worst = math.inf
    witness = None
    for _ in range(trials):
        r = math.exp(rng.uniform(lo, hi))
        eps = 2.0 - rng.uniform(0.0, 2.0)  # in (0, 2]
        a, x, y, eps, fb = _sample_admissible(space, rng, r, eps, retries)
        fallbacks += fb
        if eps <= 0.0:
            continue
        mid = space.combine(x, y, 0.5)
        margin = (1.0 - m(r, eps)) * r - space.dist(mid, a)
        if margin < worst:
            worst = margin
        if margin < -space.tol(r):
            violations += 1
            if witness is None:
                witness = {"a": space.to_list(a), "x": space.to_list(x),
                           "y": space.to_list(y), "r": r, "eps": eps, "margin": margin}
    return ModulusReport(trials, violations, worst, witness, fallbacks)


def verify_groetsch(space, m, trials=2000, rng_seed=0, r_range=(1e-2, 1e2), retries=25):
    """Sampled check of the four consequences of the modulus for ``lam``-points.

    With ``z = (1 - lam) x (+) lam y`` and an admissible ``(a, x, y, r, eps)``:

    (i)   ``d(z, a) <= (1 - 2 lam (1 - lam) eta(r, eps)) r``
    (ii)  the same with ``eps`` replaced by any ``psi <= eps``
    (iii) ``d(z, a) <= (1 - 2 lam (1 - lam) eta(s, eps r / s)) s`` for ``s >= r``
    (iv)  ``d(z, a) <= (1 - 2 lam (1 - lam) eta(s, eps)) r`` for ``s >= r``
          (monotone moduli only)

    Returns a dict mapping each item to its violation count.
    """
    rng = np.random.default_rng(rng_seed)
    lo = math.log(r_range[0])
    hi = math.log(min(r_range[1], getattr(space, "reliable_radius", math.inf)))
    counts = {"i": 0, "ii": 0, "iii": 0, "iv": 0}
    for _ in range(trials):
        r = math.exp(rng.uniform(lo, hi))
        eps = 2.0 - rng.uniform(0.0, 2.0)
        a, x, y, eps, _ = _sample_admissible(space, rng, r, eps, retries)
        if eps <= 0.0:
            continue
        lam = rng.uniform()
        z = space.combine(x, y, lam)
        dz = space.dist(z, a)
        tol = space.tol(r)
        s = r * rng.uniform(1.0, 3.0)
        psi = eps * (1.0 - rng.uniform())
        c = 2.0 * lam * (1.0 - lam)
        counts["i"] += dz > groetsch_bound(m, r, eps, lam) + tol
        counts["ii"] += dz > groetsch_bound(m, r, psi, lam) + tol
        counts["iii"] += dz > (1.0 - c * m(s, eps * r / s)) * s + space.tol(s)
        if m.monotone:
            counts["iv"] += dz > (1.0 - c * m(s, eps)) * r + tol
    return counts
