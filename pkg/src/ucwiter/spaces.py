"""Geodesic spaces with a convexity mapping, and convex subsets of them.

Every space exposes ``dist(x, y)`` and ``combine(x, y, lam)``; the latter is
the point ``(1 - lam) x (+) lam y`` on the geodesic from ``x`` to ``y`` at
arclength ``lam * dist(x, y)`` from ``x``.  Four concrete spaces are provided:

* :class:`Euclidean` -- ``R^n`` with the 2-norm,
* :class:`LpSpace` -- finite-dimensional ``l_p`` for ``p >= 2``,
* :class:`HyperbolicPlane` -- the hyperboloid model of ``H^2``,
* :class:`StarTree` -- an R-tree made of ``k`` half-lines glued at the origin.

Points are plain values: numpy vectors for the first three spaces and
``(ray, radius)`` tuples for the star tree.
"""

import math

import numpy as np

ATOL = 1e-9
RTOL = 1e-9


class SpaceError(ValueError):
    """Invalid point, parameter or space/point mismatch."""


def _check_lambda(lam):
    if not (0.0 <= lam <= 1.0):
        raise SpaceError(f"lambda must lie in [0, 1], got {lam!r}")


class GeodesicSpace:
    """Base class: a metric together with a convexity mapping."""

    kind = None

    def __init__(self, atol=ATOL, rtol=RTOL):
        self.atol = atol
        self.rtol = rtol

    def dist(self, x, y):
        raise NotImplementedError

    def combine(self, x, y, lam):
        raise NotImplementedError

    def point(self, data):
        """Coerce ``data`` into a valid point of this space."""
        raise NotImplementedError

    def random_point(self, rng, scale=1.0):
        raise NotImplementedError

    def sample_ball(self, rng, center, radius):
        """Draw a point of the closed ball ``B(center, radius)``."""
        raise NotImplementedError

    def origin(self):
        raise NotImplementedError

    def descriptor(self):
        return {"kind": self.kind}

    def to_list(self, x):
        """JSON-friendly representation of a point."""
        return [float(v) for v in x]

    def tol(self, *scales):
        """Comparison band for quantities of the given magnitudes."""
        return self.atol + self.rtol * max([1.0, *[abs(s) for s in scales]])

    def equal(self, x, y, tol=None):
        return self.dist(x, y) <= (self.atol if tol is None else tol)

    def extend(self, a, x, t):
        """Point at distance ``t`` from ``a`` on a geodesic ray through ``x != a``."""
        raise NotImplementedError

    def geodesic_sample(self, x, y, k):
        """``k`` equally spaced points ``combine(x, y, i / (k - 1))``."""
        if k < 2:
            raise SpaceError(f"need at least two sample points, got k={k}")
        return [self.combine(x, y, i / (k - 1)) for i in range(k)]

    def __repr__(self):
        params = ", ".join(f"{k}={v!r}" for k, v in self.descriptor().items()
                           if k != "kind")
        return f"{type(self).__name__}({params})"

    def __eq__(self, other):
        return type(self) is type(other) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(tuple(sorted(self.descriptor().items())))


class _VectorSpace(GeodesicSpace):
    """Normed coordinate space; ``combine`` is the affine interpolation."""

    def __init__(self, dim, **kw):
        super().__init__(**kw)
        if int(dim) < 1:
            raise SpaceError(f"dimension must be positive, got {dim!r}")
        self.dim = int(dim)

    def point(self, data):
        x = np.asarray(data, dtype=float)
        if x.shape != (self.dim,):
            raise SpaceError(f"expected a point of shape ({self.dim},), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise SpaceError("point has non-finite coordinates")
        return x

    def norm(self, v):
        raise NotImplementedError

    def dist(self, x, y):
        return self.norm(np.subtract(x, y))

    def combine(self, x, y, lam):
        _check_lambda(lam)
        if lam == 0.0:
            return x
        if lam == 1.0:
            return y
        if np.array_equal(x, y):
            return x
        return (1.0 - lam) * x + lam * y

    def origin(self):
        return np.zeros(self.dim)

    def extend(self, a, x, t):
        return a + (t / self.dist(a, x)) * (x - a)

    def random_point(self, rng, scale=1.0):
        return rng.uniform(-scale, scale, size=self.dim)

    # chart coordinates used by the numerical optimizers in ``analysis``
    def chart(self, x):
        return np.asarray(x, dtype=float)

    def from_chart(self, v):
        return np.asarray(v, dtype=float)


class Euclidean(_VectorSpace):
    kind = "euclidean"

    def norm(self, v):
        return float(math.sqrt(np.dot(v, v)))

    def sample_ball(self, rng, center, radius):
        v = rng.standard_normal(self.dim)
        v /= np.linalg.norm(v)
        return center + radius * rng.uniform() ** (1.0 / self.dim) * v

    def descriptor(self):
        return {"kind": self.kind, "dim": self.dim}


class LpSpace(_VectorSpace):
    """``R^n`` with the ``p``-norm, ``2 <= p < inf``."""

    kind = "lp"

    def __init__(self, dim, p, **kw):
        super().__init__(dim, **kw)
        if not (2.0 <= float(p) < math.inf):
            raise SpaceError(f"l_p spaces are supported for 2 <= p < inf, got p={p!r}")
        self.p = float(p)

    def norm(self, v):
        a = np.abs(v)
        m = a.max(initial=0.0)
        if m == 0.0:
            return 0.0
        return float(m * np.sum((a / m) ** self.p) ** (1.0 / self.p))

    def sample_ball(self, rng, center, radius):
        # rejection from the circumscribed cube; the unit l_p ball (p >= 2)
        # fills a healthy fraction of it in low dimension
        for _ in range(1000):
            v = rng.uniform(-1.0, 1.0, size=self.dim)
            if self.norm(v) <= 1.0:
                return center + radius * v
        raise RuntimeError("rejection sampling of the l_p ball did not terminate")

    def descriptor(self):
        return {"kind": self.kind, "dim": self.dim, "p": self.p}


class HyperbolicPlane(GeodesicSpace):
    """The hyperboloid ``{x : x0^2 + x1^2 - x2^2 = -1, x2 > 0}``.

    Points are 3-vectors ``(x0, x1, t)``; after every operation the time
    coordinate is recomputed from the spatial part, which keeps the
    Minkowski constraint satisfied to rounding error.
    """

    kind = "hyperbolic2"
    # beyond this distance from the origin, coordinates grow like e^r and
    # cancellation in the Minkowski form eats the 1e-9 tolerance budget
    reliable_radius = 6.0

    @staticmethod
    def minkowski(x, y):
        return x[0] * y[0] + x[1] * y[1] - x[2] * y[2]

    @staticmethod
    def lift(u, v):
        """Point with spatial coordinates ``(u, v)``."""
        return np.array([u, v, math.sqrt(1.0 + u * u + v * v)])

    def point(self, data):
        x = np.asarray(data, dtype=float)
        if x.shape == (2,):
            return self.lift(x[0], x[1])
        if x.shape != (3,) or not np.all(np.isfinite(x)):
            raise SpaceError(f"hyperboloid points are 3-vectors, got {data!r}")
        if x[2] <= 0 or abs(self.minkowski(x, x) + 1.0) > 1e-9 * max(1.0, x[2] ** 2):
            raise SpaceError(f"point {data!r} is not on the upper hyperboloid sheet")
        return self.lift(x[0], x[1])

    def origin(self):
        return np.array([0.0, 0.0, 1.0])

    def from_polar(self, radius, angle, center=None):
        """Point at hyperbolic distance ``radius`` from ``center`` (default origin)."""
        p = np.array([math.sinh(radius) * math.cos(angle),
                      math.sinh(radius) * math.sin(angle),
                      math.cosh(radius)])
        if center is None:
            return self.lift(p[0], p[1])
        q = self.boost(center) @ p
        return self.lift(q[0], q[1])

    @staticmethod
    def boost(c):
        """Lorentz boost mapping the origin ``(0, 0, 1)`` to ``c``."""
        v = np.asarray(c[:2], dtype=float)
        t = float(c[2])
        B = np.eye(3)
        nv = math.hypot(v[0], v[1])
        if nv > 0.0:
            u = v / nv
            B[:2, :2] += (t - 1.0) * np.outer(u, u)
        B[:2, 2] = v
        B[2, :2] = v
        B[2, 2] = t
        return B

    def dist(self, x, y):
        c = x[2] * y[2] - x[0] * y[0] - x[1] * y[1]
        if c > 2.0:
            return math.acosh(c)
        # chordal form avoids the ill-conditioning of acosh near 1
        d0, d1, d2 = x[0] - y[0], x[1] - y[1], x[2] - y[2]
        q = d0 * d0 + d1 * d1 - d2 * d2
        return 2.0 * math.asinh(math.sqrt(q) / 2.0) if q > 0.0 else 0.0

    def combine(self, x, y, lam):
        _check_lambda(lam)
        if lam == 0.0:
            return x
        if lam == 1.0:
            return y
        d = self.dist(x, y)
        if d == 0.0:
            return x
        s = math.sinh(d)
        a = math.sinh((1.0 - lam) * d) / s
        b = math.sinh(lam * d) / s
        return self.lift(a * x[0] + b * y[0], a * x[1] + b * y[1])

    def extend(self, a, x, t):
        d = self.dist(a, x)
        s = math.sinh(d)
        c0 = math.sinh(d - t) / s
        c1 = math.sinh(t) / s
        return self.lift(c0 * a[0] + c1 * x[0], c0 * a[1] + c1 * x[1])

    def random_point(self, rng, scale=1.0):
        return self.from_polar(scale * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi))

    def sample_ball(self, rng, center, radius):
        # area-uniform sampling is irrelevant here; radius-uniform with a
        # bias toward the boundary exercises the convexity checks harder
        r = radius * rng.uniform() ** 0.5
        return self.from_polar(r, rng.uniform(0, 2 * math.pi), center=center)

    def chart(self, x):
        return np.asarray(x[:2], dtype=float)

    def from_chart(self, v):
        return self.lift(float(v[0]), float(v[1]))

    def constraint_drift(self, x):
        """``|<x, x>_M + 1|``; zero for points exactly on the sheet."""
        return abs(self.minkowski(x, x) + 1.0)


class StarTree(GeodesicSpace):
    """``n_rays`` copies of ``[0, inf)`` glued at 0.

    Points are ``(ray, radius)``.  Every ``(i, 0)`` denotes the shared
    origin; :meth:`point` canonicalizes it to ``(0, 0.0)``.
    """

    kind = "rtree"

    def __init__(self, n_rays=5, **kw):
        super().__init__(**kw)
        if int(n_rays) < 1:
            raise SpaceError(f"need at least one ray, got {n_rays!r}")
        self.n_rays = int(n_rays)

    def point(self, data):
        try:
            ray, r = data
        except (TypeError, ValueError):
            raise SpaceError(f"star-tree points are (ray, radius) pairs, got {data!r}") from None
        if int(ray) != ray or not (0 <= int(ray) < self.n_rays):
            raise SpaceError(f"ray index {ray!r} out of range [0, {self.n_rays})")
        r = float(r)
        if not (r >= 0.0) or not math.isfinite(r):
            raise SpaceError(f"radial coordinate must be finite and >= 0, got {r!r}")
        return (0, 0.0) if r == 0.0 else (int(ray), r)

    def origin(self):
        return (0, 0.0)

    def to_list(self, x):
        return [int(x[0]), float(x[1])]

    def extend(self, a, x, t):
        if self._same_branch(a, x):
            ray = x[0] if x[1] > 0.0 else a[0]
            if x[1] > a[1]:
                return self.point((ray, a[1] + t))
            if t <= a[1]:
                return self.point((ray, a[1] - t))
            # past the origin the extension is not unique; take the next ray
            return self.point(((ray + 1) % self.n_rays, t - a[1]))
        if t <= a[1]:
            return self.point((a[0], a[1] - t))
        return self.point((x[0], t - a[1]))

    @staticmethod
    def _same_branch(x, y):
        return x[0] == y[0] or x[1] == 0.0 or y[1] == 0.0

    def dist(self, x, y):
        if self._same_branch(x, y):
            return abs(x[1] - y[1])
        return x[1] + y[1]

    def combine(self, x, y, lam):
        _check_lambda(lam)
        if lam == 0.0:
            return x
        if lam == 1.0 or x == y:
            return y if lam == 1.0 else x
        if self._same_branch(x, y):
            ray = x[0] if x[1] > 0.0 else y[0]
            r = (1.0 - lam) * x[1] + lam * y[1]
            return (0, 0.0) if r <= 0.0 else (ray, r)
        a = lam * (x[1] + y[1])
        if a < x[1]:
            return (x[0], x[1] - a)
        if a > x[1]:
            return (y[0], a - x[1])
        return (0, 0.0)

    def equal(self, x, y, tol=None):
        return self.dist(x, y) <= (self.atol if tol is None else tol)

    def random_point(self, rng, scale=1.0):
        return self.point((int(rng.integers(self.n_rays)), scale * rng.uniform()))

    def sample_ball(self, rng, center, radius):
        intervals = Ball(self, center, radius).ray_intervals()
        lengths = np.array([hi - lo for lo, hi in intervals.values()])
        rays = list(intervals)
        if lengths.sum() == 0.0:
            return center
        i = rays[rng.choice(len(rays), p=lengths / lengths.sum())]
        lo, hi = intervals[i]
        return self.point((i, rng.uniform(lo, hi)))

    def descriptor(self):
        return {"kind": self.kind, "n_rays": self.n_rays}


def make_space(desc):
    """Build a space from a descriptor such as ``{"kind": "lp", "dim": 3, "p": 3}``."""
    desc = dict(desc)
    kind = desc.pop("kind", None)
    if kind == "euclidean":
        return Euclidean(desc.pop("dim", 2), **desc)
    if kind == "lp":
        return LpSpace(desc.pop("dim", 2), desc.pop("p"), **desc)
    if kind == "hyperbolic2":
        return HyperbolicPlane(**desc)
    if kind == "rtree":
        return StarTree(desc.pop("n_rays", 5), **desc)
    raise SpaceError(f"unknown space kind {kind!r}")


def check_axioms(space, trials=10_000, rng_seed=0, scale=2.0):
    """Count violations of the convexity-mapping axioms on random tuples.

    With ``W(x, y, l) = combine(x, y, l)``:

    * W1: ``d(z, W(x, y, l)) <= (1 - l) d(z, x) + l d(z, y)``
    * W2: ``d(W(x, y, l), W(x, y, m)) = |l - m| d(x, y)``
    * W3: ``W(x, y, l) = W(y, x, 1 - l)``
    * W4: ``d(W(x, z, l), W(y, w, l)) <= (1 - l) d(x, y) + l d(z, w)``
    * geodesic identities: ``d(x, W) = l d(x, y)`` and ``d(y, W) = (1 - l) d(x, y)``

    Returns a dict of violation counts (tolerance from ``space.tol``).
    """
    rng = np.random.default_rng(rng_seed)
    bad = {"W1": 0, "W2": 0, "W3": 0, "W4": 0, "geodesic": 0}
    d = space.dist
    for _ in range(trials):
        x, y, z, w = (space.random_point(rng, scale) for _ in range(4))
        if rng.uniform() < 0.25:  # nearby pairs stress cancellation
            y = space.combine(x, y, rng.uniform(0.0, 1e-3))
        lam, mu = rng.uniform(size=2)
        if rng.uniform() < 0.1:
            lam = float(rng.choice([0.0, 1.0]))
        dxy = d(x, y)
        m = space.combine(x, y, lam)
        bad["W1"] += d(z, m) > (1 - lam) * d(z, x) + lam * d(z, y) + space.tol(d(z, x), d(z, y))
        bad["W2"] += abs(d(m, space.combine(x, y, mu)) - abs(lam - mu) * dxy) > space.tol(dxy)
        bad["W3"] += d(m, space.combine(y, x, 1 - lam)) > space.tol(dxy)
        lhs = d(space.combine(x, z, lam), space.combine(y, w, lam))
        bad["W4"] += lhs > (1 - lam) * dxy + lam * d(z, w) + space.tol(dxy, d(z, w))
        bad["geodesic"] += (abs(d(x, m) - lam * dxy) > space.tol(dxy)
                            or abs(d(y, m) - (1 - lam) * dxy) > space.tol(dxy))
    return {k: int(v) for k, v in bad.items()}


# ---------------------------------------------------------------------------
# convex subsets


class ConvexSet:
    """A closed convex subset of a space."""

    kind = None

    def __init__(self, space):
        self.space = space

    def contains(self, x, tol=None):
        raise NotImplementedError

    def sample(self, rng, scale=2.0):
        """Draw a member; unbounded sets are sampled within ``scale``."""
        raise NotImplementedError

    @property
    def diameter(self):
        """Diameter for bounded sets, ``None`` otherwise."""
        return None

    def closed_form_projection(self, x):
        """Nearest point of the set to ``x`` when a formula exists, else ``None``."""
        return None

    def chart_constraints(self):
        """Inequalities ``g(v) >= 0`` describing the set in chart coordinates."""
        raise NotImplementedError(f"{type(self).__name__} has no chart description")

    def descriptor(self):
        return {"kind": self.kind}

    def _tol(self, *scales):
        return self.space.tol(*scales)


class WholeSpace(ConvexSet):
    kind = "whole"

    def contains(self, x, tol=None):
        return True

    def sample(self, rng, scale=2.0):
        return self.space.random_point(rng, scale)

    def closed_form_projection(self, x):
        return x

    def chart_constraints(self):
        return []

    def ray_intervals(self, upper=math.inf):
        return {i: (0.0, upper) for i in range(self.space.n_rays)}


class Ball(ConvexSet):
    kind = "ball"

    def __init__(self, space, center, radius):
        super().__init__(space)
        if not radius >= 0.0:
            raise SpaceError(f"ball radius must be >= 0, got {radius!r}")
        self.center = space.point(center)
        self.radius = float(radius)

    def contains(self, x, tol=None):
        tol = self._tol(self.radius) if tol is None else tol
        return self.space.dist(self.center, x) <= self.radius + tol

    def sample(self, rng, scale=2.0):
        return self.space.sample_ball(rng, self.center, self.radius)

    @property
    def diameter(self):
        return 2.0 * self.radius

    def closed_form_projection(self, x):
        d = self.space.dist(self.center, x)
        if d <= self.radius:
            return x
        return self.space.combine(self.center, x, self.radius / d)

    def chart_constraints(self):
        sp, c, r2 = self.space, self.center, self.radius ** 2
        return [lambda v: r2 - sp.dist(sp.from_chart(v), c) ** 2]

    def ray_intervals(self, upper=math.inf):
        ray, s = self.center
        R = self.radius
        out = {}
        for i in range(self.space.n_rays):
            if s == 0.0:
                out[i] = (0.0, R)
            elif i == ray:
                out[i] = (max(0.0, s - R), s + R)
            elif R >= s:
                out[i] = (0.0, R - s)
        return out

    def descriptor(self):
        return {"kind": self.kind, "center": self.space.to_list(self.center),
                "radius": self.radius}


class HalfSpace(ConvexSet):
    """``{x : <normal, x> <= offset}`` in a coordinate space."""

    kind = "halfspace"

    def __init__(self, space, normal, offset):
        super().__init__(space)
        if not isinstance(space, _VectorSpace):
            raise SpaceError("half-spaces need a coordinate space")
        n = np.asarray(normal, dtype=float)
        if n.shape != (space.dim,) or not np.any(n):
            raise SpaceError(f"bad half-space normal {normal!r}")
        self.normal = n
        self.offset = float(offset)

    def contains(self, x, tol=None):
        v = float(np.dot(self.normal, x))
        tol = self._tol(v, self.offset) if tol is None else tol
        return v <= self.offset + tol

    def sample(self, rng, scale=2.0):
        x = self.space.random_point(rng, scale)
        return x if self.contains(x, 0.0) else self.closed_form_projection(x)

    def closed_form_projection(self, x):
        if not isinstance(self.space, Euclidean):
            return None
        v = float(np.dot(self.normal, x)) - self.offset
        if v <= 0.0:
            return x
        return x - v / float(np.dot(self.normal, self.normal)) * self.normal

    def chart_constraints(self):
        n, c = self.normal, self.offset
        return [lambda v: c - float(np.dot(n, v))]

    def descriptor(self):
        return {"kind": self.kind, "normal": self.normal.tolist(), "offset": self.offset}


class Box(ConvexSet):
    """Coordinate box ``lower <= x <= upper``.

    Coordinatewise clipping is the nearest-point map for every ``l_p``
    norm with ``p < inf``, since the p-th power of the norm is separable.
    """

    kind = "box"

    def __init__(self, space, lower, upper):
        super().__init__(space)
        if not isinstance(space, _VectorSpace):
            raise SpaceError("boxes need a coordinate space")
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        if self.lower.shape != (space.dim,) or self.upper.shape != (space.dim,):
            raise SpaceError("box bounds must match the space dimension")
        if np.any(self.lower > self.upper):
            raise SpaceError("box has lower > upper")

    def contains(self, x, tol=None):
        tol = self._tol(*self.lower, *self.upper) if tol is None else tol
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))

    def sample(self, rng, scale=2.0):
        return rng.uniform(self.lower, self.upper)

    @property
    def diameter(self):
        return self.space.norm(self.upper - self.lower)

    def closed_form_projection(self, x):
        return np.clip(x, self.lower, self.upper)

    def chart_constraints(self):
        lo, hi = self.lower, self.upper
        return [lambda v: np.concatenate([v - lo, hi - v])]

    def descriptor(self):
        return {"kind": self.kind, "lower": self.lower.tolist(), "upper": self.upper.tolist()}


class RayInterval(ConvexSet):
    """``{(ray, r) : lo <= r <= hi}`` inside a star tree."""

    kind = "ray_interval"

    def __init__(self, space, ray, lo, hi):
        super().__init__(space)
        if not isinstance(space, StarTree):
            raise SpaceError("ray intervals live in a star tree")
        if not (0.0 <= lo <= hi):
            raise SpaceError(f"need 0 <= lo <= hi, got lo={lo!r}, hi={hi!r}")
        if not (0 <= int(ray) < space.n_rays):
            raise SpaceError(f"ray index {ray!r} out of range")
        self.ray, self.lo, self.hi = int(ray), float(lo), float(hi)

    def contains(self, x, tol=None):
        tol = self._tol(self.hi) if tol is None else tol
        if x[1] == 0.0 or x[0] == self.ray:
            return self.lo - tol <= x[1] <= self.hi + tol
        return x[1] <= tol and self.lo <= tol

    def sample(self, rng, scale=2.0):
        return self.space.point((self.ray, rng.uniform(self.lo, self.hi)))

    @property
    def diameter(self):
        return self.hi - self.lo

    def closed_form_projection(self, x):
        if x[0] == self.ray or x[1] == 0.0:
            r = min(max(x[1], self.lo), self.hi)
        else:
            r = self.lo  # the path to the set runs through the origin
        return self.space.point((self.ray, r))

    def ray_intervals(self, upper=math.inf):
        out = {self.ray: (self.lo, self.hi)}
        if self.lo == 0.0:
            out.update({i: (0.0, 0.0) for i in range(self.space.n_rays) if i != self.ray})
        return out

    def descriptor(self):
        return {"kind": self.kind, "ray": self.ray, "lo": self.lo, "hi": self.hi}


class Segment(ConvexSet):
    """Geodesic segment ``[a, b]``, parametrized by ``combine(a, b, t)``."""

    kind = "segment"

    def __init__(self, space, a, b):
        super().__init__(space)
        self.a = space.point(a)
        self.b = space.point(b)

    def at(self, t):
        return self.space.combine(self.a, self.b, min(max(t, 0.0), 1.0))

    def contains(self, x, tol=None):
        sp = self.space
        L = sp.dist(self.a, self.b)
        tol = self._tol(L) if tol is None else tol
        # x lies on [a, b] iff the triangle inequality is tight
        return sp.dist(self.a, x) + sp.dist(x, self.b) <= L + tol

    def sample(self, rng, scale=2.0):
        return self.at(rng.uniform())

    @property
    def diameter(self):
        return self.space.dist(self.a, self.b)

    def descriptor(self):
        sp = self.space
        return {"kind": self.kind, "a": sp.to_list(self.a), "b": sp.to_list(self.b)}


def make_set(space, desc):
    """Build a convex set from a descriptor (see README for the vocabulary)."""
    desc = dict(desc)
    kind = desc.pop("kind", None)
    if kind in (None, "whole"):
        return WholeSpace(space)
    if kind == "ball":
        return Ball(space, desc["center"], desc["radius"])
    if kind == "halfspace":
        return HalfSpace(space, desc["normal"], desc["offset"])
    if kind == "box":
        return Box(space, desc["lower"], desc["upper"])
    if kind == "ray_interval":
        return RayInterval(space, desc["ray"], desc["lo"], desc["hi"])
    if kind == "segment":
        return Segment(space, desc["a"], desc["b"])
    raise SpaceError(f"unknown convex set kind {kind!r}")


def convex_contains(C, x, tol=None):
    """Membership test with a ``1e-9`` band at the boundary."""
    return C.contains(x, tol)
