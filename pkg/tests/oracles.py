"""Brute-force reference computations used only by the tests."""

import math

import numpy as np


def golden_section(f, lo, hi, tol=1e-12):
    """Plain golden-section search for a unimodal ``f`` on ``[lo, hi]``."""
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


class GridCenter:
    """Grid oracle for the Euclidean Chebyshev center of ``points`` over
    ``{y : inside(y)}``.

    A coarse grid over ``[lo, hi]^2`` locates the near-optimal region, which
    is then re-gridded at ``pitch``.  Since the true minimizer ``y*`` has a
    grid point within ``pitch / sqrt(2)``, it lies within that distance of
    the near-optimal set ``{g : r(g) <= r_grid + pitch}``.  The set is kept
    (not just its argmin): with two active points the radius grows only
    quadratically along their bisector, so the argmin alone can sit far from
    ``y*``.
    """

    def __init__(self, points, inside=None, lo=-2.0, hi=2.0, coarse=1e-2, pitch=1e-3):
        self.P = np.asarray(points, dtype=float)
        self.inside = inside
        self.pitch = pitch
        n = int(round((hi - lo) / coarse)) + 1
        G, r = self._eval(np.linspace(lo, hi, n), np.linspace(lo, hi, n))
        near = G[r <= r.min() + 2 * coarse]
        a, b = near.min(axis=0) - 2 * coarse, near.max(axis=0) + 2 * coarse
        xs = np.arange(a[0], b[0] + pitch, pitch)
        ys = np.arange(a[1], b[1] + pitch, pitch)
        G, r = self._eval(xs, ys)
        self.radius = float(r.min())
        self.argmin = G[int(np.argmin(r))]
        self.near = G[r <= self.radius + pitch]

    def _eval(self, xs, ys):
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        G = np.stack([X.ravel(), Y.ravel()], axis=1)
        if self.inside is not None:
            G = G[self.inside(G)]
        r = np.sqrt(((G[:, None, :] - self.P[None, :, :]) ** 2).sum(axis=2)).max(axis=1)
        return G, r

    def distance_to_near_set(self, y):
        return float(np.min(np.linalg.norm(self.near - np.asarray(y), axis=1)))

    def matches(self, y, radius):
        """``y`` within two pitches of the near-optimal set, radius within two pitches."""
        return (self.distance_to_near_set(y) <= 2 * self.pitch
                and radius <= self.radius + 1e-12
                and self.radius - radius <= 2 * self.pitch)
