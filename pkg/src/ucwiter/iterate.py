"""Picard, Krasnoselski-Mann and Ishikawa orbits with per-step diagnostics.

An Ishikawa step with weights ``lam_n, s_n`` reads::

    y_n     = (1 - s_n) x_n (+) s_n T x_n
    x_{n+1} = (1 - lam_n) x_n (+) lam_n T y_n

``s_n == 0`` gives the Krasnoselski-Mann iteration and ``lam_n == 1, s_n == 0``
the Picard iteration; all three share one loop, so the special cases agree
bit for bit.

Schedules carry the certificates the rate formulas consume: a rate of
divergence ``theta`` for ``sum lam_n (1 - lam_n)``, Cauchy moduli for
``sum s_n`` and ``sum s_n (1 - lam_n)``, and integers ``L, N0`` with
``s_n <= 1 - 1/L`` for ``n >= N0``.
"""

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

import numpy as np


class DomainViolation(RuntimeError):
    def __init__(self, step, msg=None):
        super().__init__(msg or f"iterate left the domain at step {step}")
        self.step = step


class ScheduleError(ValueError):
    """A schedule parameter or certificate is invalid."""


# ---------------------------------------------------------------------------
# certificates for scalar series


class DivergenceRate:
    """``theta: N -> N`` with ``sum_{i <= theta(n)} a_i >= n``."""

    def __call__(self, n):
        raise NotImplementedError

    def descriptor(self):
        raise NotImplementedError


class ConstantTermRate(DivergenceRate):
    """``theta(n) = ceil(n / c)`` for a series whose terms all equal ``c``."""

    def __init__(self, c):
        self.c = Fraction(c)
        if not self.c > 0:
            raise ScheduleError(f"a divergence rate needs a positive term, got {c!r}")

    def __call__(self, n):
        return math.ceil(Fraction(n) / self.c)

    def descriptor(self):
        return {"kind": "constant_term", "c": float(self.c)}


class LinearRate(DivergenceRate):
    """``theta(n) = ceil(slope * n)``; lets configs supply their own certificate."""

    def __init__(self, slope):
        self.slope = Fraction(slope)

    def __call__(self, n):
        return math.ceil(self.slope * n)

    def descriptor(self):
        return {"kind": "linear", "slope": float(self.slope)}


class CauchyModulus:
    """``gamma: (0, inf) -> N`` with ``|S_{gamma(e) + m} - S_{gamma(e)}| < e``."""

    def __call__(self, eps):
        raise NotImplementedError

    def descriptor(self):
        raise NotImplementedError


class ZeroModulus(CauchyModulus):
    """For the all-zero series."""

    def __call__(self, eps):
        return 0

    def descriptor(self):
        return {"kind": "zero"}


class GeometricTailModulus(CauchyModulus):
    """For series dominated by ``c q^n``: the least ``m`` with
    ``c q^(m+1) / (1 - q) <= eps``, computed exactly."""

    def __init__(self, c, q):
        self.c, self.q = Fraction(c), Fraction(q)
        if not (0 < self.q < 1) or self.c < 0:
            raise ScheduleError(f"need c >= 0 and 0 < q < 1, got c={c!r}, q={q!r}")

    def tail(self, m):
        return self.c * self.q ** (m + 1) / (1 - self.q)

    def __call__(self, eps):
        eps = Fraction(eps)
        if self.tail(0) <= eps:
            return 0
        guess = math.log(float(eps) * float(1 - self.q) / float(self.c)) / math.log(float(self.q))
        m = max(0, int(guess) - 2)
        while self.tail(m) > eps:
            m += 1
        while m > 0 and self.tail(m - 1) <= eps:
            m -= 1
        return m

    def descriptor(self):
        return {"kind": "geometric_tail", "c": float(self.c), "q": float(self.q)}


class InverseSquareTailModulus(CauchyModulus):
    """For ``sum 1/(n+2)^2``: the tail beyond ``m`` is below ``1/(m+2)``."""

    def __call__(self, eps):
        return max(0, math.ceil(1 / Fraction(eps)) - 2)

    def descriptor(self):
        return {"kind": "inverse_square_tail"}


class RescaledModulus(CauchyModulus):
    """``gamma(eps) = inner(eps * factor)``."""

    def __init__(self, inner, factor):
        self.inner, self.factor = inner, Fraction(factor)

    def __call__(self, eps):
        return self.inner(Fraction(eps) * self.factor)

    def descriptor(self):
        return {"kind": "rescaled", "inner": self.inner.descriptor(), "factor": float(self.factor)}


# ---------------------------------------------------------------------------
# schedules


@dataclass
class ScalarSchedule:
    lambda_at: Callable[[int], float]
    s_at: Callable[[int], float]
    theta: Optional[DivergenceRate] = None
    gamma: Optional[CauchyModulus] = None
    L: Optional[int] = None
    N0: Optional[int] = None
    delta: Optional[CauchyModulus] = None
    constant_lambda: Optional[float] = None
    s_zero: bool = False
    desc: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def arrays(self, n):
        """``(lam_0..lam_{n-1}, s_0..s_{n-1})``, memoized so that every consumer
        sees identical values."""
        have = self._cache.get("n", 0)
        if n > have:
            new = max(n, 2 * have)
            lam = np.array([float(self.lambda_at(i)) for i in range(new)])
            s = np.array([float(self.s_at(i)) for i in range(new)])
            self._cache.update(n=new, lam=lam, s=s)
        return self._cache["lam"][:n], self._cache["s"][:n]

    def alpha(self, n):
        """Partial sums ``alpha_k = sum_{i <= k} s_i (1 - lam_i)``, ``k < n``."""
        lam, s = self.arrays(n)
        return np.cumsum(s * (1.0 - lam))

    def descriptor(self):
        return dict(self.desc)


def constant_lambda(value):
    return {"kind": "constant", "value": value}


def make_schedule(desc):
    """Build a schedule from ``{"lambda": {...}, "s": {...}}``.

    ``lambda`` kinds: ``constant`` (``value``), ``alternating``
    (``1/2 + (-1)^n / 4``).  ``s`` kinds: ``zero``, ``geometric``
    (``c q^n``), ``inverse_square`` (``1/(n+2)^2``).  Optional overrides:
    ``L``, ``N0`` and ``theta_slope`` replace the derived certificates
    (and are validated like any user-supplied certificate).
    """
    lam_d = dict(desc.get("lambda", {"kind": "constant", "value": 0.5}))
    s_d = dict(desc.get("s", {"kind": "zero"}))
    lk, sk = lam_d.get("kind"), s_d.get("kind", "zero")

    const = None
    if lk == "constant":
        const = float(lam_d["value"])
        if not (0.0 <= const <= 1.0):
            raise ScheduleError(f"lambda must lie in [0, 1], got {const!r}")
        lambda_at = lambda n: const
        term = Fraction(const) * (1 - Fraction(const))
    elif lk == "alternating":
        lambda_at = lambda n: 0.75 if n % 2 == 0 else 0.25
        term = Fraction(3, 16)
    else:
        raise ScheduleError(f"unknown lambda schedule {lk!r}")
    theta = ConstantTermRate(term) if term > 0 else None

    if sk == "zero":
        s_at, delta, L, N0 = (lambda n: 0.0), ZeroModulus(), 1, 0
    elif sk == "geometric":
        c, q = float(s_d.get("c", 0.5)), float(s_d.get("q", 0.5))
        if not (0.0 <= c <= 1.0 and 0.0 < q < 1.0):
            raise ScheduleError(f"geometric s needs 0 <= c <= 1, 0 < q < 1, got c={c}, q={q}")
        s_at = lambda n: c * q ** n
        delta = GeometricTailModulus(c, q)
        if c < 1.0:
            L, N0 = math.ceil(1 / (1 - Fraction(c))), 0
        else:
            L, N0 = 2, math.ceil(math.log(2) / -math.log(q))
    elif sk == "inverse_square":
        s_at, delta, L, N0 = (lambda n: 1.0 / (n + 2) ** 2), InverseSquareTailModulus(), 2, 0
    else:
        raise ScheduleError(f"unknown s schedule {sk!r}")

    if const is not None and const < 1.0 and sk != "zero":
        gamma = RescaledModulus(delta, 1 / (1 - Fraction(const)))
    else:
        gamma = delta  # 1 - lam_n <= 1, so a modulus for sum s_n also works
    if "theta_slope" in desc:
        theta = LinearRate(desc["theta_slope"])
    L = int(desc.get("L", L))
    N0 = int(desc.get("N0", N0))
    return ScalarSchedule(lambda_at, s_at, theta=theta, gamma=gamma, L=L, N0=N0, delta=delta,
                          constant_lambda=const, s_zero=(sk == "zero"), desc=dict(desc))


def validate_schedule(sched, horizon, eps_ladder=(1.0, 0.3, 0.1, 0.03, 0.01, 1e-3)):
    """Check the schedule's certificates up to ``horizon``; raise on failure.

    The messages name the violated hypothesis and the first offending index.
    """
    lam, s = sched.arrays(horizon + 1)
    if np.any((lam < 0) | (lam > 1)):
        raise ScheduleError(f"lambda_n outside [0, 1] at n={int(np.argmax((lam < 0) | (lam > 1)))}")
    if np.any((s < 0) | (s > 1)):
        raise ScheduleError(f"s_n outside [0, 1] at n={int(np.argmax((s < 0) | (s > 1)))}")
    if sched.theta is not None:
        partial = np.cumsum(lam * (1.0 - lam))
        n = 0
        while True:
            t = sched.theta(n)
            if t > horizon:
                break
            if partial[t] < n - 1e-9 * max(1, n):
                raise ScheduleError(
                    f"sum lambda_n(1-lambda_n) divergence certificate failed at n={n}: "
                    f"partial sum up to theta(n)={t} is {partial[t]:.6g}")
            n += 1
    if sched.L is not None:
        if sched.L < 1 or (sched.N0 or 0) < 0:
            raise ScheduleError(f"need L >= 1 and N0 >= 0, got L={sched.L}, N0={sched.N0}")
        bound = 1.0 - 1.0 / sched.L
        tail = s[sched.N0:]
        bad = np.nonzero(tail > bound + 1e-12)[0]
        if bad.size:
            raise ScheduleError(f"s_n <= 1 - 1/L fails at n={int(bad[0]) + sched.N0} "
                                f"(s_n={tail[bad[0]]:.6g}, L={sched.L})")
    for name, mod, terms in (("gamma", sched.gamma, s * (1.0 - lam)), ("delta", sched.delta, s)):
        if mod is None:
            continue
        partial = np.cumsum(terms)
        for e in eps_ladder:
            g = mod(e)
            if g > horizon:
                continue
            osc = partial[g:] - partial[g]
            if osc.max(initial=0.0) >= e:
                m = int(np.argmax(osc >= e))
                raise ScheduleError(f"Cauchy modulus {name} fails at eps={e}, m={m}")


# ---------------------------------------------------------------------------
# orbits


@dataclass
class OrbitRecord:
    """Distances along an orbit; a cache recomputable from ``x0`` and the map.

    Per-point arrays have ``steps + 1`` entries, per-step arrays ``steps``.
    """

    kind: str
    steps: int
    lam: np.ndarray
    s: np.ndarray
    residual: np.ndarray        # d(x_n, T x_n)
    residual_y: np.ndarray      # d(x_n, T y_n)
    d_y_x: np.ndarray           # d(y_n, x_n)
    d_y_Tx: np.ndarray          # d(y_n, T x_n)
    d_y_Ty: np.ndarray          # d(y_n, T y_n)
    step_len: np.ndarray        # d(x_n, x_{n+1})
    d_Ty_next: np.ndarray       # d(T y_n, x_{n+1})
    dist_p: Optional[np.ndarray] = None     # d(x_n, p)
    dist_y_p: Optional[np.ndarray] = None   # d(y_n, p)
    points: Optional[list] = None
    final: object = None
    fixed_point: object = None


def _orbit(kind, T, x0, lam, s, steps, p=None, keep_points=True, check_domain=True):
    sp = T.space
    d = sp.dist
    comb = sp.combine
    contains = T.domain.contains
    N = steps + 1
    res, res_y, dyx, dyTx, dyTy = (np.empty(N) for _ in range(5))
    step_len, dTyn = np.empty(steps), np.empty(steps)
    dp = np.empty(N) if p is not None else None
    dyp = np.empty(N) if p is not None else None
    pts = [] if keep_points else None
    x = x0
    for n in range(N):
        sn = s[n]
        Tx = T(x)
        if sn == 0.0:
            y, Ty = x, Tx
        else:
            y = comb(x, Tx, sn)
            Ty = T(y)
        res[n] = d(x, Tx)
        res_y[n] = d(x, Ty)
        dyx[n] = d(y, x)
        dyTx[n] = d(y, Tx)
        dyTy[n] = d(y, Ty)
        if p is not None:
            dp[n] = d(x, p)
            dyp[n] = d(y, p)
        if keep_points:
            pts.append(x)
        if n == steps:
            break
        xn = comb(x, Ty, lam[n])
        step_len[n] = d(x, xn)
        dTyn[n] = d(Ty, xn)
        if check_domain and not contains(xn):
            raise DomainViolation(n + 1)
        x = xn
    return OrbitRecord(kind, steps, lam, s, res, res_y, dyx, dyTx, dyTy, step_len, dTyn,
                       dp, dyp, pts, x, p)


def picard_orbit(T, x0, steps, p=None, keep_points=True):
    """``x_{n+1} = T x_n``."""
    return _orbit("picard", T, x0, np.ones(steps + 1), np.zeros(steps + 1), steps, p, keep_points)


def km_orbit(T, x0, sched, steps, p=None, keep_points=True):
    """``x_{n+1} = (1 - lam_n) x_n (+) lam_n T x_n``; the schedule's ``s`` is ignored."""
    lam, _ = sched.arrays(steps + 1)
    return _orbit("km", T, x0, lam, np.zeros(steps + 1), steps, p, keep_points)


def ishikawa_orbit(T, x0, sched, steps, p=None, keep_points=True):
    lam, s = sched.arrays(steps + 1)
    return _orbit("ishikawa", T, x0, lam, s, steps, p, keep_points)


def first_hit(orbit, eps, start=0, which="x"):
    """Least recorded ``n >= start`` with ``d(x_n, T x_n) < eps`` (``which="x"``)
    or ``d(x_n, T y_n) < eps`` (``which="y"``); ``None`` if there is none."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    arr = orbit.residual if which == "x" else orbit.residual_y
    idx = np.nonzero(arr[start:] < eps)[0]
    return int(idx[0]) + start if idx.size else None


# ---------------------------------------------------------------------------
# inequality-chain checks


@dataclass
class ChainReport:
    steps: int
    violations: list

    @property
    def count(self):
        return len(self.violations)

    @property
    def ok(self):
        return not self.violations


def _tol(atol, *vals):
    return atol * np.maximum(1.0, np.maximum.reduce([np.abs(v) for v in vals]))


def check_lemma41(orbit, sched=None, p=None, atol=1e-9, limit=100):
    """Verify the basic Ishikawa identities and inequalities at every step.

    Checked, with ``R_n = d(x_n, T x_n)``:

    * ``d(x_n, x_{n+1}) = lam_n d(x_n, T y_n)`` and
      ``d(T y_n, x_{n+1}) = (1 - lam_n) d(x_n, T y_n)``,
    * ``d(y_n, x_n) = s_n R_n`` and ``d(y_n, T x_n) = (1 - s_n) R_n``,
    * ``(1 - s_n) R_n <= d(x_n, T y_n) <= (1 + s_n) R_n``,
    * ``d(y_n, T y_n) <= R_n``,
    * ``R_{n+1} <= (1 + 2 s_n (1 - lam_n)) R_n``,
    * with a fixed point ``p``: ``d(x_n, p)`` nonincreasing,
      ``d(y_n, p) <= d(x_n, p)`` and ``R_n, d(x_n, T y_n) <= 2 d(x_n, p)``.

    Returns the first ``limit`` violations as ``(step, check, excess)``.
    """
    if sched is not None:
        lam_s, s_s = sched.arrays(orbit.steps + 1)
        if not (np.array_equal(lam_s, orbit.lam) or orbit.kind == "picard"):
            raise ScheduleError("orbit was not generated with this schedule")
    if p is not None and orbit.fixed_point is None:
        raise ValueError("the orbit was generated without a fixed point; pass p to the "
                         "orbit constructor")
    n = orbit.steps
    lam, s = orbit.lam[:n], orbit.s[:n]
    R, Ry = orbit.residual, orbit.residual_y
    checks = {
        "step=lam*d(x,Ty)": np.abs(orbit.step_len - lam * Ry[:n]) - _tol(atol, Ry[:n]),
        "d(Ty,x+)=(1-lam)*d(x,Ty)": np.abs(orbit.d_Ty_next - (1 - lam) * Ry[:n]) - _tol(atol, Ry[:n]),
        "d(y,x)=s*R": np.abs(orbit.d_y_x - orbit.s * R) - _tol(atol, R),
        "d(y,Tx)=(1-s)*R": np.abs(orbit.d_y_Tx - (1 - orbit.s) * R) - _tol(atol, R),
        "(1-s)R<=d(x,Ty)": (1 - orbit.s) * R - Ry - _tol(atol, R),
        "d(x,Ty)<=(1+s)R": Ry - (1 + orbit.s) * R - _tol(atol, R),
        "d(y,Ty)<=R": orbit.d_y_Ty - R - _tol(atol, R),
        "R+<=(1+2s(1-lam))R": R[1:] - (1 + 2 * s * (1 - lam)) * R[:n] - _tol(atol, R[:n]),
    }
    if orbit.fixed_point is not None:
        P = orbit.dist_p
        checks.update({
            "d(x+,p)<=d(x,p)": P[1:] - P[:n] - _tol(atol, P[:n]),
            "d(y,p)<=d(x,p)": orbit.dist_y_p - P - _tol(atol, P),
            "R<=2d(x,p)": R - 2 * P - _tol(atol, P),
            "d(x,Ty)<=2d(x,p)": Ry - 2 * P - _tol(atol, P),
        })
    out = []
    for name, excess in checks.items():
        for i in np.nonzero(excess > 0)[0][:limit]:
            out.append((int(i), name, float(excess[i])))
    out.sort()
    return ChainReport(n, out[:limit] if limit else out)


def check_main_lemma(orbit, modulus, atol=1e-9):
    """Instrumented check of the per-step decrease toward a fixed point.

    At each step with ``r = d(x_n, p) > 0`` and ``a = d(x_n, T y_n) > 0``
    the preconditions hold with ``gamma = beta = beta~ = r``; the conclusion
    ``d(x_{n+1}, p) <= r - 2 r lam_n (1 - lam_n) eta(r, a / r)`` is checked,
    and likewise the factored form ``r - 2 a lam_n (1 - lam_n) eta~(r, a/r)``
    when the modulus provides one.  Returns the list of violating steps.
    """
    if orbit.fixed_point is None:
        raise ValueError("orbit has no fixed point attached")
    P, Ry = orbit.dist_p, orbit.residual_y
    bad = []
    for n in range(orbit.steps):
        r, a = P[n], Ry[n]
        if r <= 0.0 or a <= 0.0:
            continue
        e = min(a / r, 2.0)  # a <= 2 r up to rounding
        c = 2.0 * orbit.lam[n] * (1.0 - orbit.lam[n])
        bounds = [r - c * r * modulus(r, e)]
        if modulus.factored:
            bounds.append(r - c * a * modulus.eval_tilde(r, e))
        if P[n + 1] > max(bounds) + atol * max(1.0, r):
            bad.append(n)
    return bad


# ---------------------------------------------------------------------------
# dumps


def write_orbit_csv(orbit, path, metadata=None):
    """Write ``n, d(x_n,Tx_n), d(x_n,Ty_n), d(x_n,p)`` rows plus a JSON sidecar."""
    path = Path(path)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["n", "d_x_Tx", "d_x_Ty", "d_x_p"])
        for n in range(orbit.steps + 1):
            dp = "" if orbit.dist_p is None else repr(float(orbit.dist_p[n]))
            w.writerow([n, repr(float(orbit.residual[n])), repr(float(orbit.residual_y[n])), dp])
    meta = {"kind": orbit.kind, "steps": orbit.steps, **(metadata or {})}
    meta_path = path.with_suffix(".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True))
    return path, meta_path


def write_plot_data(orbit, path):
    """Two-column ``n, d(x_n, T x_n)`` file for external plotting."""
    np.savetxt(path, np.column_stack([np.arange(orbit.steps + 1), orbit.residual]),
               delimiter=",", header="n,d_x_Tx", comments="", fmt=["%d", "%.17g"])
    return Path(path)
