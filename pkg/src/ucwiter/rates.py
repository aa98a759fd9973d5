"""Explicit rates of asymptotic regularity for Ishikawa iterations.

Every bound is evaluated twice: once exactly, in rational arithmetic on the
(binary) input values with an exact lower bound for the modulus, and once in
ordinary floating point.  The emitted bound is the larger of the two, so
rounding can only enlarge a certificate.  Branch conditions such as
``eps <= 2b`` are decided exactly; at equality both branches are evaluated
and the larger value is kept.

Guarantees come in two kinds:

``for-all-n>=N``
    ``d(x_n, T x_n) < eps`` for every ``n >= bound``.
``exists-N<=bound``
    some ``N`` in ``[k, bound]`` has the residual below ``eps``.  For ``h``
    the residual is ``d(x_N, T y_N)``; for the other existence bounds it is
    ``d(x_N, T x_N)``.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .iterate import ConstantTermRate, RescaledModulus

FOR_ALL = "for-all-n>=N"
EXISTS = "exists-N<=bound"


class RateError(ValueError):
    """Missing or malformed inputs to a rate formula."""


class HypothesisError(RateError):
    """The inputs violate a hypothesis of the theorem behind the formula."""


def _describe(f):
    if f is None:
        return None
    if hasattr(f, "descriptor"):
        return f.descriptor()
    return getattr(f, "__name__", repr(f))


@dataclass
class RateInputs:
    eps: float
    b: float
    modulus: object
    theta: Optional[Callable[[int], int]] = None
    gamma: Optional[Callable] = None
    L: int = 1
    N0: int = 0
    lam: Optional[float] = None
    delta: Optional[Callable] = None

    def __post_init__(self):
        if not self.eps > 0:
            raise RateError(f"eps must be positive, got {self.eps!r}")
        if not self.b > 0:
            raise RateError(f"b must be positive, got {self.b!r}")
        if int(self.L) != self.L or self.L < 1:
            raise RateError(f"L must be an integer >= 1, got {self.L!r}")
        if int(self.N0) != self.N0 or self.N0 < 0:
            raise RateError(f"N0 must be an integer >= 0, got {self.N0!r}")
        if self.lam is not None and not (0 < self.lam < 1):
            raise HypothesisError(f"constant lambda must lie in (0, 1), got {self.lam!r}")

    @classmethod
    def from_schedule(cls, eps, b, modulus, sched):
        return cls(eps, b, modulus, theta=sched.theta, gamma=sched.gamma, L=sched.L,
                   N0=sched.N0, lam=sched.constant_lambda, delta=sched.delta)

    def to_dict(self):
        return {"eps": float(self.eps), "b": float(self.b),
                "modulus": self.modulus.descriptor(), "theta": _describe(self.theta),
                "gamma": _describe(self.gamma), "L": int(self.L), "N0": int(self.N0),
                "lam": self.lam, "delta": _describe(self.delta)}


@dataclass
class RateCertificate:
    formula: str
    bound: int
    guarantee: str
    branch: str
    inputs: dict = field(default_factory=dict)
    exact_bound: Optional[int] = None
    float_bound: Optional[int] = None

    def to_dict(self):
        return {"formula": self.formula, "bound": self.bound, "guarantee": self.guarantee,
                "branch": self.branch, "inputs": self.inputs,
                "exact_bound": self.exact_bound, "float_bound": self.float_bound}


# ---------------------------------------------------------------------------
# evaluation machinery


class _Exact:
    """Rational arithmetic; the modulus is replaced by an exact lower bound."""

    num = staticmethod(Fraction)

    @staticmethod
    def eta(m, r, e):
        if e > 2:
            raise AssertionError(f"modulus argument eps={float(e)} > 2 inside the taken branch")
        return m.lower(r, e)

    @staticmethod
    def eta_tilde(m, r, e):
        if e > 2:
            raise AssertionError(f"modulus argument eps={float(e)} > 2 inside the taken branch")
        return m.lower_tilde(r, e)


class _Float:
    num = staticmethod(float)

    @staticmethod
    def eta(m, r, e):
        return m(r, min(e, 2.0))  # exact branch test guarantees e <= 2 up to one rounding

    @staticmethod
    def eta_tilde(m, r, e):
        return m.eval_tilde(r, min(e, 2.0))


def _ceil(x):
    return int(math.ceil(x))


def _branches(cond_exact, first, second):
    """Evaluate per the exact branch test; both at equality.

    ``cond_exact`` is ``-1`` (strictly inside the first branch), ``0``
    (boundary) or ``1`` (second branch).  ``first``/``second`` take a
    backend and return an int.
    """
    out = {}
    for be in (_Exact, _Float):
        if cond_exact < 0:
            out[be] = first(be)
        elif cond_exact > 0:
            out[be] = second(be)
        else:
            out[be] = max(first(be), second(be))
    branch = {-1: "main", 0: "boundary", 1: "otherwise"}[cond_exact]
    return out[_Exact], out[_Float], branch


def _cmp(a, b):
    a, b = Fraction(a), Fraction(b)
    return (a > b) - (a < b)


def _require(**kw):
    for k, v in kw.items():
        if v is None:
            raise RateError(f"missing certificate input {k!r}")


def _cert(formula, guarantee, exact, flt, branch, inputs):
    bound = max(exact, flt)
    if bound < 0:
        raise RateError(f"{formula} produced a negative bound")
    return RateCertificate(formula, int(bound), guarantee, branch, inputs, int(exact), int(flt))


# ---------------------------------------------------------------------------
# existence-form bounds


def _h(eps, k, modulus, b, theta, formula="h", extra=None):
    _require(theta=theta, modulus=modulus)
    if not (eps > 0 and b > 0):
        raise RateError("need eps > 0 and b > 0")
    if int(k) != k or k < 0:
        raise RateError(f"k must be a nonnegative integer, got {k!r}")
    k = int(k)

    def first(be):
        e, bb = be.num(eps), be.num(b)
        inner = _ceil((bb + 1) / (e * be.eta(modulus, bb, e / bb)))
        return int(theta(inner + k))

    ex, fl, branch = _branches(_cmp(eps, 2 * Fraction(b)), first, lambda be: k)
    inputs = {"eps": float(eps), "k": k, "b": float(b), "modulus": modulus.descriptor(),
              "theta": _describe(theta), **(extra or {})}
    return _cert(formula, EXISTS, ex, fl, branch, inputs)


def h_certificate(eps, k, modulus, b, theta):
    """Certificate for ``h``: some ``N`` in ``[k, h]`` has ``d(x_N, T y_N) < eps``."""
    return _h(eps, k, modulus, b, theta)


def h_bound(eps, k, modulus, b, theta):
    """``theta(ceil((b + 1) / (eps eta(b, eps / b))) + k)`` if ``eps <= 2b``, else ``k``."""
    return h_certificate(eps, k, modulus, b, theta).bound


def psi_certificate(eps, k, modulus, b, theta, L, N0):
    if int(L) != L or L < 1 or int(N0) != N0 or N0 < 0:
        raise RateError(f"need integers L >= 1 and N0 >= 0, got L={L!r}, N0={N0!r}")
    e = Fraction(eps) / int(L)  # exact; the float path sees the same rational
    c = _h(e, int(k) + int(N0), modulus, b, theta, formula="psi",
           extra={"L": int(L), "N0": int(N0), "eps_outer": float(eps), "k_outer": int(k)})
    c.inputs["eps"] = float(eps)
    return c


def psi_bound(eps, k, modulus, b, theta, L, N0):
    """``h(eps / L, k + N0)``: some ``N`` in ``[k, psi]`` has ``d(x_N, T x_N) < eps``."""
    return psi_certificate(eps, k, modulus, b, theta, L, N0).bound


def phi_afp_certificate(eps, modulus, b, theta, L, N0):
    c = psi_certificate(eps, 0, modulus, b, theta, L, N0)
    c.formula = "phi_afp"
    return c


def phi_afp(eps, modulus, b, theta, L, N0):
    """Approximate-fixed-point bound ``psi(eps, 0)``."""
    return phi_afp_certificate(eps, modulus, b, theta, L, N0).bound


def km_rate(eps, modulus, b, theta, schedule=None):
    """``h(eps, 0)`` promoted to a for-all guarantee for Krasnoselski-Mann orbits.

    The promotion is valid because KM residuals are nonincreasing; passing a
    schedule whose ``s`` is not identically zero raises.
    """
    if schedule is not None and not schedule.s_zero:
        raise HypothesisError("km_rate requires s_n == 0 for all n")
    c = _h(eps, 0, modulus, b, theta, formula="km_rate")
    c.guarantee = FOR_ALL
    return c


# ---------------------------------------------------------------------------
# for-all bounds


def _main_family(inp, formula, use_tilde):
    m = inp.modulus
    _require(theta=inp.theta, gamma=inp.gamma)
    if not m.monotone:
        raise HypothesisError("the main rate requires a monotone modulus")
    if use_tilde and not m.factored:
        raise RateError(f"{m.name} modulus has no factored form")
    L, N0 = int(inp.L), int(inp.N0)

    def tail(be):
        e, bb = be.num(inp.eps), be.num(inp.b)
        return int(inp.gamma(e / (8 * bb))) + N0 + 1

    def first(be):
        e, bb = be.num(inp.eps), be.num(inp.b)
        arg = e / (2 * L * bb)
        if use_tilde:
            inner = _ceil(L * (bb + 1) / (e * be.eta_tilde(m, bb, arg)))
        else:
            inner = _ceil(2 * L * (bb + 1) / (e * be.eta(m, bb, arg)))
        return int(inp.theta(inner + tail(be)))

    ex, fl, branch = _branches(_cmp(inp.eps, 4 * L * Fraction(inp.b)), first, tail)
    return _cert(formula, FOR_ALL, ex, fl, branch, inp.to_dict())


def phi_main(inputs):
    """Rate of asymptotic regularity: ``d(x_n, T x_n) < eps`` for all ``n >= bound``.

    ``theta(ceil(2L(b+1) / (eps eta(b, eps/(2Lb)))) + gamma(eps/8b) + N0 + 1)``
    when ``eps <= 4Lb`` and ``gamma(eps/8b) + N0 + 1`` otherwise.
    """
    return _main_family(inputs, "phi_main", use_tilde=False)


def phi_factored(inputs):
    """Variant of :func:`phi_main` for moduli of the form ``eps * eta~(r, eps)``."""
    return _main_family(inputs, "phi_factored", use_tilde=True)


def _const_lambda_M(be, eps, d, lam, N0, delta):
    e, dd, lm = be.num(eps), be.num(d), be.num(lam)
    return int(delta(e / (8 * dd * (1 - lm)))) + int(N0) + 1


def _check_lambda(lam):
    if lam is None or not (0 < lam < 1):
        raise HypothesisError(f"constant lambda must lie in (0, 1), got {lam!r}")


def phi_const_lambda(eps, modulus, d_C, lam, L, N0, delta, use_factored=None):
    """Rate for constant ``lambda`` on a domain of diameter ``d_C``.

    ``ceil(2L(d+1) / (lam(1-lam) eps eta(d, eps/(2Ld)))) + M`` for
    ``eps <= 4Ld``, ``M`` otherwise, with ``M = delta(eps/(8d(1-lam))) + N0 + 1``.
    With ``use_factored`` (default: whenever the modulus factors) the main
    term becomes ``ceil(L(d+1) / (lam(1-lam) eps eta~(d, eps/(2Ld))))``.
    """
    _check_lambda(lam)
    _require(delta=delta, modulus=modulus)
    inp = RateInputs(eps, d_C, modulus, L=L, N0=N0, lam=lam, delta=delta)
    tilde = modulus.factored if use_factored is None else bool(use_factored)
    if tilde and not modulus.factored:
        raise RateError(f"{modulus.name} modulus has no factored form")
    L = int(L)

    def M(be):
        return _const_lambda_M(be, eps, d_C, lam, N0, delta)

    def first(be):
        e, dd, lm = be.num(eps), be.num(d_C), be.num(lam)
        c = lm * (1 - lm)
        arg = e / (2 * L * dd)
        if tilde:
            main = _ceil(L * (dd + 1) / (c * e * be.eta_tilde(modulus, dd, arg)))
        else:
            main = _ceil(2 * L * (dd + 1) / (c * e * be.eta(modulus, dd, arg)))
        return main + M(be)

    ex, fl, branch = _branches(_cmp(eps, 4 * L * Fraction(d_C)), first, M)
    info = inp.to_dict()
    info["factored"] = tilde
    return _cert("phi_const_lambda", FOR_ALL, ex, fl, branch, info)


def phi_cat0(eps, d_C, lam, L, N0, delta):
    """CAT(0) rate ``ceil(D / eps^2) + M`` with ``D = 16 L^2 d(d+1) / (lam(1-lam))``."""
    from .modulus import cat0_modulus

    _check_lambda(lam)
    _require(delta=delta)
    inp = RateInputs(eps, d_C, cat0_modulus(), L=L, N0=N0, lam=lam, delta=delta)
    L = int(L)

    def M(be):
        return _const_lambda_M(be, eps, d_C, lam, N0, delta)

    def first(be):
        e, dd, lm = be.num(eps), be.num(d_C), be.num(lam)
        D = 16 * L * L * dd * (dd + 1) / (lm * (1 - lm))
        return _ceil(D / (e * e)) + M(be)

    ex, fl, branch = _branches(_cmp(eps, 4 * L * Fraction(d_C)), first, M)
    return _cert("phi_cat0", FOR_ALL, ex, fl, branch, inp.to_dict())


# ---------------------------------------------------------------------------
# certificate constructors for constant lambda


def theta_const(lam):
    """``theta(n) = ceil(n / (lam (1 - lam)))``."""
    if not (0 < lam < 1):
        raise RateError(f"theta_const needs lambda in (0, 1), got {lam!r}")
    return ConstantTermRate(Fraction(lam) * (1 - Fraction(lam)))


def gamma_from_delta(delta, lam):
    """``gamma(eps) = delta(eps / (1 - lam))``."""
    if not (0 < lam < 1):
        raise RateError(f"gamma_from_delta needs lambda in (0, 1), got {lam!r}")
    return RescaledModulus(delta, 1 / (1 - Fraction(lam)))
