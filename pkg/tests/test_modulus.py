import math
from fractions import Fraction

import numpy as np
import pytest

from ucwiter.modulus import (ModulusError, cat0_modulus, constant_modulus, groetsch_bound,
                             lp_modulus, make_modulus, table_modulus, verify_groetsch,
                             verify_modulus)
from ucwiter.spaces import Euclidean, HyperbolicPlane, LpSpace, StarTree


def test_cat0_values():
    m = cat0_modulus()
    assert m(1, 1) == 0.125
    assert m(7, 2) == 0.5
    assert m.eval_tilde(1, 0.4) == pytest.approx(0.05)
    assert m.lower(1, Fraction(1, 2)) == Fraction(1, 32)


def test_lp_values():
    assert lp_modulus(2)(1, 2) == 1.0
    assert lp_modulus(2)(1, 1) == pytest.approx(1 - math.sqrt(3) / 2, abs=1e-15)
    m = lp_modulus(3)
    for e in (0.01, 0.5, 1.9):
        assert m(1, e) == m(100, e)


def test_lp_small_eps_has_no_cancellation():
    # 1 - (1 - t)^(1/p) ~ t/p for tiny t
    m = lp_modulus(4)
    e = 1e-4
    assert m(1, e) == pytest.approx((e / 2) ** 4 / 4, rel=1e-6)


@pytest.mark.parametrize("p", [2, 3, 4, 5.5])
def test_lp_exact_lower_bound_is_below_float_and_close(p):
    m = lp_modulus(p)
    for e in (1e-3, 0.1, 0.7, 1.5, 2.0):
        lo = m.lower(1, e)
        assert lo <= Fraction(m(1, e)) * (1 + Fraction(1, 10 ** 12))
        assert float(lo) == pytest.approx(m(1, e), rel=1e-12)


def test_lp_rejects_p_below_two():
    with pytest.raises(ModulusError):
        lp_modulus(1.5)


@pytest.mark.parametrize("r, eps", [(0, 1), (-1, 1), (1, 0), (1, 2.5)])
def test_domain_errors(r, eps):
    with pytest.raises(ModulusError):
        cat0_modulus()(r, eps)


def test_factored_forms_agree():
    rng = np.random.default_rng(0)
    for m in (cat0_modulus(), lp_modulus(3), lp_modulus(4)):
        prev = 0.0
        for e in np.sort(rng.uniform(1e-3, 2, 200)):
            assert m(1.0, e) == pytest.approx(e * m.eval_tilde(1.0, e), rel=1e-12)
            assert m.eval_tilde(1.0, e) >= prev - 1e-15
            prev = m.eval_tilde(1.0, e)


def test_groetsch_bound_examples():
    m = cat0_modulus()
    assert groetsch_bound(m, 1.3, 1.0, 0.0) == 1.3
    assert groetsch_bound(m, 1.3, 1.0, 1.0) == 1.3
    assert groetsch_bound(m, 1.0, 2.0, 0.5) == 0.75


def test_table_modulus_rounds_conservatively():
    m = table_modulus([1.0, 2.0], [0.5, 1.0, 2.0], [[0.1, 0.2, 0.5], [0.05, 0.1, 0.4]])
    assert m(1.5, 0.9) == 0.05   # r up to 2, eps down to 0.5
    assert m(1.0, 1.0) == 0.2
    with pytest.raises(ModulusError):
        m(3.0, 1.0)
    with pytest.raises(ModulusError):
        m(1.0, 0.1)
    with pytest.raises(ModulusError):
        table_modulus([1.0, 2.0], [1.0], [[0.1], [0.2]])  # increasing in r


def test_make_modulus():
    assert make_modulus({"kind": "cat0"}).name == "cat0"
    assert make_modulus({"kind": "lp", "p": 3}).params == {"p": 3.0}
    with pytest.raises(ModulusError):
        make_modulus({"kind": "nope"})


@pytest.mark.parametrize("space, m", [
    (Euclidean(2), cat0_modulus()),
    (HyperbolicPlane(), cat0_modulus()),
    (StarTree(5), cat0_modulus()),
    (LpSpace(3, 3), lp_modulus(3)),
], ids=["euclidean", "hyperbolic", "rtree", "l3"])
def test_verify_modulus_small(space, m):
    rep = verify_modulus(space, m, trials=1500, rng_seed=1)
    assert rep.ok, rep.witness


def test_fake_modulus_is_caught_with_witness():
    rep = verify_modulus(Euclidean(2), constant_modulus(0.999), trials=500)
    assert rep.violations > 0
    assert set(rep.witness) >= {"a", "x", "y", "r", "eps", "margin"}


def test_cat0_modulus_fails_on_l4():
    # l_4 is not CAT(0); the quadratic modulus is too optimistic for it
    rep = verify_modulus(LpSpace(2, 4), cat0_modulus(), trials=3000, rng_seed=2)
    assert rep.violations > 0


def test_groetsch_consequences_small():
    counts = verify_groetsch(HyperbolicPlane(), cat0_modulus(), trials=800, rng_seed=5)
    assert counts == {"i": 0, "ii": 0, "iii": 0, "iv": 0}
