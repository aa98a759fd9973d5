"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed together at the end
of the module (also under pytest's output capture).  Run directly with
``python3 tests/test_acceptance.py`` for the same report without pytest.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import GridCenter  # noqa: E402
from ucwiter import harness  # noqa: E402
from ucwiter.analysis import BoundedSequence, asymptotic_center, fixed_point_probe  # noqa: E402
from ucwiter.iterate import (GeometricTailModulus, ZeroModulus, check_lemma41,  # noqa: E402
                             ishikawa_orbit, make_schedule)
from ucwiter.mappings import (averaged, compose, identity_map, projection_map,  # noqa: E402
                              ray_cycle_map, rotation_map, scale_map, translation_map)
from ucwiter.modulus import cat0_modulus, lp_modulus, verify_groetsch, verify_modulus  # noqa: E402
from ucwiter.rates import (RateInputs, gamma_from_delta, h_bound, phi_cat0,  # noqa: E402
                           phi_const_lambda, phi_factored, phi_main, psi_bound, theta_const)
from ucwiter.spaces import (Ball, Box, Euclidean, HalfSpace, HyperbolicPlane,  # noqa: E402
                            LpSpace, RayInterval, StarTree, WholeSpace, check_axioms)

RESULTS = {}


def record(name, ok, detail):
    RESULTS[name] = (bool(ok), detail)
    assert ok, f"{name}: {detail}"


def report_lines():
    return [f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
            for name, (ok, detail) in RESULTS.items()]


@pytest.fixture(scope="module", autouse=True)
def _print_summary(request):
    yield
    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    write = tr.write_line if tr is not None else print
    write("")
    write("acceptance criteria:")
    for line in report_lines():
        write(line)


# -- 1. axioms -------------------------------------------------------------

def test_axiom_suite():
    t0 = time.perf_counter()
    spaces = [Euclidean(2), LpSpace(3, 3), HyperbolicPlane(), StarTree(5)]
    bad = {}
    for sp in spaces:
        counts = check_axioms(sp, trials=10_000, rng_seed=0)
        if any(counts.values()):
            bad[repr(sp)] = counts
    dt = time.perf_counter() - t0
    record("axioms W1-W4 and geodesic identities", not bad and dt < 30,
           f"4 spaces x 10^4 tuples, violations {bad or 0}, {dt:.1f}s (< 30s)")


# -- 2. moduli -------------------------------------------------------------

def test_modulus_suite():
    t0 = time.perf_counter()
    cases = [(Euclidean(2), cat0_modulus()), (HyperbolicPlane(), cat0_modulus()),
             (StarTree(5), cat0_modulus())]
    cases += [(LpSpace(2, p), lp_modulus(p)) for p in (2, 3, 4)]
    bad = {}
    for sp, m in cases:
        rep = verify_modulus(sp, m, trials=10_000, rng_seed=0)
        g = verify_groetsch(sp, m, trials=2000, rng_seed=0)
        if rep.violations or any(g.values()):
            bad[f"{sp!r}/{m.name}"] = (rep.violations, g)
    dt = time.perf_counter() - t0
    record("modulus validity and its four sampled consequences", not bad and dt < 60,
           f"{len(cases)} space/modulus pairs x 10^4 trials, violations {bad or 0}, "
           f"{dt:.1f}s (< 60s)")


# -- 3. orbit inequality chain -----------------------------------------------

def canonical_ishikawa_orbits(steps=1000):
    """The bundled experiments, each forced to a genuine Ishikawa schedule."""
    out = []
    for f in sorted(harness.bundled_config_dir().glob("*.yaml")):
        cfg = harness.load_config(f)
        if cfg.schedule.get("s", {"kind": "zero"})["kind"] == "zero":
            cfg.schedule = {**cfg.schedule, "s": {"kind": "geometric", "c": 0.5, "q": 0.5}}
        a = harness.assemble(cfg, check_map=False, check_modulus=False)
        orbit = ishikawa_orbit(a.T, a.x0, a.sched, steps, p=a.p, keep_points=False)
        out.append((cfg.id, a.sched, a.p, orbit))
    return out


def test_lemma41_chain():
    orbits = canonical_ishikawa_orbits()
    bad = {}
    for name, sched, p, orbit in orbits:
        rep = check_lemma41(orbit, sched, p, atol=1e-9, limit=0)
        if not rep.ok:
            bad[name] = rep.count
    record("orbit inequality chain and Fejer property", len(orbits) == 12 and not bad,
           f"{len(orbits)} Ishikawa orbits x 10^3 steps, violations {bad or 0}")


# -- 4. certificate soundness ----------------------------------------------

def test_certificate_soundness():
    t0 = time.perf_counter()
    res = harness.run_suite(harness.bundled_config_dir(), timing=False)
    dt = time.perf_counter() - t0
    rows = [r for rep in res.reports for r in rep.rows]
    failed = [f"{r.experiment_id}:{r.formula}@{r.epsilon:g}" for r in rows if not r.passed]
    eps_ok = all(rep.rows and {r.epsilon for r in rep.rows} == {1.0, 0.3, 0.1, 0.03}
                 for rep in res.reports)
    has_main = all(any(r.formula == "phi_main" for r in rep.rows) for rep in res.reports)
    worst = max((r.margin for r in rows if r.margin is not None), default=0.0)
    ok = (len(res.reports) == 12 and not res.errors and not failed and eps_ok and has_main
          and dt < 300)
    record("certificate soundness on the bundled suite", ok,
           f"{len(res.reports)} experiments, {len(rows)} certificate rows, "
           f"{len(rows) - len(failed)} pass, errors {res.errors or 0}, "
           f"largest first_hit/bound {worst:.3f}, {dt:.1f}s (< 300s)")


# -- 5. formula goldens ----------------------------------------------------

def test_formula_goldens():
    got = {
        "phi_cat0(0.1, 1, 1/2, 1, 0, 0)": phi_cat0(0.1, 1, 0.5, 1, 0, ZeroModulus()).bound,
        "h(1, 0, 1, cat0, 4n)": h_bound(1, 0, cat0_modulus(), 1, theta_const(0.5)),
        "psi(1, 0, 1, 2, 3, cat0, 4n)": psi_bound(1, 0, cat0_modulus(), 1, theta_const(0.5),
                                                  2, 3),
    }
    want = dict(zip(got, (12801, 64, 524)))
    record("formula goldens", got == want,
           ", ".join(f"{k} = {v} (want {want[k]})" for k, v in got.items()))


# -- 6. consistency sweep --------------------------------------------------

def test_consistency_sweep():
    rng = np.random.default_rng(2024)
    n_fact = n_cat = 0
    for _ in range(100):
        eps = float(10 ** rng.uniform(-2, 0.7))
        b = float(10 ** rng.uniform(-1.5, 0.5))
        lam = float(rng.uniform(0.05, 0.95))
        L, N0 = int(rng.integers(1, 4)), int(rng.integers(0, 5))
        delta = GeometricTailModulus(float(rng.uniform(0.1, 1)), float(rng.uniform(0.2, 0.9)))
        m = [cat0_modulus(), lp_modulus(3), lp_modulus(4)][rng.integers(3)]
        inp = RateInputs(eps, b, m, theta_const(lam), gamma_from_delta(delta, lam), L, N0)
        n_fact += phi_factored(inp).bound <= phi_main(inp).bound
        n_cat += (phi_cat0(eps, b, lam, L, N0, delta).bound
                  == phi_const_lambda(eps, cat0_modulus(), b, lam, L, N0, delta,
                                      use_factored=True).bound)
    record("factored <= main and cat0 = const-lambda(cat0)", n_fact == 100 and n_cat == 100,
           f"100 random inputs: {n_fact} with factored <= main, {n_cat} with equal cat0 bounds")


# -- 7. asymptotic center --------------------------------------------------

def test_asymptotic_center_oracle():
    E = Euclidean(2)
    matched = 0
    for seed in range(10):
        rng = np.random.default_rng(100 + seed)
        pts = [E.point(rng.uniform(-1.5, 1.5, 2)) for _ in range(int(rng.integers(3, 9)))]
        res = asymptotic_center(E, BoundedSequence(pts), WholeSpace(E))
        matched += GridCenter(pts, pitch=1e-3).matches(res.center, res.radius)
    c = E.point([0.3, -0.2])
    const = asymptotic_center(E, BoundedSequence([c] * 5), WholeSpace(E))
    alt = asymptotic_center(E, BoundedSequence([E.point([-1, 0]), E.point([1, 0])] * 10),
                            WholeSpace(E))
    e_const = max(E.dist(const.center, c), const.radius)
    e_alt = max(E.dist(alt.center, E.origin()), abs(alt.radius - 1.0))
    ok = matched == 10 and e_const <= 1e-6 and e_alt <= 1e-6
    record("asymptotic center vs grid oracle and closed forms", ok,
           f"{matched}/10 grid matches within 2 x 1e-3, constant error {e_const:.1e}, "
           f"alternating error {e_alt:.1e} (<= 1e-6)")


# -- 8. probe diagnostics --------------------------------------------------

def probe_catalog():
    E, H, T, L4 = Euclidean(2), HyperbolicPlane(), StarTree(5), LpSpace(2, 4)
    return {
        "identity": (identity_map(H), H.point([0.5, 0.5])),
        "rotation_e": (rotation_map(E, [0.3, 0.1], 1.1), E.point([2.0, 1.0])),
        "rotation_h": (rotation_map(H, [0.2, -0.4], 2.0), H.point([1.0, 1.0])),
        "quarter_l4": (rotation_map(L4, [0.0, 0.0], math.pi / 2), L4.point([1.0, 0.5])),
        "projection_ball_h": (projection_map(Ball(H, [0.5, 0.0], 0.3)), H.point([2.0, 0.0])),
        "projection_halfspace": (projection_map(HalfSpace(E, [1.0, 2.0], 0.5)),
                                 E.point([3.0, 3.0])),
        "projection_box_l4": (projection_map(Box(L4, [-1, -1], [1, 1])), L4.point([2.0, -3.0])),
        "projection_tree": (projection_map(RayInterval(T, 2, 0.5, 1.5)), (4, 2.0)),
        "ray_cycle": (ray_cycle_map(T, 2), (1, 3.0)),
        "averaged_rotation": (averaged(rotation_map(E, [0, 0], 2.0), 0.4), E.point([1.0, 1.0])),
        "compose": (compose([rotation_map(E, [0, 0], 0.5), scale_map(E, [0, 0], -0.5)]),
                    E.point([1.0, -1.0])),
    }


def test_probe_diagnostics():
    wrong = {}
    cat = probe_catalog()
    for name, (T, x0) in cat.items():
        rep = fixed_point_probe(T, x0, horizon=500)
        if not (rep.verdict == "fixed-point" and rep.picard_bounded and rep.km_bounded
                and all(rep.approx_fixed_points.values())):
            wrong[name] = rep.verdict
    E1 = Euclidean(1)
    tr = fixed_point_probe(translation_map(E1, [1.0]), E1.point([0.0]), horizon=500)
    ok = not wrong and not tr.picard_bounded and tr.verdict == "no-fixed-point"
    record("fixed-point probe verdicts", ok,
           f"{len(cat) - len(wrong)}/{len(cat)} fixed-point maps bounded with approximate "
           f"fixed points{' ' + str(wrong) if wrong else ''}, translation verdict {tr.verdict}")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        try:
            t()
        except AssertionError:
            pass
    print("\n".join(report_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
