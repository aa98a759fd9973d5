"""Config-driven experiments that check rate certificates against real orbits.

An experiment config is a YAML mapping::

    id: hyperbolic_rotation_km
    space: {kind: hyperbolic2}
    mapping: {kind: rotation, center: [0.0, 0.0], angle: 1.5707963267948966}
    schedule: {lambda: {kind: constant, value: 0.5}, s: {kind: zero}}
    modulus: {kind: cat0}
    x0: [0.1, 0.0]
    b: 0.1                      # optional, see below
    epsilons: [1.0, 0.3, 0.1, 0.03]
    seed: 0
    horizon: null               # optional override
    formulas: [phi_main, h]     # optional, default: every applicable formula
    domain: {kind: ball, ...}   # optional, restricts the map's domain

``b`` is taken from the config if present, otherwise from the distance
between ``x0`` and a fixed point supplied by the mapping (inflated by a
relative ``1e-12``), otherwise from the diameter of a bounded domain.
"""

import concurrent.futures
import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from . import rates
from .iterate import ScheduleError, first_hit, ishikawa_orbit, km_orbit, make_schedule, \
    validate_schedule, check_lemma41
from .mappings import NonexpansiveMap, check_nonexpansive, make_map
from .modulus import make_modulus, verify_modulus
from .spaces import make_set, make_space

ALL_FORMULAS = ("h", "psi", "phi_afp", "phi_main", "phi_factored", "km_rate",
                "phi_const_lambda", "phi_cat0")
CSV_FIELDS = ("experiment_id", "formula", "epsilon", "bound", "guarantee_kind", "first_hit",
              "tail_ok", "lemma41_violations", "wallclock_ms", "margin", "passed")
MAX_HORIZON = 5_000_000


class ConfigError(ValueError):
    """An experiment config is malformed or violates a hypothesis."""


class UsageError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    id: str
    space: dict
    mapping: dict
    schedule: dict
    modulus: dict
    x0: list
    epsilons: list
    b: Optional[float] = None
    seed: int = 0
    horizon: Optional[int] = None
    formulas: Optional[list] = None
    domain: Optional[dict] = None
    description: str = ""
    nonexpansive_trials: int = 1000
    modulus_trials: int = 2000

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        missing = [k for k in ("id", "space", "mapping", "schedule", "modulus", "x0", "epsilons")
                   if k not in d]
        if missing:
            raise ConfigError(f"config is missing keys: {', '.join(missing)}")
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg = cls(**d)
        if not cfg.epsilons or any(not (isinstance(e, (int, float)) and e > 0)
                                   for e in cfg.epsilons):
            raise ConfigError(f"epsilons must be a nonempty list of positive reals, "
                              f"got {cfg.epsilons!r}")
        if cfg.formulas is not None:
            bad = [f for f in cfg.formulas if f not in ALL_FORMULAS]
            if bad:
                raise ConfigError(f"unknown formulas: {bad}")
        return cfg


def load_config(path):
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} is not a mapping")
    return ExperimentConfig.from_dict(data)


@dataclass
class Row:
    experiment_id: str
    formula: str
    epsilon: float
    bound: int
    guarantee_kind: str
    first_hit: Optional[int]
    tail_ok: Optional[bool]
    lemma41_violations: int
    wallclock_ms: Optional[int]
    margin: Optional[float]
    passed: bool


@dataclass
class ExperimentReport:
    experiment_id: str
    rows: list
    certificates: list
    summary: dict
    wallclock_ms: Optional[int] = None
    residuals: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    def to_dict(self):
        return {"experiment_id": self.experiment_id, "passed": self.passed,
                "wallclock_ms": self.wallclock_ms, "summary": self.summary,
                "rows": [asdict(r) for r in self.rows], "certificates": self.certificates}

    @classmethod
    def from_dict(cls, d):
        return cls(d["experiment_id"], [Row(**r) for r in d["rows"]], d["certificates"],
                   d["summary"], d.get("wallclock_ms"))


# ---------------------------------------------------------------------------
# assembly and hypothesis gates


@dataclass
class Assembled:
    cfg: ExperimentConfig
    space: object
    T: NonexpansiveMap
    sched: object
    modulus: object
    x0: object
    b: float
    p: object
    formulas: list


def _with_domain(T, space, desc):
    C = make_set(space, desc)
    return NonexpansiveMap(space, T.apply, C, T.kind, T.known_fixed_point, T.fixed_point_near,
                           {**T.params, "domain": C.descriptor()})


def _applicable(cfg, sched, modulus):
    out = ["h", "psi", "phi_afp", "phi_main"]
    if modulus.factored:
        out.append("phi_factored")
    if sched.s_zero:
        out.append("km_rate")
    if sched.constant_lambda is not None and 0 < sched.constant_lambda < 1:
        out.append("phi_const_lambda")
        if modulus.name == "cat0":
            out.append("phi_cat0")
    return out


def assemble(cfg, check_map=True, check_modulus=True):
    """Build the experiment's objects and run every hypothesis gate."""
    try:
        space = make_space(cfg.space)
        T = make_map(space, cfg.mapping)
        if cfg.domain is not None:
            T = _with_domain(T, space, cfg.domain)
        sched = make_schedule(cfg.schedule)
        modulus = make_modulus(cfg.modulus)
        x0 = space.point(cfg.x0)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"{cfg.id}: cannot build experiment: {exc}") from exc

    if not T.domain.contains(x0):
        raise ConfigError(f"{cfg.id}: x0 is not in the domain of the mapping")
    if sched.theta is None:
        raise ConfigError(f"{cfg.id}: lambda_n(1 - lambda_n) vanishes identically, so the series "
                          "sum lambda_n(1-lambda_n) has no rate of divergence")
    if cfg.formulas is None:
        formulas = _applicable(cfg, sched, modulus)
    else:
        formulas = list(cfg.formulas)
        ok = _applicable(cfg, sched, modulus)
        bad = [f for f in formulas if f not in ok]
        if bad:
            raise ConfigError(f"{cfg.id}: hypotheses of {bad} are not met by this configuration")

    if check_map:
        rep = check_nonexpansive(T, trials=cfg.nonexpansive_trials, rng_seed=cfg.seed)
        if not rep.ok:
            raise ConfigError(f"{cfg.id}: mapping failed nonexpansiveness validation "
                              f"({rep.violations} of {rep.trials} pairs, witness {rep.witness})")
    if check_modulus:
        rep = verify_modulus(space, modulus, trials=cfg.modulus_trials, rng_seed=cfg.seed)
        if not rep.ok:
            raise ConfigError(f"{cfg.id}: modulus {modulus.name} is not valid on this space "
                              f"({rep.violations} violations)")

    p = T.fixed_point_for(x0)
    if p is not None and space.dist(T(p), p) > space.tol(1.0):
        p = None
    if cfg.b is not None:
        b = float(cfg.b)
        if not b > 0:
            raise ConfigError(f"{cfg.id}: b must be positive")
        if p is not None and space.dist(x0, p) > b:
            raise ConfigError(f"{cfg.id}: b={b} is smaller than d(x0, p)={space.dist(x0, p)}")
    elif p is not None:
        b = space.dist(x0, p) * (1 + 1e-12)
        if b == 0.0:
            b = 1e-12  # x0 is itself fixed; every positive b is valid
    elif T.domain.diameter is not None:
        b = float(T.domain.diameter)
    else:
        raise ConfigError(f"{cfg.id}: no fixed point is known and the domain is unbounded, "
                          "so b must be given")
    return Assembled(cfg, space, T, sched, modulus, x0, b, p, formulas)


def certificates_for(a, eps):
    """All requested certificates at one ``eps``; returns ``{formula: cert}``."""
    s, m, b = a.sched, a.modulus, a.b
    out = {}
    for f in a.formulas:
        if f == "h":
            out[f] = rates.h_certificate(eps, 0, m, b, s.theta)
        elif f == "psi":
            out[f] = rates.psi_certificate(eps, 0, m, b, s.theta, s.L, s.N0)
        elif f == "phi_afp":
            out[f] = rates.phi_afp_certificate(eps, m, b, s.theta, s.L, s.N0)
        elif f == "phi_main":
            out[f] = rates.phi_main(rates.RateInputs.from_schedule(eps, b, m, s))
        elif f == "phi_factored":
            out[f] = rates.phi_factored(rates.RateInputs.from_schedule(eps, b, m, s))
        elif f == "km_rate":
            out[f] = rates.km_rate(eps, m, b, s.theta, schedule=s)
        elif f == "phi_const_lambda":
            out[f] = rates.phi_const_lambda(eps, m, b, s.constant_lambda, s.L, s.N0, s.delta)
        elif f == "phi_cat0":
            out[f] = rates.phi_cat0(eps, b, s.constant_lambda, s.L, s.N0, s.delta)
    return out


def required_horizon(a):
    return max(c.bound for e in a.cfg.epsilons for c in certificates_for(a, e).values()) + 100


def validate(cfg, horizon=None):
    """Hypothesis checks only; returns the assembled experiment and its horizon."""
    a = assemble(cfg)
    need = required_horizon(a)
    H = need if horizon is None and cfg.horizon is None else int(horizon or cfg.horizon)
    if H < need:
        raise ConfigError(f"{cfg.id}: horizon {H} is below the required {need} "
                          "(largest bound + 100)")
    if H > MAX_HORIZON:
        raise ConfigError(f"{cfg.id}: required horizon {H} exceeds {MAX_HORIZON}; "
                          "use larger epsilons or a smaller b")
    try:
        validate_schedule(a.sched, H)
    except ScheduleError as exc:
        raise ConfigError(f"{cfg.id}: {exc}") from exc
    return a, H


# ---------------------------------------------------------------------------
# running


def run_orbit(a, horizon, keep_points=False):
    gen = km_orbit if a.sched.s_zero else ishikawa_orbit
    return gen(a.T, a.x0, a.sched, horizon, p=a.p, keep_points=keep_points)


def run_experiment(cfg, horizon=None, timing=True):
    """Validate, run the orbit, and check every certificate at every ``eps``.

    For-all certificates pass when ``d(x_n, T x_n) < eps`` for every ``n``
    from the bound to the horizon.  Existence certificates pass when the
    first hit is at most the bound.  For ``h`` the hit is measured on
    ``d(x_n, T y_n)``.  ``psi`` records that hit too but must also bound the
    first hit of ``d(x_n, T x_n)``, the residual every other formula uses.
    """
    t0 = time.perf_counter()
    a, H = validate(cfg, horizon)
    orbit = run_orbit(a, H)
    chain = check_lemma41(orbit, a.sched, a.p, limit=0)
    rows, certs = [], []
    for eps in cfg.epsilons:
        for f, c in certificates_for(a, eps).items():
            which = "y" if f in ("h", "psi") else "x"
            hit = first_hit(orbit, eps, which=which)
            if c.guarantee == rates.FOR_ALL:
                tail_ok = bool(np.all(orbit.residual[c.bound:] < eps)) and c.bound <= H - 100
                ok = tail_ok and chain.ok
            else:
                tail_ok = None
                ok = hit is not None and hit <= c.bound and chain.ok
                if f == "psi":  # psi also bounds the first hit of d(x_n, T x_n)
                    x_hit = first_hit(orbit, eps)
                    ok = ok and x_hit is not None and x_hit <= c.bound
            margin = None if hit is None else hit / max(c.bound, 1)
            rows.append(Row(cfg.id, f, float(eps), c.bound, c.guarantee, hit, tail_ok,
                            chain.count, None, margin, ok))
            certs.append({"epsilon": float(eps), **c.to_dict()})
    R = orbit.residual
    summary = {"horizon": H, "b": a.b, "fixed_point_known": a.p is not None,
               "orbit_kind": orbit.kind, "residual_initial": float(R[0]),
               "residual_final": float(R[-1]), "residual_max": float(R.max()),
               "lemma41_violations": chain.count, "formulas": list(a.formulas),
               "seed": cfg.seed}
    ms = int(round(1000 * (time.perf_counter() - t0))) if timing else None
    for r in rows:
        r.wallclock_ms = ms
    return ExperimentReport(cfg.id, rows, certs, summary, ms, R)


def emit_report(report, out_dir, fmt="csv", plot=True):
    """Write ``<id>.csv`` or ``<id>.json`` (and ``<id>.plot.csv``) to ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt in ("csv", "both"):
        path = out / f"{report.experiment_id}.csv"
        path.write_text(rows_to_csv(report.rows))
        written.append(path)
    if fmt in ("json", "both"):
        path = out / f"{report.experiment_id}.json"
        path.write_text(report_to_json(report))
        written.append(path)
    if fmt not in ("csv", "json", "both"):
        raise UsageError(f"unknown report format {fmt!r}")
    if plot and report.residuals is not None:
        path = out / f"{report.experiment_id}.plot.csv"
        np.savetxt(path, np.column_stack([np.arange(len(report.residuals)), report.residuals]),
                   delimiter=",", header="n,d_x_Tx", comments="", fmt=["%d", "%.17g"])
        written.append(path)
    return written


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if v is None else v) for k, v in asdict(r).items()})
    return buf.getvalue()


def report_to_json(report):
    return json.dumps(report.to_dict(), indent=2, sort_keys=True)


@dataclass
class SuiteResult:
    reports: list
    errors: dict

    @property
    def exit_code(self):
        return 0 if not self.errors and all(r.passed for r in self.reports) else 1

    def table(self):
        lines = [f"{'experiment':<34} {'status':<6} rows  detail"]
        for r in self.reports:
            bad = [f"{x.formula}@{x.epsilon:g}" for x in r.rows if not x.passed]
            lines.append(f"{r.experiment_id:<34} {'PASS' if r.passed else 'FAIL':<6} "
                         f"{len(r.rows):>4}  {', '.join(bad)}")
        for name, msg in self.errors.items():
            lines.append(f"{name:<34} {'ERROR':<6} {0:>4}  {msg}")
        return "\n".join(lines)


def _run_file(path, horizon, timing):
    return run_experiment(load_config(path), horizon=horizon, timing=timing)


def run_suite(config_dir, jobs=1, horizon=None, timing=True):
    """Run every ``*.yaml``/``*.yml`` in ``config_dir``.

    Errors in one config are recorded and the suite continues.
    """
    d = Path(config_dir)
    if not d.is_dir():
        raise UsageError(f"{config_dir} is not a directory")
    files = sorted(p for p in d.iterdir() if p.suffix in (".yaml", ".yml"))
    if not files:
        raise UsageError(f"no experiment configs in {config_dir}")
    reports, errors = [], {}
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(jobs) as ex:
            futs = {f: ex.submit(_run_file, f, horizon, timing) for f in files}
            for f in files:
                try:
                    reports.append(futs[f].result())
                except Exception as exc:  # per-file isolation
                    errors[f.name] = str(exc)
    else:
        for f in files:
            try:
                reports.append(_run_file(f, horizon, timing))
            except Exception as exc:
                errors[f.name] = str(exc)
    return SuiteResult(reports, errors)


def bundled_config_dir():
    return Path(__file__).parent / "configs"
