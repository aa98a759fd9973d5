"""Command-line entry point: ``ucwiter run|suite|validate|orbit``."""

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .iterate import write_orbit_csv


def _load(path, seed):
    cfg = harness.load_config(path)
    if seed is not None:
        cfg.seed = seed
    return cfg


def cmd_run(args):
    cfg = _load(args.config, args.seed)
    report = harness.run_experiment(cfg, horizon=args.horizon, timing=not args.no_timing)
    if args.out:
        for p in harness.emit_report(report, args.out, args.format):
            print(f"wrote {p}", file=sys.stderr)
    elif args.format == "json":
        print(harness.report_to_json(report))
    else:
        sys.stdout.write(harness.rows_to_csv(report.rows))
    return 0 if report.passed else 1


def cmd_suite(args):
    d = args.dir or harness.bundled_config_dir()
    res = harness.run_suite(d, jobs=args.jobs, horizon=args.horizon, timing=not args.no_timing)
    if args.out:
        for r in res.reports:
            harness.emit_report(r, args.out, args.format)
    print(res.table())
    return res.exit_code


def cmd_validate(args):
    cfg = _load(args.config, args.seed)
    a, H = harness.validate(cfg, args.horizon)
    print(json.dumps({"id": cfg.id, "valid": True, "b": a.b, "horizon": H,
                      "formulas": a.formulas}, indent=2))
    return 0


def cmd_orbit(args):
    cfg = _load(args.config, args.seed)
    a, H = harness.validate(cfg, args.horizon)
    orbit = harness.run_orbit(a, H)
    if args.dump:
        meta = {"id": cfg.id, "space": cfg.space, "mapping": cfg.mapping,
                "schedule": cfg.schedule, "seed": cfg.seed}
        csv_path, meta_path = write_orbit_csv(orbit, args.dump, meta)
        print(f"wrote {csv_path} and {meta_path}", file=sys.stderr)
    else:
        print(f"{cfg.id}: {orbit.steps} steps, final residual {orbit.residual[-1]:.3e}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="ucwiter",
                                 description="Check explicit rates for Ishikawa iterations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--horizon", type=int, default=None, help="override the orbit length")
        p.add_argument("--format", choices=("csv", "json", "both"), default="csv")
        p.add_argument("--out", type=Path, default=None, help="report directory")
        p.add_argument("--no-timing", action="store_true",
                       help="omit wall-clock fields (byte-identical reports)")

    p = sub.add_parser("run", help="run one experiment config")
    p.add_argument("config", type=Path)
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("suite", help="run every config in a directory")
    p.add_argument("dir", type=Path, nargs="?", default=None,
                   help="config directory (default: the bundled suite)")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("validate", help="hypothesis checks only")
    p.add_argument("config", type=Path)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("orbit", help="generate the orbit, optionally dumping it as CSV")
    p.add_argument("config", type=Path)
    p.add_argument("--dump", type=Path, default=None, help="CSV path for the orbit")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.set_defaults(func=cmd_orbit)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except harness.UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except harness.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
