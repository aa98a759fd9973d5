"""Running a declarative experiment and the bundled suite.

The same things are available from the shell:
    ucwiter run src/ucwiter/configs/02_hyperbolic_rotation_km.yaml
    ucwiter suite --jobs 4

Run:  python3 demos/05_harness.py
"""

import tempfile

from ucwiter import harness

cfg = harness.load_config(harness.bundled_config_dir() / "02_hyperbolic_rotation_km.yaml")
report = harness.run_experiment(cfg)
print(f"{cfg.id}: horizon {report.summary['horizon']}, b = {report.summary['b']:.4g}")
for r in report.rows:
    if r.epsilon == 0.03:
        print(f"  {r.formula:<17} bound {r.bound:>7}  first hit {r.first_hit!s:>5}  "
              f"{'pass' if r.passed else 'FAIL'}")

with tempfile.TemporaryDirectory() as d:
    for path in harness.emit_report(report, d, "both"):
        print("wrote", path.name)
