#!/usr/bin/env python3
"""Exit codes, schema validity and determinism of the lcaid command line."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

BIN, SCHEMA = sys.argv[1], json.loads(Path(sys.argv[2]).read_text())
failures = []


def run(*args):
    p = subprocess.run([BIN, *args], capture_output=True, text=True, timeout=600)
    report = None
    if p.stdout.strip():
        report = json.loads(p.stdout)
        jsonschema.validate(report, SCHEMA)
    return p.returncode, report, p.stderr


def expect(label, args, code, check=None):
    try:
        got, report, err = run(*args)
    except jsonschema.ValidationError as e:
        failures.append(f"{label}: schema violation: {e.message}")
        return None
    if got != code:
        failures.append(f"{label}: exit {got}, expected {code}; stderr: {err.strip()[:200]}")
    elif report is not None and report["exit_code"] != code:
        failures.append(f"{label}: report exit_code {report['exit_code']}")
    elif check and not check(report, err):
        failures.append(f"{label}: content check failed")
    print(f"{'ok ' if not failures or not failures[-1].startswith(label) else 'BAD'} {label}: exit {got}")
    return report


expect("theorem1 default", ["verify-theorem1"], 0,
       lambda r, _: r["verdict"] == "pass" and r["trials"]["passed"] == r["trials"]["total"] > 0)
expect("theorem1 kernel violated", ["verify-theorem1", "--group", "6", "--coeffs", "1,4,2", "--forms", "I", "--trials", "5"], 0,
       lambda r, _: r["verdict"] == "pass-expected-negative" and not all(p["holds"] for p in r["preconditions"]))
expect("theorem1 malformed orders", ["verify-theorem1", "--group", "4y3"], 2)
expect("theorem1 unknown flag", ["verify-theorem1", "--bogus"], 2)
expect("theorem2 default", ["verify-theorem2", "--trials", "5"], 0,
       lambda r, _: r["details"][0]["sigma_table"] and r["residuals"]["max_sigma_error"] < 1e-8)
expect("theorem2 radius below margin", ["verify-theorem2", "--radius", "20"], 2,
       lambda r, err: "margin" in r["details"]["error"] and "margin" in err)
expect("counterexample unknown", ["counterexample", "nonsense"], 2)
expect("counterexample no kernel", ["counterexample", "remark3", "--group", "7"], 2)
with tempfile.TemporaryDirectory() as d:
    expect("counterexample remark3", ["counterexample", "remark3", "--fixtures", d], 0,
           lambda r, _: r["residuals"]["joint_residual"] < 1e-12 and len(r["details"]["fixtures"]) == 6
           and all(Path(f).read_text().startswith("lcaid-fixture 1") for f in r["details"]["fixtures"]))
expect("counterexample remark6", ["counterexample", "remark6"], 0, lambda r, _: r["details"]["certificate"]["certified"])
expect("counterexample bernstein", ["counterexample", "bernstein"], 0,
       lambda r, _: r["details"]["order_two_count"] == 3 and not r["details"]["is_character"])
expect("lemma-suite default", ["lemma-suite"], 0)
expect("lemma-suite injected fault", ["lemma-suite", "--family", "5", "--inject-fault", "adjoint"], 1,
       lambda r, _: any("adjoint identity" in v for v in r["details"]["violations"]))
expect("lemma-suite empty family", ["lemma-suite", "--family", ""], 2)

with tempfile.TemporaryDirectory() as d:
    out = Path(d) / "r.json"
    code, _, _ = run("verify-theorem1", "--group", "4x3", "--trials", "20", "--seed", "9", "--out", str(out))
    a = json.loads(out.read_text())
    code2, b, _ = run("verify-theorem1", "--group", "4x3", "--trials", "20", "--seed", "9")
    jsonschema.validate(a, SCHEMA)
    a.pop("timings"), b.pop("timings")
    same = json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True) and code == code2
    print(f"{'ok ' if same else 'BAD'} determinism via --out and stdout")
    if not same:
        failures.append("same seed gave different report bodies")

for f in failures:
    print("FAIL:", f)
sys.exit(1 if failures else 0)
