"""Run every depwatch command on the fixtures and validate each JSON report."""
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

binary, schema_path, fixtures = sys.argv[1:4]
with open(schema_path) as f:
    schema = json.load(f)
validator = jsonschema.Draft202012Validator(schema)

eco = os.path.join(fixtures, "ecosystems", "prerelease-and-ties")
snapshot = ["--releases", f"{eco}/releases.jsonl", "--deps", f"{eco}/deps.jsonl",
            "--advisories", f"{eco}/advisories.jsonl", "--horizon", "2019-04-11T00:00:00Z"]

failures = 0
with tempfile.TemporaryDirectory() as work:
    data = os.path.join(work, "d.jsonl")
    model = os.path.join(work, "m.model")
    runs = [
        ["lint", os.path.join(fixtures, "smells", "composite-s1-s5-s6")],
        ["lint", os.path.join(fixtures, "smells", "clean")],
        ["timeline", "--all", *snapshot],
        ["features", *snapshot],
        ["synth", "--n", "200", "--out", data],
        ["train", "--data", data, "--out", model, "--trees", "20"],
        ["eval", "--model", model, "--data", data, "--cv", "3"],
        ["explain", "--model", model, "--data", data, "--repeats", "2", "--ice"],
        ["fetch", "--out", os.path.join(work, "snap")],
    ]
    for args in runs:
        proc = subprocess.run([binary, *args, "--format", "json"], capture_output=True, text=True)
        if proc.returncode not in (0, 1):
            print(f"FAIL {args[0]}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        errors = sorted(validator.iter_errors(json.loads(proc.stdout)), key=str)
        for e in errors:
            print(f"FAIL {args[0]}: {list(e.absolute_path)}: {e.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {' '.join(args[:1])}")

sys.exit(1 if failures else 0)
