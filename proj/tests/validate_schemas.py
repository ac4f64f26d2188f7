"""Run the kcp CLI and validate its JSON outputs against schemas/."""

import json
import os
import shutil
import subprocess
import sys
import tempfile

import jsonschema


def load(path):
    with open(path) as f:
        return json.load(f)


def main():
    exe, root = os.path.abspath(sys.argv[1]), os.path.abspath(sys.argv[2])
    schemas = {name: load(os.path.join(root, "schemas", name + ".schema.json"))
               for name in ("config", "verify_report", "audit_report", "transform")}
    for s in schemas.values():
        jsonschema.Draft202012Validator.check_schema(s)
    failures = []
    checked = [0]

    def check(kind, instance, what):
        checked[0] += 1
        errors = list(jsonschema.Draft202012Validator(schemas[kind]).iter_errors(instance))
        if errors:
            failures.append(f"{what}: {errors[0].message}")

    def run(args, cwd, ok=(0,)):
        p = subprocess.run([exe] + args, cwd=cwd, capture_output=True, text=True)
        if p.returncode not in ok:
            failures.append(f"{' '.join(args)} exited {p.returncode}: {p.stderr.strip()}")
        return p

    config_dir = os.path.join(root, "configs")
    tmp = tempfile.mkdtemp(prefix="kcp_schema_")
    try:
        for name in sorted(os.listdir(config_dir)):
            path = os.path.join(config_dir, name)
            check("config", load(path), name)
            run(["simulate", "--config", path], tmp)
        for name in sorted(os.listdir(tmp)):
            if name.endswith(".json"):
                check("audit_report", load(os.path.join(tmp, name)), "audit " + name)

        suites = [("algebra", "2"), ("killing", "2"), ("symplecto", "2"), ("oscillator", "2"),
                  ("coulomb", "2"), ("shifted", "2"), ("duality", "2")]
        for suite, n in suites:
            p = run(["verify", suite, "--n", n, "--samples", "5"], tmp, ok=(0, 1))
            check("verify_report", json.loads(p.stdout), "verify " + suite)

        csv = os.path.join(tmp, "t.csv")
        run(["simulate", "--system", "coulomb", "--n", "2", "--r", "1", "--p_r", "0.3", "--phi", "0.4",
             "--pi", "0.2", "--T", "2", "--csv", csv], tmp)
        p = run(["audit", "--system", "coulomb", "--n", "2", "--trajectory", csv], tmp)
        check("audit_report", json.loads(p.stdout), "audit command")

        for args in (["--from", "canonical", "--to", "klein", "--point",
                      '{"r": 1, "p_r": 0, "phi": [0], "pi": [0]}'],
                     ["--from", "klein", "--to", "x", "--dual", "--point", '{"w": [1, -1], "z": [0.5]}'],
                     ["--from", "poincare", "--to", "canonical", "--point", '{"z": [[0.1, 0.2], 0.3]}']):
            p = run(["transform"] + args, tmp)
            check("transform", json.loads(p.stdout), "transform " + " ".join(args[:4]))
    finally:
        shutil.rmtree(tmp)

    for f in failures:
        print("FAIL", f)
    print(f"{checked[0]} documents validated, {len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
