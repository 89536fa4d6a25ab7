"""Validate analyze output of the CLI against the shipped JSON schema.

usage: check_schema.py CLI SCHEMA WORKDIR
"""

import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema


def main() -> int:
    cli, schema_path, workdir = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    shutil.rmtree(workdir, ignore_errors=True)
    workdir.mkdir(parents=True)
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    data = workdir / "path.csv"
    subprocess.run([cli, "simulate", "--seed", "2", "--steps", "20000", "--out", str(data)],
                   check=True)
    runs = {
        "fisher": ["--window", "5:20"],
        "bootstrap": ["--window", "5:20", "--ci", "bootstrap", "--n-boot", "100", "--seed", "3"],
        "star": ["--window", "0:10", "--star-window", "5:10", "--detrend-star"],
    }
    failures = 0
    for name, extra in runs.items():
        out = subprocess.run([cli, "analyze", "--input", str(data), "--dt", "0.001", *extra],
                             check=True, capture_output=True, text=True).stdout
        errors = sorted(validator.iter_errors(json.loads(out)), key=str)
        for e in errors:
            print(f"{name}: {e.message} at {list(e.absolute_path)}")
        failures += len(errors)
        print(f"{name}: {'valid' if not errors else 'INVALID'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
