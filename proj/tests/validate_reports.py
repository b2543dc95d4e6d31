"""Runs the liftvf tool over the catalog and every command; each JSON report must validate against the schema."""

import json
import pathlib
import subprocess
import sys

import jsonschema

tool, source = sys.argv[1], pathlib.Path(sys.argv[2])
schema = json.loads((source / "schema" / "report.schema.json").read_text())
validator = jsonschema.Draft202012Validator(schema)
catalog = source / "catalog"
data = source / "tests" / "data"


def reports(*args):
    out = subprocess.run([tool, "--json", *args], capture_output=True, text=True)
    doc = json.loads(out.stdout)
    return out.returncode, doc if isinstance(doc, list) else [doc]


runs = [
    ("catalog", "--run-all"),
    ("analyze", str(catalog / "whitney-psi2.germ")),
    ("kernel", str(catalog / "cusp-pair.germ"), "--level", "2"),
    ("kernel", str(catalog / "fold.germ"), "--level", "0", "--matrix"),
    ("construct", str(catalog / "cusp-pair.germ")),
    ("construct", str(catalog / "embedding-e.germ")),
    ("unfold", str(catalog / "fold-line.germ")),
    ("check", str(catalog / "whitney-psi2.germ"), "--fields", str(data / "umbrella-fields.txt")),
    ("check", str(catalog / "whitney-psi2.germ"), "--fields", str(data / "umbrella-wrong.txt")),
    ("transport", str(catalog / "umbrella-transport.germ")),
    ("reduce", str(catalog / "suspended-69.germ")),
    ("analyze", str(data / "constant-term.germ")),
    ("analyze", str(data / "syntax.germ")),
    ("--inject-fault", "analyze", str(catalog / "ex36.germ")),
    ("--mode", "formula", "analyze", str(catalog / "rieger-ruas.germ")),
]

failures = 0
count = 0
for args in runs:
    code, docs = reports(*args)
    for d in docs:
        count += 1
        errors = sorted(validator.iter_errors(d), key=lambda e: list(e.path))
        if errors:
            failures += 1
            print(f"INVALID {' '.join(args)}: {errors[0].message} at {list(errors[0].path)}")
    if len(docs) == 1 and docs[0]["exit_code"] != code:
        failures += 1
        print(f"exit code mismatch for {' '.join(args)}: process {code}, report {docs[0]['exit_code']}")
print(f"{count} reports checked, {failures} invalid")
sys.exit(1 if failures else 0)
