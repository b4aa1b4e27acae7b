"""Runs every cfgprint command with --json and validates the output against
docs/report_schema.json."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_path = sys.argv[1], sys.argv[2]
schema = json.loads(pathlib.Path(schema_path).read_text())
validator = jsonschema.Draft202012Validator(schema)


def report(*args):
    done = subprocess.run([cli, *args, "--json"], capture_output=True, text=True)
    if done.returncode != 0:
        sys.exit(f"{' '.join(args)}: exit {done.returncode}: {done.stderr}")
    return json.loads(done.stdout)


def check(name, value, definition):
    validator.validate(value)
    jsonschema.Draft202012Validator(
        {"$ref": f"#/$defs/{definition}", "$defs": schema["$defs"]}
    ).validate(value)
    print(f"ok {name}")


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    corpus = tmp / "corpus"
    subprocess.run([cli, "generate", str(corpus), "--originals", "6",
                    "--unrelated", "4"], check=True, capture_output=True)
    (corpus / "broken.mp").write_text("if (a) x = 1;\n")
    (corpus / "tiny.mp").write_text("x = 1;\n")
    index = tmp / "corpus.cdx"
    files = sorted(corpus.glob("*.mp"))
    probe = next(f for f in files if f.name.startswith("orig_"))

    check("index", report("index", str(corpus), "-o", str(index)), "index_summary")
    check("query", report("query", str(probe), "--index", str(index),
                          "--threshold", "0"), "query_report")
    check("query unscoreable", report("query", str(corpus / "tiny.mp"),
                                      "--index", str(index)), "query_report")
    mutant = next(f for f in files if f.name.startswith("mut_"))
    check("compare", report("compare", str(probe), str(mutant)), "compare_report")
    check("compare unscoreable", report("compare", str(probe),
                                        str(corpus / "tiny.mp")), "compare_report")
    check("cluster", report("cluster", "--index", str(index)), "cluster_report")
    (corpus / "broken.mp").unlink()
    (corpus / "tiny.mp").unlink()
    check("evaluate", report("evaluate", str(corpus), "--alpha-max", "3"),
          "evaluate_report")
