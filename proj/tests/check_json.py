# Copyright 2026 The dcbpv Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Validates every --json output on the corpus and compares it with text mode."""

import glob
import json
import pathlib
import subprocess
import sys

import jsonschema

tool, root = sys.argv[1], pathlib.Path(sys.argv[2])
schemas = {p.name.split(".")[0]: json.loads(p.read_text())
           for p in (root / "schemas").glob("*.schema.json")}
failures = 0


def call(*args):
    p = subprocess.run([tool, *args], capture_output=True, text=True, cwd=root)
    return p.returncode, p.stdout


def fail(msg):
    global failures
    failures += 1
    print("FAIL", msg)


def validated(command, args):
    code, out = call(command, *args, "--json")
    try:
        doc = json.loads(out)
        jsonschema.validate(doc, schemas[command])
    except (json.JSONDecodeError, jsonschema.ValidationError) as e:
        fail(f"{command} {' '.join(args)}: {e}")
        return code, None
    return code, doc


def text_lines(command, args):
    return call(command, *args)[1].splitlines()


for f in sorted(glob.glob("corpus/*.dcbpv", root_dir=root)):
    code, doc = validated("check", [f, "--variant", "plus"])
    if doc is None or not doc["ok"] or not doc.get("main_type") or "context" in (root / f).read_text():
        continue
    args = [f, "--variant", "plus", "--scheduler", "all", "--fuel", "2000"]
    code, doc = validated("run", args)
    lines = text_lines("run", args)
    if doc is None:
        continue
    if len(lines) != len(doc["outcomes"]):
        fail(f"run {f}: {len(lines)} text lines vs {len(doc['outcomes'])} outcomes")
    for line, o in zip(lines, doc["outcomes"]):
        if not line.startswith(o["terminal"]) or not line.endswith(f"| {o['steps']} steps"):
            fail(f"run {f}: '{line}' disagrees with {o}")
    targs = [f, "--variant", "plus", "--fuel", "2000"]
    code, doc = validated("trace", targs)
    if doc is not None and len(doc["steps"]) != doc["outcome"]["steps"]:
        fail(f"trace {f}: {len(doc['steps'])} steps listed, {doc['outcome']['steps']} counted")
    first = text_lines("run", targs)
    if doc is not None and first and not first[0].endswith(f"| {doc['outcome']['steps']} steps"):
        fail(f"trace {f}: step count differs from run")

for f in sorted(glob.glob("corpus/*.dtt", root_dir=root)):
    for s in ("cbv", "cbn"):
        for v in ("minus", "plus"):
            code, doc = validated("translate", [f, "--strategy", s, "--variant", v])
            if doc is not None and (code == 0) != doc["ok"]:
                fail(f"translate {f} {s} {v}: exit {code} but ok={doc['ok']}")

for args in (["--figure4"], ["corpus/equations.dcbpv"], ["corpus/equations.dcbpv", "--monad", "tree"]):
    code, doc = validated("model-check", args)
    rows = text_lines("model-check", args)[1:]
    if doc is None:
        continue
    if len(rows) != len(doc["rows"]):
        fail(f"model-check {args}: row counts differ")
    for line, r in zip(rows, doc["rows"]):
        cols = line.split()
        if cols[:4] != [r["equation"], str(r["instantiations"]), str(r["environments"]), r["verdict"]]:
            fail(f"model-check {args}: '{line}' disagrees with {r}")

print("json checks:", "ok" if failures == 0 else f"{failures} failures")
sys.exit(1 if failures else 0)
