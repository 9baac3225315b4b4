"""Check every catalog fixture, then drive the command line in-process."""

import io
import json

from summakit import FIXTURE_NAMES, check
from summakit.cli import run

for name in FIXTURE_NAMES:
    r = check(name)
    print("%-15s %s" % (name, "ok" if r.ok else r.mismatches))

out = io.StringIO()
code = run(["classify", "periodic(1,0)"], out)
report = json.loads(out.getvalue())
print("exit", code, {k: v["status"] for k, v in report["verdicts"].items() if isinstance(v, dict)})
