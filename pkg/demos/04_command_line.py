"""
Command line, JSON report and plot samples
==========================================

The same analysis through the CLI entry point. The JSON report is
deterministic and the CSV holds the real traces of the curve and its
asymptotes, ready for any plotting tool.
"""

import csv
import json
import tempfile
from collections import Counter
from pathlib import Path

from gasymptote.cli import RunConfig, main, run

###############################################################################
# Text report, as printed by ``python -m gasymptote``.

main(["(cos(s)-1)/(s^(3/2)*sin(s))", "sin(s*pi)/(s^(1/2)*sin(s))",
      "--window", "-1,1,-1,1"])

###############################################################################
# JSON report with plot samples. Rationals carry an exact string next to the
# floating value.

out = Path(tempfile.mkdtemp()) / "samples.csv"
config = RunConfig(components=["(2*s^2-7*s+2)/((s-1)*s^2)", "1/(s-1)"],
                   output="json", plot_path=str(out), plot_range=(-5, 5))
code, text = run(config)
report = json.loads(text)
print("exit status:", code)
for a in report["asymptotes"]:
    print(a["kind"], a["text"], [c.get("rational") for poly in a["component_polynomials"]
                                  for c in poly])

###############################################################################
# One row per sample: series_id, x, y.

with open(out, newline="") as fh:
    rows = list(csv.reader(fh))
print(rows[0], Counter(r[0] for r in rows[1:]))
