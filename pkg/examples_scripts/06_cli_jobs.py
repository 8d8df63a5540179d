"""
Driving the command line from Python
====================================

Write JSON job files and run the ``swquad`` subcommands on them. The same
jobs run from a shell as ``swquad quasi --config job.json``.
"""

import json
import tempfile
from pathlib import Path

from swquad.cli import main

jobs = {
    "quasi": {"case": 1, "omega": 1, "mu1": 0, "mu2": 0, "p_max": 1},
    "closure-check": {"case": 2, "omega": 1, "mu": 0.4, "p_max": 3},
    "relativistic": {"case": 3, "k": -1.0, "mu1": 0.2, "p_max": 1, "signs": [[1, 1]]},
    "dirac-check": {"case": 4, "k": -0.5, "mu1": 0.3},
}

with tempfile.TemporaryDirectory() as tmp:
    for mode, doc in jobs.items():
        path = Path(tmp) / f"{mode}.json"
        path.write_text(json.dumps(doc))
        out = Path(tmp) / f"{mode}.csv"
        status = main([mode, "--config", str(path), "--out", str(out), "--quiet"])
        lines = out.read_text().splitlines()
        print(f"== {mode}: exit {status}, {len(lines) - 1} rows")
        for line in lines[:4]:
            print("  ", line)
