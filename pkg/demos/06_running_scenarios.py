"""Driving the command-line tool from Python.

Each file in demos/scenarios is one JSON scenario.  The same runs are
available from a shell as ``angleset --scenario FILE --out DIR --emit SERIES``.
"""

import json
import tempfile
from pathlib import Path

from angleset.cli import main

here = Path(__file__).resolve().parent / "scenarios"
with tempfile.TemporaryDirectory() as out:
    for path in sorted(here.glob("*.json")):
        status = main(["--scenario", str(path), "--out", out, "--walks", "20000"])
        print(f"   exit status {status}")
    rep = json.loads((Path(out) / "spiral_half_plane.json").read_text())
    print("\nclassification in spiral_half_plane.json:",
          rep["verdicts"]["classification"]["kind"], rep["verdicts"]["classification"]["interval"])
