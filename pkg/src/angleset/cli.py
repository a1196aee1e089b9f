"""Command-line entry point: ``angleset --scenario FILE [options]``.

Exit status is 0 when every verdict agrees or holds, 1 when a check fails
and 2 on input errors (unreadable or schema-invalid scenarios, missing
series).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .reports import SERIES, ScenarioError, emit_plot_data, load_scenario, report_json, run_scenario


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="angleset",
                                description="Run an angle-set / harmonic-measure scenario.")
    p.add_argument("--scenario", required=True, metavar="PATH", help="scenario JSON file")
    p.add_argument("--seed", type=int, help="override the random seed")
    p.add_argument("--walks", type=int, help="override the number of Monte-Carlo walks")
    p.add_argument("--tol", type=float, help="override the angle tolerance (radians)")
    p.add_argument("--out", default=".", metavar="DIR", help="directory for report and CSV files")
    p.add_argument("--emit", action="append", default=[], choices=SERIES, metavar="SERIES",
                   help=f"also write a CSV series ({', '.join(SERIES)}); repeatable")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        scn = load_scenario(args.scenario)
        result = run_scenario(scn, {"seed": args.seed, "walks": args.walks, "tol": args.tol})
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{result.report['scenario_id']}.json"
        path.write_text(report_json(result.report))
        for what in args.emit:
            emit_plot_data(result, what, out)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{result.report['scenario_id']}: {result.report['status']} -> {path}")
    return result.status


if __name__ == "__main__":
    sys.exit(main())
