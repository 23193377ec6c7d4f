"""Command line entry: render requested panels from harness CSV files."""

import argparse
import sys
from pathlib import Path

from . import panels
from .tables import SchemaError, Table

PANELS = {
    "dist_panels": (panels.dist_panels, "results"),
    "interval_panels": (panels.interval_panels, "summary"),
    "cohens_d_lines": (panels.cohens_d_lines, "summary"),
    "accuracy_lines": (panels.accuracy_lines, "summary"),
    "empirical_intervals": (panels.empirical_intervals, "summary"),
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render figure panels from summary.csv / results.csv files",
    )
    parser.add_argument("--summary", required=True, help="summary.csv path")
    parser.add_argument("--results", help="results.csv path (needed for dist_panels)")
    parser.add_argument("--out", required=True, help="output directory for PNG files")
    parser.add_argument(
        "--which",
        required=True,
        nargs="+",
        help="panel ids (space or comma separated), or 'all': " + ", ".join(PANELS),
    )
    args = parser.parse_args(argv)

    wanted = []
    for item in args.which:
        for part in item.split(","):
            if part and part not in wanted:
                wanted.append(part)
    if "all" in wanted:
        wanted = list(PANELS)
    unknown = sorted(set(wanted) - set(PANELS))
    if unknown:
        print(
            f"unknown panel id(s): {', '.join(unknown)}; valid: {', '.join(PANELS)}, all",
            file=sys.stderr,
        )
        return 2

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = {}
    try:
        for which in wanted:
            render, source = PANELS[which]
            if source == "results" and not args.results:
                print(f"{which} renders from results.csv: pass --results", file=sys.stderr)
                return 2
            path = args.results if source == "results" else args.summary
            if path not in tables:
                tables[path] = Table(path)
            written = render(tables[path], out_dir / f"{which}.png")
            print(f"wrote {written}")
    except FileNotFoundError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 2
    except SchemaError as exc:
        print(f"schema mismatch: {exc}", file=sys.stderr)
        return 2
    return 0
