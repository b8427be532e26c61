"""Batch entry point: regenerate figures from benchmark CSV directories."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import render, spec_for_directory
from .schema import SchemaError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="mfc-plots",
        description="Regenerate benchmark figures from record CSVs")
    parser.add_argument("--csv-dir", required=True,
                        help="a scenario directory, or a directory of them")
    parser.add_argument("--out", default=None,
                        help="output directory for images (defaults to the "
                             "scenario directories themselves)")
    args = parser.parse_args(argv)

    root = Path(args.csv_dir)
    if not root.is_dir():
        print(f"error: {root} is not a directory", file=sys.stderr)
        return 2
    if any(root.glob("*.csv")):
        scenario_dirs = [root]
    else:
        scenario_dirs = sorted(d for d in root.iterdir()
                               if d.is_dir() and any(d.glob("*.csv")))
    if not scenario_dirs:
        print(f"error: no record CSVs under {root}", file=sys.stderr)
        return 2

    failures = 0
    for d in scenario_dirs:
        out_path = None
        if args.out is not None:
            out_path = Path(args.out) / f"{d.name}.png"
        try:
            written = render(d, spec_for_directory(d), out_path)
        except SchemaError as exc:
            print(f"schema error: {exc}", file=sys.stderr)
            failures += 1
            continue
        print(f"wrote {written}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
