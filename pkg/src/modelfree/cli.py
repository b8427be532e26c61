"""Command-line front end: run scenarios, list the catalog, check gain maps.

Exit codes: 0 ok, 2 unknown scenario or invalid configuration, 3 numeric
divergence (the offending step index is printed).
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, DivergenceError
from .experiments import (DEFAULT_SEED, list_scenarios, parse_overrides,
                          run_scenario, verify_correspondence)

EXIT_OK = 0
EXIT_BAD_CONFIG = 2
EXIT_DIVERGED = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfc",
        description="Model-free control benchmark runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a catalog scenario and write its records")
    run.add_argument("--scenario", required=True, help="catalog scenario name")
    run.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run.add_argument("--out", default="runs", help="output directory")
    run.add_argument("--duration", type=float, default=None,
                     help="override the horizon in seconds")
    run.add_argument("--override", action="append", default=[],
                     metavar="KEY=VALUE", help="override a scenario parameter")

    sub.add_parser("list", help="list the scenario catalog")

    ver = sub.add_parser("verify-correspondence",
                         help="check the sampled classic/intelligent identities")
    ver.add_argument("--h", type=float, default=0.01, help="sampling interval")
    ver.add_argument("--alpha", type=float, default=1.0)
    ver.add_argument("--n", type=int, default=100, help="number of random sequences")
    ver.add_argument("--length", type=int, default=1000, help="sequence length")
    ver.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list":
        print(list_scenarios())
        return EXIT_OK

    if args.command == "verify-correspondence":
        try:
            report = verify_correspondence(h=args.h, alpha=args.alpha,
                                           n_random=args.n, length=args.length,
                                           seed=args.seed)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BAD_CONFIG
        for direction, row in report["rows"].items():
            gains = ", ".join(f"{k}={v:.6g}" for k, v in row["mapped_gains"].items())
            print(f"{direction:12s} max|du| = {row['max_abs_deviation']:.3e} "
                  f"(relative {row['max_rel_deviation']:.3e})  [{gains}]")
        print(f"max relative deviation: {report['max_rel_deviation']:.3e}")
        return EXIT_OK

    # run
    try:
        overrides = parse_overrides(args.override)
        if args.duration is not None:
            overrides["duration"] = args.duration
        result = run_scenario(args.scenario, seed=args.seed, out_dir=args.out,
                              overrides=overrides)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    print(f"wrote {result.out_dir}")
    if result.summary_path is not None:
        print(result.summary_path.read_text(encoding="utf-8"), end="")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
