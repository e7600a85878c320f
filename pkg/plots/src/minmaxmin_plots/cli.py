"""CLI for rendering benchmark CSVs to figure files."""

from __future__ import annotations

import argparse
import sys

from .figures import SchemaError, plot_metrics, plot_solved_over_time


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="minmaxmin-plots", description=__doc__)
    parser.add_argument("what", choices=["metrics", "solved", "all"])
    parser.add_argument("csv", help="benchmark CSV produced by the solver")
    parser.add_argument("--out", default="figures", help="output directory")
    parser.add_argument("--fmt", choices=["png", "svg"], default="png")
    args = parser.parse_args(argv)

    try:
        paths = []
        if args.what in ("metrics", "all"):
            paths += plot_metrics(args.csv, args.out, args.fmt)
        if args.what in ("solved", "all"):
            paths += plot_solved_over_time(args.csv, args.out, args.fmt)
    except (OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in paths:
        print(path)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
