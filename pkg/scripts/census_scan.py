#!/usr/bin/env python3
"""Sweep the chain census over a list of x checkpoints and emit CSV.

Example:
    python scripts/census_scan.py --xs 100 1000 10000 100000 --workers 2
    python scripts/census_scan.py --xs 1000000 --out census.csv
"""

from __future__ import annotations

import argparse
import sys
import time

from mondrian.census import CENSUS_CSV_HEADER, census_csv_row, run_chain_census
from mondrian.numtheory import build_factor_table


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--xs", type=int, nargs="+", required=True,
                        help="census checkpoints (each >= 16)")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", type=argparse.FileType("w"), default=sys.stdout)
    args = parser.parse_args()

    table = build_factor_table(max(args.xs))
    print(CENSUS_CSV_HEADER, file=args.out)
    for x in sorted(args.xs):
        start = time.monotonic()
        record = run_chain_census(x, table, workers=args.workers)
        print(census_csv_row(record), file=args.out, flush=True)
        print(f"x={x}: {time.monotonic() - start:.2f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
