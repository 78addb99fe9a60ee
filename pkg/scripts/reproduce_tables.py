#!/usr/bin/env python3
"""Reproduce one or more summary tables and write comparison CSVs.

Usage: python scripts/reproduce_tables.py [tables ...] [--out DIR]
Defaults to tables 2 and 5 (the fastest and the beta comparison).
"""

import argparse
import sys

from dlmtrial.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("tables", nargs="*", default=["2", "5"])
    parser.add_argument("--out", default="out")
    parser.add_argument("--replications", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    for table in args.tables or ["2", "5"]:
        code = cli_main([
            "reproduce-table", table, "--out", f"{args.out}/table{table}",
            "--replications", str(args.replications),
            "--seed", str(args.seed),
        ])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
