#!/usr/bin/env python3
"""Run the allocation sensitivity grid and print a comparison table.

Usage: python scripts/run_sensitivity.py [--replications N] [--seed S]
"""

import argparse

from dlmtrial.harness import run_grid
from dlmtrial.tables import sensitivity_grid, sensitivity_references


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--replications", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--parallelism", type=int, default=None)
    args = parser.parse_args()

    refs = sensitivity_references()
    results = run_grid(sensitivity_grid(args.replications),
                       args.seed, args.parallelism)
    print(f"{'scenario':<24}{'propA':>8}{'ref':>8}{'switch':>9}{'ref':>9}")
    for scenario, agg in results:
        ref = refs[scenario.label]
        print(f"{scenario.label:<24}{agg.mean_propA:>8.3f}"
              f"{ref['mean_propA']:>8.3f}{agg.mean_switch:>9.2f}"
              f"{ref['mean_switch']:>9.2f}")


if __name__ == "__main__":
    main()
