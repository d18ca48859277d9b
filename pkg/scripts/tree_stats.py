"""Query-tree size statistics for several degree bounds, written as CSV.

    python3 scripts/tree_stats.py --D 2 3 4 5 --samples 100000 --out tree_stats.csv
"""

import argparse
import sys

from spacelca.harness.drivers import run_tree_stats, tree_stats_csv


def main():
    p = argparse.ArgumentParser(description="Query-tree size statistics as CSV")
    p.add_argument("--D", type=int, nargs="+", default=[2, 3, 4, 5])
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--N", type=int, default=1000, help="instance size for the 1-1/N^2 quantile")
    p.add_argument("--seed", default="00")
    p.add_argument("--out")
    args = p.parse_args()
    rows = [row for D in args.D for row in run_tree_stats(D, args.samples, args.seed, N=args.N)]
    text = tree_stats_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
