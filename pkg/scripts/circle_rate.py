"""Truncation error of the circle series against its closed form, L = 10 .. 1e6.

    python scripts/circle_rate.py [--out rate.csv]
"""
import argparse
import csv
import sys

from spectral_rkhs import verification


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--out")
    args = p.parse_args()
    rows, rate = verification.circle_rate_table(levels=(10, 100, 1000, 10_000, 100_000, 1_000_000))
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["L", "value_at_0", "max_error", "certified_tail"])
    for r in rows:
        w.writerow([f"{x:.10g}" for x in r])
    print(f"# fitted rate {rate:.4f} (expected -1)", file=sys.stderr)


if __name__ == "__main__":
    main()
