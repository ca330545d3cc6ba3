#!/usr/bin/env python3
"""Writes the historical load table used by the smart-grid example.

load = 3 * hour + 0.5 * temp + 10, with hour an integer in [0, 23] and temp a
multiple of 0.5 in [10, 20], so every value is exact in binary floating point.
"""

import argparse
import csv
import random
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=200)
    parser.add_argument("--seed", type=int, default=20240917)
    parser.add_argument("--out", default="-")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["hour", "temp", "load"])
    for _ in range(args.rows):
        hour = rng.randint(0, 23)
        temp = rng.randint(20, 40) / 2
        writer.writerow([hour, temp, 3 * hour + 0.5 * temp + 10])
    if out is not sys.stdout:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
