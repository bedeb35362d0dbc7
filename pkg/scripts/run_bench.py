#!/usr/bin/env python3
"""Reproduce the benchmark curves: mean CNOT count of random MCX placements
against the closed-form upper bound and the two comparison curves.

Writes one CSV per run; see the summary rows for the plotted quantities.

    python scripts/run_bench.py --fixed-k 20 --samples 100 --out bench_k20.csv
    python scripts/run_bench.py --fixed-n 4 --lo 6 --hi 40 --out bench_n4.csv
"""
import argparse
import sys

from mcg import costmodel
from mcg.bench import BenchConfig, run_bench, summaries, to_csv


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixed-k", type=int, default=None)
    ap.add_argument("--fixed-n", type=int, default=None)
    ap.add_argument("--lo", type=int, default=None)
    ap.add_argument("--hi", type=int, default=None)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--opt", default="none",
                    choices=["none", "cost", "depth", "all"])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    if (args.fixed_k is None) == (args.fixed_n is None):
        ap.error("pass exactly one of --fixed-k / --fixed-n")
    if args.fixed_k is not None:
        mode, fixed = "fixed_k", args.fixed_k
        lo = args.lo if args.lo is not None else 1
        hi = args.hi if args.hi is not None else fixed - 2
    else:
        mode, fixed = "fixed_n", args.fixed_n
        lo = args.lo if args.lo is not None else fixed + 2
        hi = args.hi if args.hi is not None else fixed + 30

    cfg = BenchConfig(mode=mode, fixed=fixed, values=tuple(range(lo, hi + 1)),
                      samples=args.samples, seed=args.seed, opt=args.opt,
                      workers=args.workers)
    records = run_bench(cfg)
    text = to_csv(records)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)

    print(f"\n{'k':>4s} {'n':>4s} {'mean cx':>9s} {'long-range':>11s} {'upper':>6s}")
    for (k, n), mean in sorted(summaries(records).items()):
        print(f"{k:4d} {n:4d} {mean:9.1f} "
              f"{costmodel.longrange_cnot_cx(k + n):11d} "
              f"{costmodel.upper_mcx(k, n).cx:6d}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
