#!/usr/bin/env python3
"""Run the policy comparison sweep and print a per-load summary table.

    python scripts/desk_sweep.py                 # desk grid: loads 0..200 step 40, 20 reps
    python scripts/desk_sweep.py --full -j 8     # full grid: step 10, 100 reps
"""

import argparse
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from parsched.config import FULL_GRID, load_config
from parsched.experiment import (AGG_COLUMNS, DELTA_COLUMNS, RAW_COLUMNS, aggregate, compare,
                                 run_sweep, write_csv)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config")
    ap.add_argument("--full", action="store_true")
    ap.add_argument("--reps", type=int)
    ap.add_argument("-j", "--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out-dir", default="results/desk")
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    sweep = FULL_GRID if args.full else cfg.sweep
    if args.reps:
        sweep = replace(sweep, reps=args.reps)
    cfg = replace(cfg, sweep=sweep)

    t0 = time.perf_counter()
    rows = run_sweep(cfg, workers=args.workers)
    agg = aggregate(rows, cfg.policies)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, data, cols in (("raw.csv", rows, RAW_COLUMNS), ("aggregate.csv", agg, AGG_COLUMNS),
                             ("compare.csv", compare(agg), DELTA_COLUMNS)):
        with open(out / name, "w", newline="") as fh:
            write_csv(data, cols, fh)

    print(f"{len(rows)} runs in {time.perf_counter() - t0:.1f}s -> {out}/")
    print(f"{'policy':<20} {'n':>4} {'ssr':>7} {'tur':>7} {'atsr':>7} {'syr':>7} {'fail':>7}")
    for r in agg:
        print(f"{r['policy']:<20} {r['n_precision']:>4} " + " ".join(
            f"{r['mean_' + m]:7.3f}" for m in ("ssr", "tur", "atsr", "syr", "failure")))
    return 0


if __name__ == "__main__":
    sys.exit(main())
