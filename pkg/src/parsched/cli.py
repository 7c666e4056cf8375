"""Command-line front end: ``parsched generate | run | sweep | compare``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from .config import FULL_GRID, ConfigError, RunConfig, load_config
from .experiment import (AGG_COLUMNS, DELTA_COLUMNS, RAW_COLUMNS, TIMELINE_COLUMNS, aggregate,
                         compare, metrics_row, run_policy, run_sweep, timeline_rows, write_csv)
from .scenario import (ScenarioFormatError, dump_scenario, generate_scenario, load_scenario,
                       read_scenario_meta, scenario_meta)
from .scheduler import Policy

log = logging.getLogger("parsched")

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline=""), True


def _config(args) -> RunConfig:
    cfg = load_config(args.config)
    scen = cfg.scenario
    if getattr(args, "seed", None) is not None:
        scen = replace(scen, seed=args.seed)
    if getattr(args, "n_precision", None) is not None:
        scen = replace(scen, n_precision_tracking=args.n_precision)
    return replace(cfg, scenario=scen)


def cmd_generate(args) -> int:
    cfg = _config(args)
    tasks = generate_scenario(cfg.scenario)
    try:
        fh, close = _open_out(args.out)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from exc
    try:
        dump_scenario(tasks, fh, scenario_meta(cfg.scenario))
    finally:
        if close:
            fh.close()
    print(f"{len(tasks)} requests", file=sys.stderr if fh is sys.stdout else sys.stdout)
    return 0


def cmd_run(args) -> int:
    cfg = _config(args)
    tasks = load_scenario(args.scenario)
    meta = read_scenario_meta(args.scenario)
    horizon = float(meta.get("horizon_ms", cfg.scenario.horizon_ms))
    seed = int(meta.get("seed", cfg.scenario.seed))
    n_precision = int(meta.get("n_precision", cfg.scenario.n_precision_tracking))
    policy = Policy(args.policy)
    result, report = run_policy(tasks, horizon, cfg.scheduler, policy, cfg.k)
    fh, close = _open_out(args.out)
    try:
        write_csv([metrics_row(policy, seed, n_precision, report)], RAW_COLUMNS, fh)
    finally:
        if close:
            fh.close()
    if args.timeline:
        tfh, tclose = _open_out(args.timeline)
        try:
            write_csv(timeline_rows(result.timeline, tasks), TIMELINE_COLUMNS, tfh)
        finally:
            if tclose:
                tfh.close()
    return 0


def _sweep_config(args) -> RunConfig:
    cfg = _config(args)
    sweep = FULL_GRID if args.full else cfg.sweep
    if args.reps is not None:
        sweep = replace(sweep, reps=args.reps)
    if args.workers is not None:
        sweep = replace(sweep, workers=args.workers)
    policies = tuple(Policy(p) for p in args.policy) if args.policy else cfg.policies
    out_dir = args.out_dir or cfg.output_dir
    return replace(cfg, sweep=sweep, policies=policies, output_dir=out_dir)


def _write(path: Path, rows, columns) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv(rows, columns, fh)
    log.info("wrote %s", path)


def cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    rows = run_sweep(cfg)
    out = Path(cfg.output_dir)
    _write(out / "raw.csv", rows, RAW_COLUMNS)
    agg = aggregate(rows, cfg.policies)
    _write(out / "aggregate.csv", agg, AGG_COLUMNS)
    return 0


def cmd_compare(args) -> int:
    cfg = _sweep_config(args)
    if Policy.SynthesisInterleave not in cfg.policies or len(cfg.policies) < 2:
        raise UsageError("compare needs SynthesisInterleave and at least one baseline policy")
    rows = run_sweep(cfg)
    out = Path(cfg.output_dir)
    agg = aggregate(rows, cfg.policies)
    _write(out / "raw.csv", rows, RAW_COLUMNS)
    _write(out / "aggregate.csv", agg, AGG_COLUMNS)
    _write(out / "compare.csv", compare(agg), DELTA_COLUMNS)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parsched", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def common(p):
        p.add_argument("--config", help="TOML run configuration (default: $PARSCHED_CONFIG)")

    p = sub.add_parser("generate", help="write a replayable scenario file")
    common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--n-precision", type=int)
    p.add_argument("--out", required=True, help="scenario path, or - for stdout")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="schedule one scenario with one policy")
    common(p)
    p.add_argument("scenario")
    p.add_argument("--policy", default=Policy.SynthesisInterleave.value,
                   choices=[x.value for x in Policy])
    p.add_argument("--out", help="metrics CSV path (default stdout)")
    p.add_argument("--timeline", help="write every placement to this CSV")
    p.set_defaults(func=cmd_run)

    for name, func, helptext in (("sweep", cmd_sweep, "policy x load x seed grid"),
                                 ("compare", cmd_compare, "sweep plus metric deltas")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--out-dir")
        p.add_argument("--reps", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--policy", action="append", choices=[x.value for x in Policy])
        p.add_argument("--full", action="store_true", help="full grid: step 10, 100 reps")
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"parsched: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ScenarioFormatError, OSError, ValueError) as exc:
        print(f"parsched: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
