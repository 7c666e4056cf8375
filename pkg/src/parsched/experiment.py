"""Monte Carlo sweeps over precision-target load, policy and seed.

Cells are independent; rows are merged by sorted cell key so the output is
identical for any worker count or execution order.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple

from .config import RunConfig
from .metrics import MODES, MetricsReport, compute_metrics, mean_std
from .model import Placement, RadarTask
from .scenario import generate_scenario
from .scheduler import HorizonResult, Policy, SchedulerConfig, run_horizon

METRICS = ("ssr", "tur", "atsr", "syr", "failure") + tuple(f"fail_{m.value}" for m in MODES)
RAW_COLUMNS = ("policy", "seed", "n_precision", "n_requests", "n_scheduled", "empty") + METRICS
AGG_COLUMNS = ("policy", "n_precision", "reps") + tuple(
    f"{stat}_{m}" for m in METRICS for stat in ("mean", "std"))
TIMELINE_COLUMNS = ("task_id", "mode", "t_s", "host_id", "mode_used")


def run_policy(tasks: Sequence[RadarTask], horizon: float, cfg: SchedulerConfig,
               policy: Policy, k: float = 0.5) -> Tuple[HorizonResult, MetricsReport]:
    result = run_horizon(tasks, cfg, policy, horizon=horizon)
    return result, compute_metrics(result.timeline, result.requests, result.horizon, k)


def metrics_row(policy: Policy, seed: int, n_precision: int, report: MetricsReport) -> Dict[str, object]:
    row: Dict[str, object] = {
        "policy": policy.value, "seed": seed, "n_precision": n_precision,
        "n_requests": report.n_requests, "n_scheduled": report.n_scheduled,
        "empty": int(report.empty),
        "ssr": report.ssr, "tur": report.tur, "atsr": report.atsr, "syr": report.syr,
        "failure": report.failure,
    }
    for mode, value in report.per_mode_failure.items():
        row[f"fail_{mode}"] = value
    return row


def run_cell(cfg: RunConfig, n_precision: int, seed: int) -> List[Dict[str, object]]:
    """All configured policies on one generated scenario."""
    scen = replace(cfg.scenario, n_precision_tracking=n_precision, seed=seed)
    tasks = generate_scenario(scen)
    rows = []
    for policy in cfg.policies:
        _, report = run_policy(tasks, scen.horizon_ms, cfg.scheduler, policy, cfg.k)
        rows.append(metrics_row(policy, seed, n_precision, report))
    return rows


def _cell_args(cfg: RunConfig) -> List[Tuple[int, int]]:
    return [(n, cfg.sweep.seed0 + rep) for n in cfg.sweep.loads for rep in range(cfg.sweep.reps)]


def _run_cell_star(args):
    return run_cell(*args)


def _row_key(cfg: RunConfig):
    order = {p.value: i for i, p in enumerate(cfg.policies)}
    return lambda row: (order[row["policy"]], row["n_precision"], row["seed"])


def run_sweep(cfg: RunConfig, workers: Optional[int] = None) -> List[Dict[str, object]]:
    workers = cfg.sweep.workers if workers is None else workers
    cells = [(cfg, n, seed) for n, seed in _cell_args(cfg)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_cell_star, cells, chunksize=4))
    else:
        chunks = [run_cell(*c) for c in cells]
    rows = [row for chunk in chunks for row in chunk]
    return sorted(rows, key=_row_key(cfg))


def aggregate(rows: Iterable[Mapping[str, object]],
              policies: Optional[Sequence[Policy]] = None) -> List[Dict[str, object]]:
    """Mean and sample std of every metric per (policy, n_precision)."""
    groups: Dict[Tuple[str, int], List[Mapping[str, object]]] = {}
    for row in rows:
        groups.setdefault((str(row["policy"]), int(row["n_precision"])), []).append(row)
    order = {p.value: i for i, p in enumerate(policies or tuple(Policy))}
    out = []
    for (policy, n), members in sorted(groups.items(), key=lambda kv: (order.get(kv[0][0], 99),
                                                                     kv[0][1])):
        agg: Dict[str, object] = {"policy": policy, "n_precision": n, "reps": len(members)}
        for m in METRICS:
            mean, std = mean_std(float(r[m]) for r in members)
            agg[f"mean_{m}"] = mean
            agg[f"std_{m}"] = std
        out.append(agg)
    return out


COMPARE_METRICS = ("ssr", "tur", "atsr", "syr", "failure")
DELTA_COLUMNS = ("policy", "baseline", "n_precision") + tuple(
    f"{kind}_{m}" for m in COMPARE_METRICS for kind in ("delta", "rel"))


def compare(agg_rows: Sequence[Mapping[str, object]], proposed: Policy = Policy.SynthesisInterleave
            ) -> List[Dict[str, object]]:
    """Per-load metric differences of ``proposed`` against every other policy.

    ``delta`` is proposed minus baseline; ``rel`` is that delta over the baseline.
    """
    table = {(r["policy"], r["n_precision"]): r for r in agg_rows}
    out = []
    baselines = sorted({r["policy"] for r in agg_rows} - {proposed.value},
                       key=lambda name: [p.value for p in Policy].index(name))
    loads = sorted({r["n_precision"] for r in agg_rows})
    for base in baselines:
        for n in loads:
            mine, theirs = table.get((proposed.value, n)), table.get((base, n))
            if mine is None or theirs is None:
                continue
            row: Dict[str, object] = {"policy": proposed.value, "baseline": base, "n_precision": n}
            for m in COMPARE_METRICS:
                a, b = float(mine[f"mean_{m}"]), float(theirs[f"mean_{m}"])
                row[f"delta_{m}"] = a - b
                row[f"rel_{m}"] = (a - b) / b if b else float("nan")
            out.append(row)
    return out


def _fmt(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: Iterable[Mapping[str, object]], columns: Sequence[str], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])


def csv_text(rows: Iterable[Mapping[str, object]], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    write_csv(rows, columns, buf)
    return buf.getvalue()


def read_csv(fh: TextIO) -> List[Dict[str, str]]:
    return list(csv.DictReader(fh))


def timeline_rows(timeline: Sequence[Placement], tasks: Sequence[RadarTask]) -> List[Dict[str, object]]:
    modes = {t.id: t.mode.value for t in tasks}
    return [{"task_id": p.task_id, "mode": modes[p.task_id], "t_s": p.t_s,
             "host_id": "" if p.host_id is None else p.host_id, "mode_used": p.mode_used.value}
            for p in sorted(timeline, key=lambda p: (p.t_s, p.task_id))]
