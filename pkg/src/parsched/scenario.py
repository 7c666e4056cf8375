"""Seeded request streams: tracking revisit chains, periodic search and
Poisson verify arrivals, plus a replayable line-oriented file format.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from .model import DwellTemplate, RadarTask, WorkingMode, table_template

SPEED_OF_LIGHT_KM_PER_MS = 299.792458


class WaitMode(enum.Enum):
    TableFixed = "TableFixed"
    RangeDerived = "RangeDerived"


@dataclass(frozen=True)
class ScenarioConfig:
    horizon_ms: float = 12_000.0
    n_general_tracking: int = 40
    n_precision_tracking: int = 0
    verify_rate_hz: float = 2.0
    false_alarm_ratio: float = 0.2
    range_km_bounds: Tuple[float, float] = (50.0, 300.0)
    wait_mode: WaitMode = WaitMode.TableFixed
    seed: int = 0
    search: bool = True
    # per-mode template overrides keyed by mode name; missing modes use the table
    templates: Optional[Mapping[str, DwellTemplate]] = None

    def __post_init__(self):
        if self.horizon_ms <= 0:
            raise ValueError("horizon must be positive")
        if self.n_general_tracking < 0 or self.n_precision_tracking < 0:
            raise ValueError("target counts must be non-negative")
        if self.verify_rate_hz < 0 or self.false_alarm_ratio < 0:
            raise ValueError("rates must be non-negative")
        lo, hi = self.range_km_bounds
        if not 0 < lo <= hi:
            raise ValueError("range bounds must be positive and ordered")

    def template(self, mode: WorkingMode) -> DwellTemplate:
        if self.templates and mode.value in self.templates:
            return self.templates[mode.value]
        return table_template(mode)


def round_trip_wait(range_km: float) -> float:
    return 2.0 * range_km / SPEED_OF_LIGHT_KM_PER_MS


def next_revisit(prev_task: RadarTask, placed_at: Optional[float], new_id: int) -> RadarTask:
    """Follow-up request for a revisit lineage.

    Placed tasks re-request one revisit interval after their actual start;
    dropped tasks (``placed_at=None``) keep the nominal cadence.
    """
    base = prev_task.t_e if placed_at is None else placed_at
    return replace(prev_task, id=new_id, t_e=base + prev_task.template.revisit_interval)


class _Ids:
    def __init__(self):
        self.n = 0

    def __call__(self) -> int:
        self.n += 1
        return self.n - 1


def _chain(first: RadarTask, horizon: float, ids: _Ids) -> List[RadarTask]:
    out = [first]
    while True:
        nxt = next_revisit(out[-1], None, new_id=-1)
        if nxt.t_e >= horizon:
            return out
        out.append(replace(nxt, id=ids()))


def generate_scenario(cfg: ScenarioConfig) -> List[RadarTask]:
    """Request stream sorted by (t_e, id); a pure function of ``cfg``."""
    rng = np.random.default_rng(cfg.seed)
    ids = _Ids()
    targets = _Ids()
    horizon = cfg.horizon_ms
    out: List[RadarTask] = []

    def template(mode: WorkingMode, range_km: Optional[float] = None) -> DwellTemplate:
        tpl = cfg.template(mode)
        if range_km is not None and cfg.wait_mode is WaitMode.RangeDerived:
            tpl = replace(tpl, t_w=round_trip_wait(range_km))
        return tpl

    tracking = ([WorkingMode.GeneralTracking] * cfg.n_general_tracking
                + [WorkingMode.PrecisionTracking] * cfg.n_precision_tracking)
    for mode in tracking:
        range_km = rng.uniform(*cfg.range_km_bounds)
        tpl = template(mode, range_km)
        t_e = rng.uniform(0.0, tpl.revisit_interval)
        if t_e >= horizon:
            continue
        first = RadarTask(ids(), mode, tpl, float(t_e), targets())
        out.extend(_chain(first, horizon, ids))

    if cfg.search:
        for mode in (WorkingMode.LowPrioritySearch, WorkingMode.HighPrioritySearch):
            tpl = template(mode)
            t_e = rng.uniform(0.0, tpl.revisit_interval)
            if t_e < horizon:
                out.extend(_chain(RadarTask(ids(), mode, tpl, float(t_e)), horizon, ids))

    rate_per_ms = cfg.verify_rate_hz * (1.0 + cfg.false_alarm_ratio) / 1000.0
    if rate_per_ms > 0:
        t = 0.0
        while True:
            t += rng.exponential(1.0 / rate_per_ms)
            if t >= horizon:
                break
            range_km = rng.uniform(*cfg.range_km_bounds)
            out.append(RadarTask(ids(), WorkingMode.Verify, template(WorkingMode.Verify, range_km),
                                 float(t), targets()))

    out.sort(key=lambda task: (task.t_e, task.id))
    return out


SCENARIO_HEADER = "# parsched scenario v1\n# id mode t_e t_x t_w t_r l revisit_interval amplitude target_id\n"


class ScenarioFormatError(ValueError):
    pass


def scenario_meta(cfg: ScenarioConfig) -> Dict[str, str]:
    return {"horizon_ms": repr(float(cfg.horizon_ms)), "seed": str(cfg.seed),
            "n_precision": str(cfg.n_precision_tracking), "wait_mode": cfg.wait_mode.value}


def dump_scenario(tasks: Sequence[RadarTask], fh: TextIO,
                  meta: Optional[Mapping[str, str]] = None) -> None:
    fh.write(SCENARIO_HEADER)
    if meta:
        fh.write("# meta " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    for t in tasks:
        tpl = t.template
        target = "-" if t.target_id is None else str(t.target_id)
        fields = (t.t_e, tpl.t_x, tpl.t_w, tpl.t_r, tpl.l, tpl.revisit_interval, tpl.amplitude)
        fh.write(f"{t.id} {t.mode.value} " + " ".join(repr(float(v)) for v in fields)
                 + f" {target}\n")


def dumps_scenario(tasks: Sequence[RadarTask], meta: Optional[Mapping[str, str]] = None) -> str:
    buf = io.StringIO()
    dump_scenario(tasks, buf, meta)
    return buf.getvalue()


def read_scenario_meta(path: Union[str, Path]) -> Dict[str, str]:
    """Key/value pairs from the ``# meta`` header line, if present."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            if line.startswith("# meta "):
                return dict(item.split("=", 1) for item in line[7:].split())
    return {}


def load_scenario(source: Union[str, Path, TextIO]) -> List[RadarTask]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return load_scenario(fh)
    tasks = []
    seen = set()
    for lineno, line in enumerate(source, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 10:
            raise ScenarioFormatError(f"line {lineno}: expected 10 fields, got {len(parts)}")
        try:
            tid = int(parts[0])
            mode = WorkingMode(parts[1])
            t_e, t_x, t_w, t_r, l, revisit, amp = (float(v) for v in parts[2:9])
            target = None if parts[9] == "-" else int(parts[9])
            tpl = DwellTemplate(t_x, t_w, t_r, l, revisit, amp)
        except ValueError as exc:
            raise ScenarioFormatError(f"line {lineno}: {exc}") from exc
        if tid in seen:
            raise ScenarioFormatError(f"line {lineno}: duplicate task id {tid}")
        seen.add(tid)
        tasks.append(RadarTask(tid, mode, tpl, t_e, target))
    return tasks
