"""Run-level scheduling metrics: success, time utilisation, average time shift
and priority-weighted yield, plus per-mode failure ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Sequence

from .model import Interval, Placement, RadarTask, WorkingMode

MODES = tuple(WorkingMode)


@dataclass
class MetricsReport:
    ssr: float
    tur: float
    atsr: float
    syr: float
    per_mode_failure: Dict[str, float] = field(default_factory=dict)
    n_requests: int = 0
    n_scheduled: int = 0
    empty: bool = False

    @property
    def failure(self) -> float:
        return 0.0 if self.empty else 1.0 - self.ssr


def shift_ratio(placement: Placement, task: RadarTask) -> float:
    return abs(placement.t_s - task.t_e) / task.template.l


def compute_metrics(timeline: Sequence[Placement], requests: Sequence[RadarTask],
                    horizon: Interval, k: float = 0.5) -> MetricsReport:
    t0, t1 = horizon
    if not t1 > t0:
        raise ValueError(f"degenerate horizon {horizon}")
    m = len(requests)
    if m == 0:
        return MetricsReport(0.0, 0.0, 0.0, 0.0, {mode.value: 0.0 for mode in MODES}, 0, 0, True)
    by_id = {t.id: t for t in requests}
    placed = {}
    for p in timeline:
        if p.task_id not in by_id:
            raise ValueError(f"placement for unknown task {p.task_id}")
        placed[p.task_id] = p
    n = len(placed)

    busy = math.fsum(p.t_x + p.t_r for p in placed.values())
    shifts = [shift_ratio(p, by_id[tid]) for tid, p in placed.items()]
    gained = math.fsum(by_id[tid].priority * (1.0 - k * s) ** 2
                       for (tid, _), s in zip(placed.items(), shifts))
    ideal = math.fsum(t.priority for t in requests)

    requested_by_mode = {mode: 0 for mode in MODES}
    failed_by_mode = {mode: 0 for mode in MODES}
    for t in requests:
        requested_by_mode[t.mode] += 1
        if t.id not in placed:
            failed_by_mode[t.mode] += 1
    per_mode = {mode.value: (failed_by_mode[mode] / requested_by_mode[mode]
                             if requested_by_mode[mode] else 0.0)
                for mode in MODES}

    return MetricsReport(
        ssr=n / m,
        tur=busy / (t1 - t0),
        atsr=math.fsum(shifts) / n if n else 0.0,
        syr=gained / ideal,
        per_mode_failure=per_mode,
        n_requests=m,
        n_scheduled=n,
    )


def mean_std(values: Iterable[float]):
    """Order-independent sample mean and standard deviation."""
    xs = sorted(values)
    n = len(xs)
    if n == 0:
        return math.nan, math.nan
    mean = math.fsum(xs) / n
    if n == 1:
        return mean, 0.0
    return mean, math.sqrt(math.fsum((x - mean) ** 2 for x in xs) / (n - 1))
