"""Domain types for radar dwell requests, placements and queue classification.

All times are milliseconds on a simulation clock starting at 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

Interval = Tuple[float, float]

# Absolute tolerance for time comparisons (ms).
EPS = 1e-9


class WorkingMode(enum.Enum):
    LowPrioritySearch = "LowPrioritySearch"
    HighPrioritySearch = "HighPrioritySearch"
    GeneralTracking = "GeneralTracking"
    PrecisionTracking = "PrecisionTracking"
    Verify = "Verify"

    @property
    def static_priority(self) -> int:
        return _STATIC_PRIORITY[self]

    @property
    def is_tracking(self) -> bool:
        return self in (WorkingMode.GeneralTracking, WorkingMode.PrecisionTracking)

    @property
    def is_search(self) -> bool:
        return self in (WorkingMode.LowPrioritySearch, WorkingMode.HighPrioritySearch)


_STATIC_PRIORITY = {
    WorkingMode.LowPrioritySearch: 1,
    WorkingMode.HighPrioritySearch: 2,
    WorkingMode.GeneralTracking: 3,
    WorkingMode.PrecisionTracking: 4,
    WorkingMode.Verify: 5,
}


class PlacementMode(enum.Enum):
    Standalone = "Standalone"
    ExternalA = "ExternalA"
    InternalB = "InternalB"


@dataclass(frozen=True)
class DwellTemplate:
    """Beam residency geometry and request cadence for one kind of dwell."""

    t_x: float
    t_w: float
    t_r: float
    l: float
    revisit_interval: float
    amplitude: float = 2.0

    def __post_init__(self):
        if not (self.t_x > 0 and self.t_r > 0):
            raise ValueError("transmit and receive durations must be positive")
        if self.t_w < 0:
            raise ValueError("wait duration must be non-negative")
        if self.l <= 0 or self.revisit_interval <= 0:
            raise ValueError("time window and revisit interval must be positive")

    @property
    def dwell(self) -> float:
        return self.t_x + self.t_w + self.t_r


@dataclass(frozen=True)
class RadarTask:
    id: int
    mode: WorkingMode
    template: DwellTemplate
    t_e: float
    target_id: Optional[int] = None

    @property
    def t_d(self) -> float:
        return self.t_e + self.template.l

    @property
    def priority(self) -> int:
        return self.mode.static_priority


@dataclass(frozen=True)
class Placement:
    """An accepted dwell pinned to the timeline."""

    task_id: int
    t_s: float
    t_x: float
    t_w: float
    t_r: float
    host_id: Optional[int] = None
    mode_used: PlacementMode = PlacementMode.Standalone

    @classmethod
    def at(cls, task: RadarTask, t_s: float, host_id: Optional[int] = None,
           mode_used: PlacementMode = PlacementMode.Standalone) -> "Placement":
        tpl = task.template
        return cls(task.id, t_s, tpl.t_x, tpl.t_w, tpl.t_r, host_id, mode_used)

    @property
    def transmit(self) -> Interval:
        return (self.t_s, self.t_s + self.t_x)

    @property
    def wait(self) -> Interval:
        return (self.t_s + self.t_x, self.t_s + self.t_x + self.t_w)

    @property
    def receive(self) -> Interval:
        start = self.t_s + self.t_x + self.t_w
        return (start, start + self.t_r)

    @property
    def end(self) -> float:
        return self.t_s + self.t_x + self.t_w + self.t_r


@dataclass
class ScheduleOutcome:
    interval: Interval
    executed: List[Placement] = field(default_factory=list)
    delayed: List[RadarTask] = field(default_factory=list)
    deleted: List[RadarTask] = field(default_factory=list)


# Per-mode dwell geometry: (t_x, t_w, t_r) ms, window ms, revisit rate Hz.
DWELL_TABLE = {
    WorkingMode.LowPrioritySearch: ((1.0, 2.0, 1.0), 100.0, 50.0),
    WorkingMode.HighPrioritySearch: ((0.5, 1.5, 0.5), 50.0, 50.0),
    WorkingMode.GeneralTracking: ((0.5, 0.9, 0.5), 50.0, 2.0),
    WorkingMode.PrecisionTracking: ((0.5, 0.5, 0.5), 30.0, 5.0),
    WorkingMode.Verify: ((1.0, 1.5, 1.0), 30.0, 2.0),
}


def default_amplitude(mode: WorkingMode) -> float:
    return 1.5 if mode.is_search else 2.0


def table_template(mode: WorkingMode, amplitude: Optional[float] = None,
                   t_w: Optional[float] = None) -> DwellTemplate:
    (t_x, tw, t_r), window, rate_hz = DWELL_TABLE[mode]
    return DwellTemplate(
        t_x=t_x,
        t_w=tw if t_w is None else t_w,
        t_r=t_r,
        l=window,
        revisit_interval=1000.0 / rate_hz,
        amplitude=default_amplitude(mode) if amplitude is None else amplitude,
    )


def dwell_intervals(template: DwellTemplate, t_s: float) -> Tuple[Interval, Interval, Interval]:
    """Transmit, wait and receive intervals of a dwell starting at ``t_s``."""
    tx_end = t_s + template.t_x
    rx_start = tx_end + template.t_w
    return (t_s, tx_end), (tx_end, rx_start), (rx_start, rx_start + template.t_r)


def eligibility_window(task: RadarTask) -> Optional[Interval]:
    """Start times at which the dwell both begins inside its window and ends by
    the deadline. ``None`` when the window is shorter than the dwell.
    """
    lo = task.t_e - task.template.l
    hi = task.t_e + task.template.l - task.template.dwell
    if hi < lo:
        return None
    return (lo, hi)


def classify_unscheduled(tasks: Sequence[RadarTask], t_end: float) -> Tuple[List[RadarTask], List[RadarTask]]:
    """Split unplaced tasks into (delay, delete) at the close of an interval."""
    delay, delete = [], []
    for task in tasks:
        (delay if task.t_e + task.template.l >= t_end else delete).append(task)
    return delay, delete


def overlaps(a: Interval, b: Interval, eps: float = EPS) -> bool:
    """Half-open overlap test; intervals that only touch do not overlap."""
    return a[0] < b[1] - eps and b[0] < a[1] - eps
