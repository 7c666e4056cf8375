"""Online time-pointer scheduler with optional pulse interleaving.

Each 50 ms scheduling interval is scheduled independently; only the
transmitter state and the delay queue carry over to the next interval.
Every placement finishes its receive inside the interval it was scheduled in.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .energy import (EnergyConfig, InfeasiblePulse, TransmitterState, commit_pulse,
                     earliest_transmit)
from .interleave import InterleaveContext, best_placement, open_standalone, update_context
from .model import (EPS, Interval, Placement, RadarTask, ScheduleOutcome, classify_unscheduled,
                    eligibility_window)
from .priority import PriorityConfig, score_arrays


class Policy(enum.Enum):
    SynthesisInterleave = "SynthesisInterleave"
    HpedfInterleave = "HpedfInterleave"
    HpedfPointer = "HpedfPointer"

    @property
    def use_timeliness(self) -> bool:
        return self is Policy.SynthesisInterleave

    @property
    def interleave(self) -> bool:
        return self is not Policy.HpedfPointer


REVISIT_MODES = ("nominal", "adaptive")


@dataclass(frozen=True)
class SchedulerConfig:
    si: float = 50.0
    dt: float = 0.1
    energy: EnergyConfig = field(default_factory=EnergyConfig)
    priority: PriorityConfig = field(default_factory=PriorityConfig)
    # nominal: tracking revisits keep the generated cadence;
    # adaptive: the next revisit is re-timed from the actual start time
    revisit: str = "nominal"
    # a request is a candidate only once the pointer reaches its request time;
    # False lets it start anywhere in its eligibility window, including early
    release_at_request: bool = True

    def __post_init__(self):
        if self.si <= 0 or self.dt <= 0:
            raise ValueError("si and dt must be positive")
        if self.dt > self.si / 10:
            raise ValueError("dt must be much smaller than si")
        if self.revisit not in REVISIT_MODES:
            raise ValueError(f"revisit must be one of {REVISIT_MODES}")


def schedule_interval(pending: Sequence[RadarTask], interval: Interval, cfg: SchedulerConfig,
                      policy: Policy, tx_state: TransmitterState
                      ) -> Tuple[ScheduleOutcome, TransmitterState]:
    t0, t_end = interval
    if not t_end > t0:
        raise ValueError(f"malformed interval {interval}")
    outcome = ScheduleOutcome(interval=(t0, t_end))
    tasks = list(pending)
    n = len(tasks)
    if n == 0:
        return outcome, tx_state

    w_lo = np.empty(n)
    w_hi = np.empty(n)
    alive = np.ones(n, dtype=bool)
    for i, task in enumerate(tasks):
        win = eligibility_window(task)
        if win is None:
            w_lo[i], w_hi[i] = math.inf, -math.inf
        else:
            w_lo[i], w_hi[i] = win
    prio = np.array([t.priority for t in tasks], dtype=float)
    t_d = np.array([t.t_d for t in tasks])
    t_e = np.array([t.t_e for t in tasks])
    ids = np.array([t.id for t in tasks])
    window = np.array([t.template.l for t in tasks])
    is_search = np.array([t.mode.is_search for t in tasks])

    opens = np.maximum(w_lo, t_e) if cfg.release_at_request else w_lo
    deferred = np.zeros(n, dtype=bool)
    energy = cfg.energy
    state = tx_state
    ctx = InterleaveContext(o1_start=t0, o2_start=t0)
    tp = t0

    while tp <= t_end + EPS:
        dead = alive & (w_hi < tp - EPS)
        if dead.any():
            for i in np.flatnonzero(dead):
                outcome.deleted.append(tasks[i])
            alive &= ~dead
        if not alive.any():
            break
        elig = alive & (opens <= tp + EPS)
        if not elig.any():
            # no candidate until the next window opens: step the pointer in dt units
            steps = max(1, math.ceil((opens[alive].min() - tp) / cfg.dt - 1e-9))
            tp += steps * cfg.dt
            ctx = ctx.advance_to(tp)
            continue

        idx = np.flatnonzero(elig)
        order = score_arrays(prio[idx], t_d[idx], ids[idx], t_e[idx], window[idx],
                             is_search[idx], tp, cfg.priority, policy.use_timeliness)
        best = int(idx[order[0]])
        task = tasks[best]
        tpl = task.template

        placed: Optional[Placement] = None
        if policy.interleave and ctx.is_open:
            found = best_placement(ctx, task, state, energy)
            if found is not None and found[0].end <= t_end + EPS:
                placed = found[0]
        if placed is not None:
            state = commit_pulse(state, placed.t_s, tpl.t_x, tpl.amplitude, energy)
            ctx = update_context(ctx, placed, task)
            tp = placed.transmit[1]
        else:
            try:
                t_s = max(tp, ctx.o2_start, earliest_transmit(state, tpl.t_x, tpl.amplitude, energy))
            except InfeasiblePulse:
                t_s = math.inf
            alive[best] = False
            if t_s > w_hi[best] + EPS:
                outcome.deleted.append(task)
                continue
            if t_s + tpl.dwell > t_end + EPS:
                deferred[best] = True
                continue
            placed = Placement.at(task, t_s)
            state = commit_pulse(state, t_s, tpl.t_x, tpl.amplitude, energy)
            if policy.interleave:
                ctx = open_standalone(ctx, placed, task)
                tp = t_s + tpl.t_x if ctx.is_open else placed.end
            else:
                ctx = InterleaveContext(o1_start=placed.end, o2_start=placed.end)
                tp = placed.end
        alive[best] = False
        outcome.executed.append(placed)

    leftover = [tasks[i] for i in np.flatnonzero(alive | deferred)]
    delay, delete = classify_unscheduled(leftover, t_end)
    outcome.delayed.extend(delay)
    outcome.deleted.extend(delete)
    return outcome, state


@dataclass
class HorizonResult:
    timeline: List[Placement]
    requests: List[RadarTask]
    deleted: List[RadarTask]
    horizon: Interval
    outcomes: List[ScheduleOutcome] = field(default_factory=list)


def run_horizon(scenario: Iterable[RadarTask], cfg: SchedulerConfig, policy: Policy,
                horizon: Optional[float] = None, keep_outcomes: bool = False) -> HorizonResult:
    """Schedule a request stream interval by interval.

    ``horizon`` defaults to the end of the interval holding the last request.
    Tasks still queued when the horizon closes count as deleted.
    """
    from .scenario import next_revisit  # scenario imports scheduler-free modules only

    stream = sorted(scenario, key=lambda t: (t.t_e, t.id))
    if horizon is None:
        last = stream[-1].t_e if stream else 0.0
        horizon = (math.floor(last / cfg.si) + 1) * cfg.si
    adaptive = cfg.revisit == "adaptive"

    # future requests as a heap; adaptive re-timing replaces the queued successor
    heap = [(t.t_e, t.id) for t in stream]
    heapq.heapify(heap)
    live: Dict[int, RadarTask] = {t.id: t for t in stream}
    successor: Dict[int, int] = {}
    if adaptive:
        last_by_target: Dict[int, int] = {}
        for t in stream:
            if t.target_id is not None and t.mode.is_tracking:
                if t.target_id in last_by_target:
                    successor[last_by_target[t.target_id]] = t.id
                last_by_target[t.target_id] = t.id

    timeline: List[Placement] = []
    deleted: List[RadarTask] = []
    requests: List[RadarTask] = []
    outcomes: List[ScheduleOutcome] = []
    delayed: List[RadarTask] = []
    requested: Dict[int, RadarTask] = {}
    state = TransmitterState()
    n_intervals = max(1, math.ceil(horizon / cfg.si - 1e-9))
    for k in range(n_intervals):
        t0 = k * cfg.si
        t_end = min((k + 1) * cfg.si, horizon)
        fresh = []
        while heap and heap[0][0] < t_end:
            t_e, tid = heapq.heappop(heap)
            task = live.pop(tid, None)
            if task is None or task.t_e != t_e:
                if task is not None:
                    live[tid] = task
                continue
            requested[tid] = task
            fresh.append(task)
        requests.extend(fresh)
        outcome, state = schedule_interval(delayed + fresh, (t0, t_end), cfg, policy, state)
        timeline.extend(outcome.executed)
        deleted.extend(outcome.deleted)
        delayed = outcome.delayed
        if keep_outcomes:
            outcomes.append(outcome)
        if adaptive:
            for placement in outcome.executed:
                nxt_id = successor.get(placement.task_id)
                if nxt_id is None or nxt_id not in live:
                    continue
                prev = requested[placement.task_id]
                retimed = next_revisit(prev, placement.t_s, new_id=nxt_id)
                if retimed.t_e >= horizon:
                    # chain leaves the horizon: drop every queued revisit after it
                    while nxt_id is not None and nxt_id in live:
                        del live[nxt_id]
                        nxt_id = successor.get(nxt_id)
                    continue
                live[nxt_id] = retimed
                heapq.heappush(heap, (retimed.t_e, retimed.id))
    deleted.extend(delayed)
    return HorizonResult(timeline, requests, deleted, (0.0, float(horizon)), outcomes)
