"""Independent reference computations used by the test-suite.

Nothing here calls the code paths it is used to check: the grid search knows
nothing about external/internal inequalities, the timeline checker replays
energy from raw placements, and the root finder only uses the forward update.
"""

from __future__ import annotations

import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from parsched.energy import EnergyConfig, TransmitterState, pulse_update

TOL = 1e-9


def bisect_cooling(state: TransmitterState, t_x: float, a: float, cfg: EnergyConfig,
                   tol: float = 1e-12) -> float:
    """Smallest idle t with pulse_update(state, t).p_out <= p_max, by bisection."""
    def excess(t):
        return pulse_update(state, t, t_x, a, cfg).p_out - cfg.p_max

    if excess(0.0) <= 0:
        return 0.0
    lo, hi = 0.0, 1.0
    while excess(hi) > 0:
        hi *= 2
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi


def analytic_smoothed_power(pulses: Iterable[Tuple[float, float, float]], t: float, tau: float) -> float:
    """Closed-form kernel integral for rectangular pulses, evaluated at ``t``."""
    total = 0.0
    for start, t_x, a in pulses:
        end = min(start + t_x, t)
        if end <= start:
            continue
        total += a * (math.exp((end - t) / tau) - math.exp((start - t) / tau))
    return total


def _disjoint(a, b) -> bool:
    return a[1] <= b[0] + TOL or b[1] <= a[0] + TOL


def interleave_ok(s: float, host_tx: Tuple[float, float], host_rx: Tuple[float, float],
                  budget_start: float, guest, tx_state: TransmitterState, cfg: EnergyConfig,
                  extra_busy: Sequence[Tuple[float, float]] = (),
                  window: Optional[Tuple[float, float]] = None) -> bool:
    """Whether a guest starting at ``s`` transmits inside the open wait of the
    host, collides with no transmit/receive interval and stays under the ceiling.
    """
    t_x, t_w, t_r = guest.template.t_x, guest.template.t_w, guest.template.t_r
    if s < budget_start - TOL or s + t_x > host_rx[0] + TOL:
        return False
    if window is not None and not (window[0] - TOL <= s <= window[1] + TOL):
        return False
    tx = (s, s + t_x)
    rx = (s + t_x + t_w, s + t_x + t_w + t_r)
    if not all(_disjoint(tx, b) and _disjoint(rx, b) for b in (host_tx, host_rx, *extra_busy)):
        return False
    idle = s - tx_state.t_last_tx_end
    if idle < -TOL:
        return False
    p = (tx_state.p_out * math.exp(-(max(idle, 0.0) + t_x) / cfg.tau)
         + guest.template.amplitude * (1 - math.exp(-t_x / cfg.tau)))
    return p <= cfg.p_max + TOL


def grid_interleave(host_tx, host_rx, budget_start, guest, tx_state, cfg, extra_busy=(),
                    step: float = 0.01, window=None) -> Optional[float]:
    """First start on a ``step`` grid anchored at ``budget_start`` accepted by
    :func:`interleave_ok`, or None.
    """
    k = 0
    while True:
        s = budget_start + k * step
        k += 1
        if s + guest.template.t_x > host_rx[0] + TOL:
            return None
        if interleave_ok(s, host_tx, host_rx, budget_start, guest, tx_state, cfg, extra_busy, window):
            return s


def timeline_violations(timeline, tasks_by_id: Dict[int, object], cfg: EnergyConfig,
                        release_at_request: bool = False) -> Dict[str, List]:
    """Collect overlap, energy and window violations of a committed timeline."""
    out: Dict[str, List] = {"overlap": [], "energy": [], "window": []}
    spans = []
    for p in timeline:
        tx = (p.t_s, p.t_s + p.t_x)
        rx = (p.t_s + p.t_x + p.t_w, p.t_s + p.t_x + p.t_w + p.t_r)
        spans.append((tx[0], tx[1], p.task_id))
        spans.append((rx[0], rx[1], p.task_id))
        task = tasks_by_id[p.task_id]
        lo = task.t_e - task.template.l
        if release_at_request:
            lo = max(lo, task.t_e)
        if p.t_s < lo - TOL or rx[1] > task.t_e + task.template.l + TOL:
            out["window"].append(p)
    spans.sort()
    for a, b in zip(spans, spans[1:]):
        if b[0] < a[1] - TOL:
            out["overlap"].append((a, b))

    level, last_end = 0.0, None
    for p in sorted(timeline, key=lambda p: p.t_s):
        amp = tasks_by_id[p.task_id].template.amplitude
        if last_end is not None:
            level *= math.exp(-(p.t_s - last_end) / cfg.tau)
        level = level * math.exp(-p.t_x / cfg.tau) + amp * (1 - math.exp(-p.t_x / cfg.tau))
        last_end = p.t_s + p.t_x
        if level > cfg.p_max + 1e-9:
            out["energy"].append((p, level))
    return out
