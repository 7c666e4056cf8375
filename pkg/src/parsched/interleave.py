"""Pulse interleaving inside the wait interval of an open tracking dwell.

Two placements are possible for a guest dwell:

* external (mode a): the guest transmits inside the host's wait and receives
  after the host has finished receiving;
* internal (mode b): the whole guest dwell nests inside the host's wait.

Only one nest is open at a time: the wait of the most recent tracking dwell,
trimmed to the idle time after the latest transmit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

from .energy import EnergyConfig, InfeasiblePulse, TransmitterState, min_cooling_time
from .model import (EPS, Interval, Placement, PlacementMode, RadarTask, eligibility_window,
                    overlaps)


@dataclass(frozen=True)
class InterleaveContext:
    host: Optional[Placement] = None
    o1: float = 0.0
    o1_start: float = 0.0
    o2_start: float = 0.0
    # transmit/receive intervals of the host chain still reachable by a guest
    committed: Tuple[Interval, ...] = ()

    @property
    def is_open(self) -> bool:
        return self.host is not None and self.o1 > EPS

    @property
    def o1_end(self) -> float:
        return self.o1_start + self.o1

    def advance_to(self, tp: float) -> "InterleaveContext":
        """Shrink the open budget so it never starts before the time pointer."""
        if not self.is_open or tp <= self.o1_start:
            return self
        end = self.o1_end
        if tp >= end - EPS:
            return replace(self, o1=0.0, o1_start=end)
        return replace(self, o1=end - tp, o1_start=tp)

    def closed(self) -> "InterleaveContext":
        return replace(self, host=None, o1=0.0, committed=())


def _fits_window(guest: RadarTask, t_s: float) -> bool:
    win = eligibility_window(guest)
    return win is not None and win[0] - EPS <= t_s <= win[1] + EPS


def earliest_fit(t_s: float, guest: RadarTask, busy: Sequence[Interval]) -> float:
    """Earliest start >= ``t_s`` whose transmit and receive clear ``busy``."""
    tpl = guest.template
    rx_offset = tpl.t_x + tpl.t_w
    moved = True
    while moved:
        moved = False
        tx = (t_s, t_s + tpl.t_x)
        rx = (t_s + rx_offset, t_s + rx_offset + tpl.t_r)
        for iv in busy:
            if overlaps(tx, iv):
                t_s = iv[1]
                moved = True
            elif overlaps(rx, iv):
                t_s = iv[1] - rx_offset
                moved = True
            if moved:
                break
    return t_s


def _cooled_start(ctx: InterleaveContext, guest: RadarTask, tx_state: TransmitterState,
                  cfg: EnergyConfig) -> Optional[float]:
    tpl = guest.template
    try:
        t_c = min_cooling_time(tx_state, tpl.t_x, tpl.amplitude, cfg)
    except InfeasiblePulse:
        return None
    return max(ctx.o1_start, tx_state.t_last_tx_end + t_c)


def feasible_external(ctx: InterleaveContext, guest: RadarTask, tx_state: TransmitterState,
                      cfg: EnergyConfig) -> Optional[Placement]:
    if not ctx.is_open:
        return None
    host = ctx.host
    tpl = guest.template
    if host.t_r > tpl.t_w + EPS:
        return None
    t_s = _cooled_start(ctx, guest, tx_state, cfg)
    if t_s is None:
        return None
    # guest receive may not start before the host receive has ended
    t_s = max(t_s, host.receive[1] - tpl.t_x - tpl.t_w)
    t_s = earliest_fit(t_s, guest, ctx.committed)
    if t_s + tpl.t_x > ctx.o1_end + EPS:
        return None
    if not _fits_window(guest, t_s):
        return None
    return Placement.at(guest, t_s, host.task_id, PlacementMode.ExternalA)


def feasible_internal(ctx: InterleaveContext, guest: RadarTask, tx_state: TransmitterState,
                      cfg: EnergyConfig) -> Optional[Placement]:
    if not ctx.is_open:
        return None
    tpl = guest.template
    t_s = _cooled_start(ctx, guest, tx_state, cfg)
    if t_s is None:
        return None
    t_s = earliest_fit(t_s, guest, ctx.committed)
    if t_s + tpl.dwell > ctx.o1_end + EPS:
        return None
    if not _fits_window(guest, t_s):
        return None
    return Placement.at(guest, t_s, ctx.host.task_id, PlacementMode.InternalB)


def receive_gap(ctx: InterleaveContext, placement: Placement) -> float:
    host_rx = ctx.host.receive
    guest_rx = placement.receive
    if placement.mode_used is PlacementMode.ExternalA:
        return guest_rx[0] - host_rx[1]
    return host_rx[0] - guest_rx[1]


def best_placement(ctx: InterleaveContext, guest: RadarTask, tx_state: TransmitterState,
                   cfg: EnergyConfig) -> Optional[Tuple[Placement, PlacementMode]]:
    """Feasible placement whose receive sits closest to the host's receive.

    Ties favour the external mode.
    """
    ext = feasible_external(ctx, guest, tx_state, cfg)
    inn = feasible_internal(ctx, guest, tx_state, cfg)
    if ext is None and inn is None:
        return None
    if inn is None or (ext is not None and receive_gap(ctx, ext) <= receive_gap(ctx, inn) + EPS):
        return ext, PlacementMode.ExternalA
    return inn, PlacementMode.InternalB


def open_standalone(ctx: InterleaveContext, placement: Placement,
                    task: RadarTask) -> InterleaveContext:
    """Context after committing a dwell on free timeline."""
    tx_end = placement.transmit[1]
    busy = (placement.transmit, placement.receive)
    o2 = max(ctx.o2_start, placement.end)
    if task.mode.is_tracking and placement.t_w > EPS:
        return InterleaveContext(placement, placement.t_w, tx_end, o2, busy)
    return InterleaveContext(None, 0.0, tx_end, o2, ())


def update_context(ctx: InterleaveContext, placement: Placement,
                   guest: RadarTask) -> InterleaveContext:
    tx_end = placement.transmit[1]
    committed = ctx.committed + (placement.transmit, placement.receive)
    o2 = max(ctx.o2_start, placement.end)
    if placement.mode_used is PlacementMode.ExternalA:
        o1 = ctx.o1_end - tx_end
        if o1 <= EPS:
            return InterleaveContext(None, 0.0, tx_end, o2, ())
        return InterleaveContext(ctx.host, o1, tx_end, o2, committed)
    if placement.mode_used is PlacementMode.InternalB:
        if guest.mode.is_tracking and placement.t_w > EPS:
            return InterleaveContext(placement, placement.t_w, tx_end, o2, committed)
        return InterleaveContext(None, 0.0, tx_end, o2, ())
    return open_standalone(ctx, placement, guest)
