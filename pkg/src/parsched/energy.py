"""Transmitter heating as an exponentially smoothed drive level.

The smoothed power obeys a first-order low-pass with time constant ``tau``.
Only transmit intervals drive it; receive and idle time let it decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np


class InfeasiblePulse(ValueError):
    """A pulse that exceeds the power ceiling even from a cold transmitter."""


@dataclass(frozen=True)
class EnergyConfig:
    tau: float = 5.0
    p_max: float = 1.0

    def __post_init__(self):
        if self.tau <= 0 or self.p_max <= 0:
            raise ValueError("tau and p_max must be positive")


@dataclass(frozen=True)
class TransmitterState:
    p_out: float = 0.0
    t_last_tx_end: float = 0.0


def decay(p: float, dt: float, cfg: EnergyConfig) -> float:
    if dt < 0:
        raise ValueError(f"negative decay duration {dt}")
    return p * math.exp(-dt / cfg.tau)


def pulse_gain(t_x: float, a: float, cfg: EnergyConfig) -> float:
    """Smoothed level reached by a single pulse starting cold."""
    return a * -math.expm1(-t_x / cfg.tau)


def pulse_update(state: TransmitterState, idle: float, t_x: float, a: float,
                 cfg: EnergyConfig) -> TransmitterState:
    """State after idling for ``idle`` ms then transmitting for ``t_x`` ms."""
    if idle < 0:
        raise ValueError(f"negative idle time {idle}")
    p = state.p_out * math.exp(-(idle + t_x) / cfg.tau) + pulse_gain(t_x, a, cfg)
    return TransmitterState(p_out=p, t_last_tx_end=state.t_last_tx_end + idle + t_x)


def min_cooling_time(state: TransmitterState, t_x: float, a: float,
                     cfg: EnergyConfig) -> float:
    """Smallest idle after the last transmit that keeps the next pulse under
    ``p_max``. Raises InfeasiblePulse if the pulse alone reaches the ceiling.
    """
    gain = pulse_gain(t_x, a, cfg)
    headroom = cfg.p_max - gain
    if headroom <= 0:
        raise InfeasiblePulse(f"pulse gain {gain:.6g} >= p_max {cfg.p_max}")
    residual = state.p_out * math.exp(-t_x / cfg.tau)
    if residual <= headroom:
        return 0.0
    return -cfg.tau * math.log(headroom / residual)


def earliest_transmit(state: TransmitterState, t_x: float, a: float,
                      cfg: EnergyConfig) -> float:
    return state.t_last_tx_end + min_cooling_time(state, t_x, a, cfg)


def commit_pulse(state: TransmitterState, t_s: float, t_x: float, a: float,
                 cfg: EnergyConfig) -> TransmitterState:
    """Advance the state by a pulse transmitted at absolute time ``t_s``.

    Decay runs over the actual idle gap, never the nominal cooling time.
    """
    return pulse_update(state, max(0.0, t_s - state.t_last_tx_end), t_x, a, cfg)


def smoothed_power_oracle(pulse_train: Iterable[Tuple[float, float, float]], t: float,
                          cfg: EnergyConfig, step: float = 1e-4) -> float:
    """Numerically integrate the smoothing kernel for a piecewise-constant drive.

    Each pulse is ``(start, t_x, a)``. Intended for tests only: trapezoid rule on
    each pulse segment up to ``t``, with ``step`` as the maximum sub-step.
    """
    total = 0.0
    for start, t_x, a in pulse_train:
        lo, hi = start, min(start + t_x, t)
        if hi <= lo:
            continue
        n = max(2, int(math.ceil((hi - lo) / step)) + 1)
        x = np.linspace(lo, hi, n)
        total += float(np.trapezoid(a * np.exp((x - t) / cfg.tau), x))
    return total / cfg.tau
