import math

import pytest
from hypothesis import given, strategies as st

from oracles import analytic_smoothed_power, bisect_cooling
from parsched.energy import (EnergyConfig, InfeasiblePulse, TransmitterState, commit_pulse, decay,
                             earliest_transmit, min_cooling_time, pulse_gain, pulse_update,
                             smoothed_power_oracle)

CFG = EnergyConfig(tau=5.0, p_max=1.0)
# Frozen from the bisection oracle; see test_cooling_matches_bisection.
COOLING_08_A4 = 0.7797085801154444


def test_decay_identity_and_zero():
    assert decay(1.0, 0.0, CFG) == 1.0
    assert decay(0.0, 123.0, CFG) == 0.0
    with pytest.raises(ValueError):
        decay(1.0, -0.1, CFG)


def test_decay_matches_integral():
    t_x = 0.5
    amp = 0.8 / pulse_gain(t_x, 1.0, CFG)
    train = [(0.0, t_x, amp)]
    assert smoothed_power_oracle(train, t_x, CFG) == pytest.approx(0.8, rel=1e-8)
    assert decay(0.8, 5.0, CFG) == pytest.approx(0.29430, abs=1e-5)
    assert smoothed_power_oracle(train, t_x + 5.0, CFG) == pytest.approx(decay(0.8, 5.0, CFG), rel=1e-8)


def test_single_pulse_gain():
    s = pulse_update(TransmitterState(), 0.0, 0.5, 4.0, CFG)
    assert s.p_out == pytest.approx(4 * (1 - math.exp(-0.1)), rel=1e-12)
    assert s.p_out == pytest.approx(0.38065, abs=1e-5)
    assert smoothed_power_oracle([(0.0, 0.5, 4.0)], 0.5, CFG) == pytest.approx(s.p_out, rel=1e-8)
    assert s.t_last_tx_end == 0.5


def test_oracle_empty_train():
    assert smoothed_power_oracle([], 10.0, CFG) == 0.0


def test_zero_amplitude_keeps_level_in_short_limit():
    s = pulse_update(TransmitterState(0.7, 3.0), 0.0, 1e-12, 0.0, CFG)
    assert s.p_out == pytest.approx(0.7, rel=1e-9)


def test_cooling_cold_is_zero():
    assert min_cooling_time(TransmitterState(), 0.5, 4.0, CFG) == 0.0


def test_cooling_matches_bisection():
    state = TransmitterState(0.8, 0.0)
    got = min_cooling_time(state, 0.5, 4.0, CFG)
    assert abs(got - bisect_cooling(state, 0.5, 4.0, CFG)) < 1e-9
    assert got == pytest.approx(COOLING_08_A4, abs=1e-9)
    assert pulse_update(state, got, 0.5, 4.0, CFG).p_out == pytest.approx(1.0, abs=1e-12)


def test_infeasible_pulse_at_boundary():
    a = 1.0 / -math.expm1(-0.1)
    with pytest.raises(InfeasiblePulse):
        min_cooling_time(TransmitterState(), 0.5, a, CFG)


def test_commit_decays_over_actual_gap():
    s = TransmitterState(0.5, 10.0)
    got = commit_pulse(s, 13.0, 0.5, 2.0, CFG)
    assert got.t_last_tx_end == 13.5
    assert got.p_out == pytest.approx(0.5 * math.exp(-3.5 / 5) + 2 * (1 - math.exp(-0.1)))


def test_earliest_transmit():
    s = TransmitterState(0.8, 4.0)
    assert earliest_transmit(s, 0.5, 4.0, CFG) == pytest.approx(4.0 + COOLING_08_A4)


amps = st.floats(0.1, 9.0)
durations = st.floats(0.05, 3.0)


@given(p=st.floats(0, 1), idle=st.floats(0, 20), t_x=durations, a=amps, extra=st.floats(0, 20))
def test_decay_semigroup(p, idle, t_x, a, extra):
    s = pulse_update(TransmitterState(p, 0.0), idle, t_x, a, CFG)
    later = decay(s.p_out, extra, CFG)
    # idle then pulse then decay == pulse computed from a state already decayed by the whole idle
    direct = decay(decay(p, idle + t_x, CFG), extra, CFG) + decay(pulse_gain(t_x, a, CFG), extra, CFG)
    assert later == pytest.approx(direct, rel=1e-12, abs=1e-15)
    assert decay(decay(p, idle, CFG), extra, CFG) == pytest.approx(decay(p, idle + extra, CFG),
                                                                  rel=1e-12, abs=1e-300)


@given(p=st.floats(0, 1), t_x=durations, a=amps)
def test_cooling_keeps_under_ceiling(p, t_x, a):
    state = TransmitterState(p, 0.0)
    try:
        t_c = min_cooling_time(state, t_x, a, CFG)
    except InfeasiblePulse:
        assert pulse_gain(t_x, a, CFG) >= CFG.p_max
        return
    assert t_c >= 0
    assert pulse_update(state, t_c, t_x, a, CFG).p_out <= CFG.p_max + 1e-9
    if t_c > 1e-6:
        assert pulse_update(state, t_c * 0.999 - 1e-6, t_x, a, CFG).p_out > CFG.p_max - 1e-9


@given(st.lists(st.tuples(st.floats(0, 5), st.floats(0.05, 2.0), st.floats(0, 6)),
                min_size=1, max_size=20),
       st.floats(1.0, 10.0))
def test_recurrence_matches_integral(pulses, tau):
    cfg = EnergyConfig(tau=tau, p_max=1.0)
    state = TransmitterState()
    train = []
    t = 0.0
    for gap, t_x, a in pulses:
        start = t + gap
        train.append((start, t_x, a))
        state = commit_pulse(state, start, t_x, a, cfg)
        t = start + t_x
    exact = analytic_smoothed_power(train, t, tau)
    assert state.p_out == pytest.approx(exact, rel=1e-9, abs=1e-12)
    if len(train) <= 5:
        assert state.p_out == pytest.approx(smoothed_power_oracle(train, t, cfg), rel=1e-6, abs=1e-12)


@given(p1=st.floats(0, 1), p2=st.floats(0, 1), a1=st.floats(0.1, 5), a2=st.floats(0.1, 5),
       t_x=durations)
def test_cooling_monotone(p1, p2, a1, a2, t_x):
    (p1, p2), (a1, a2) = sorted((p1, p2)), sorted((a1, a2))
    if pulse_gain(t_x, a2, CFG) >= CFG.p_max:
        return
    f = lambda p, a: min_cooling_time(TransmitterState(p, 0.0), t_x, a, CFG)
    assert f(p1, a1) <= f(p2, a1) + 1e-12
    assert f(p1, a1) <= f(p1, a2) + 1e-12
