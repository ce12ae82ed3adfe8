import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mfsc.machine import (Cursor, MachineValidationError, head_speed, head_speeds, positions,
                          run_compressor, run_gambler_trace, speed_profile, state_label, t_orbit,
                          trailing_observations, validate_machine)
from mfsc.randgen import random_gambler, random_il_compressor, random_string
from mfsc.zoo import ZOO, c_half, identity_compressor, parity_gambler, uniform_gambler

from oracles import naive_martingale, naive_output, naive_positions
from mfsc.gale import martingale_value


def test_zoo_machines_validate():
    for name, make in ZOO.items():
        m = make()
        assert validate_machine(m) == m, name


def test_c_half_positions_follow_recurrence():
    m = c_half()
    assert [p[0] for p in positions(m, 6)] == [0, 1, 1, 2, 2, 3, 3]
    assert positions(m, 5)[-1] == (3,)


def test_c_half_speed_and_orbit():
    m = c_half()
    states, start = t_orbit(m)
    assert states == ["t0", "t1"] and start == 0
    assert head_speed(m, 1) == Fraction(1, 2)
    assert head_speeds(identity_compressor()) == ()


def test_c_half_output_and_final_state():
    bits, state, trace = run_compressor(c_half(), "1111")
    assert bits == "111111"
    assert state == ("t0", "q0")
    assert trace.positions[-1] == (2,)


def test_parity_gambler_bets():
    bets, _, _ = run_gambler_trace(parity_gambler(), "11")
    assert bets == [Fraction(1, 3), Fraction(2, 3)]


def test_validation_collects_every_error():
    m = c_half()
    broken = replace(m, delta_t={"t0": "zz"}, nu={}, initial=("nope", "q0"))
    with pytest.raises(MachineValidationError) as info:
        validate_machine(broken)
    text = " ".join(info.value.errors)
    assert "missing entry for T-state 't1'" in text
    assert "is not a T-state" in text
    assert "nu: missing entry" in text
    assert "initial T-state" in text


def test_validation_rejects_bad_bets():
    g = uniform_gambler()
    with pytest.raises(MachineValidationError, match="sums to"):
        validate_machine(replace(g, beta={"q0": {"0": Fraction(1, 2), "1": Fraction(1, 3)}}))
    with pytest.raises(MachineValidationError, match="capital"):
        validate_machine(replace(g, capital=Fraction(0)))


def test_state_label_is_whitespace_free():
    from mfsc.construct import GState
    label = state_label(GState("q0", (("0",), ("1",)), 1, ("0",)))
    assert " " not in label
    assert label == "(base_q=q0;record=((0),(1));phase=1;prefix=(0))"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_positions_agree_with_naive_recurrence(seed):
    rng = random.Random(seed)
    g = random_gambler(rng, sigma=2)
    got = positions(g, 40)
    for n in range(41):
        assert got[n] == naive_positions(g, n)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_speed_bound_holds_exactly(seed):
    rng = random.Random(seed)
    g = random_gambler(rng, sigma=2, max_heads=3, max_t=5)
    prof = speed_profile(g)
    for n, p in enumerate(positions(g, 500)):
        assert prof.holds(p, n)
        for i, a in enumerate(prof.alphas):
            assert abs(p[i] - a * n) <= prof.slack


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 12))
def test_simulation_matches_naive(seed, n):
    rng = random.Random(seed)
    g = random_gambler(rng, sigma=rng.choice((2, 3)))
    c = random_il_compressor(rng, sigma=len(g.alphabet))
    w = random_string(rng, g.alphabet, n)
    assert martingale_value(g, w) == naive_martingale(g, w)
    assert run_compressor(c, w, trace=False)[0] == naive_output(c, w)


def test_cursor_observation_uses_current_symbol_for_caught_up_heads():
    g = parity_gambler()
    cur = Cursor(g)
    assert cur.observe("1") == ("1", "1")


def test_trailing_observations_reads_only_trailing_heads():
    m = c_half()
    obs = trailing_observations(m, "0110", 4)
    assert obs == [("0",), ("1",), ("1",), ("1",)]
