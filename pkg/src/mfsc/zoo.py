"""Small hand-built machines used in examples, tests and the CLI (``zoo:<name>``)."""

from __future__ import annotations

from fractions import Fraction

from .machine import COMPRESSOR, GAMBLER, MachineSpec, observation_vectors, validate_machine

BINARY = ("0", "1")


def _single_t(h: int, move: tuple | None = None):
    move = move if move is not None else (0,) * (h - 1)
    return ("t0",), {"t0": "t0"}, {"t0": move}


def identity_compressor(alphabet=BINARY) -> MachineSpec:
    """One head, one state, emits the fixed-width binary index of each symbol."""
    width = max(1, (len(alphabet) - 1).bit_length())
    ts, dt, mu = _single_t(1)
    return validate_machine(MachineSpec(
        kind=COMPRESSOR, h=1, alphabet=alphabet, t_states=ts, q_states=("q0",),
        delta_t=dt, delta_q={("q0", (a,)): "q0" for a in alphabet}, mu=mu,
        nu={("q0", a): format(i, f"0{width}b") for i, a in enumerate(alphabet)},
        initial=("t0", "q0"), name="identity"))


def silent_compressor(alphabet=BINARY) -> MachineSpec:
    """Single-state compressor that never emits anything (not lossless)."""
    ts, dt, mu = _single_t(1)
    return validate_machine(MachineSpec(
        kind=COMPRESSOR, h=1, alphabet=alphabet, t_states=ts, q_states=("q0",),
        delta_t=dt, delta_q={("q0", (a,)): "q0" for a in alphabet}, mu=mu,
        nu={("q0", a): "" for a in alphabet}, initial=("t0", "q0"), name="silent"))


def c_half() -> MachineSpec:
    """Two heads; the trailing head moves every other step (speed 1/2).

    The Q-state toggles whenever the trailing head reads a 1; the output is
    the leading symbol prefixed by the current Q-state bit.
    """
    delta_q = {}
    for q in ("q0", "q1"):
        for b, a in observation_vectors(BINARY, 2):
            flip = b == "1"
            delta_q[(q, (b, a))] = ({"q0": "q1", "q1": "q0"}[q] if flip else q)
    return validate_machine(MachineSpec(
        kind=COMPRESSOR, h=2, alphabet=BINARY, t_states=("t0", "t1"), q_states=("q0", "q1"),
        delta_t={"t0": "t1", "t1": "t0"}, delta_q=delta_q, mu={"t0": (1,), "t1": (0,)},
        nu={("q0", "0"): "0", ("q0", "1"): "1", ("q1", "0"): "10", ("q1", "1"): "11"},
        initial=("t0", "q0"), name="c_half"))


def uniform_gambler(alphabet=BINARY, h: int = 1, capital=1) -> MachineSpec:
    ts, dt, mu = _single_t(h)
    p = Fraction(1, len(alphabet))
    return validate_machine(MachineSpec(
        kind=GAMBLER, h=h, alphabet=alphabet, t_states=ts, q_states=("q0",),
        delta_t=dt, delta_q={("q0", obs): "q0" for obs in observation_vectors(alphabet, h)},
        mu=mu, beta={"q0": {a: p for a in alphabet}}, initial=("t0", "q0"),
        capital=Fraction(capital), name="uniform"))


def alternation_gambler(p=Fraction(3, 4)) -> MachineSpec:
    """Binary gambler expecting 0101...: bets ``p`` on the symbol that continues it."""
    p = Fraction(p)
    return validate_machine(MachineSpec(
        kind=GAMBLER, h=1, alphabet=BINARY, t_states=("t0",), q_states=("e0", "e1"),
        delta_t={"t0": "t0"}, mu={"t0": ()},
        delta_q={(q, (a,)): ("e1" if a == "0" else "e0") for q in ("e0", "e1") for a in BINARY},
        beta={"e0": {"0": p, "1": 1 - p}, "e1": {"0": 1 - p, "1": p}},
        initial=("t0", "e0"), name="alternation"))


def vanishing_gambler() -> MachineSpec:
    """Bets everything on 0, forever."""
    return validate_machine(MachineSpec(
        kind=GAMBLER, h=1, alphabet=BINARY, t_states=("t0",), q_states=("q0",),
        delta_t={"t0": "t0"}, mu={"t0": ()},
        delta_q={("q0", (a,)): "q0" for a in BINARY},
        beta={"q0": {"0": Fraction(1), "1": Fraction(0)}},
        initial=("t0", "q0"), name="vanishing"))


def parity_gambler() -> MachineSpec:
    """Two heads, stationary trailing head on S[0].

    The Q-state remembers the parity of 1s seen by the trailing head; with odd
    parity it bets 2/3 on 1, otherwise 1/3.
    """
    delta_q = {}
    for q in ("even", "odd"):
        for b, a in observation_vectors(BINARY, 2):
            delta_q[(q, (b, a))] = ({"even": "odd", "odd": "even"}[q] if b == "1" else q)
    return validate_machine(MachineSpec(
        kind=GAMBLER, h=2, alphabet=BINARY, t_states=("t0",), q_states=("even", "odd"),
        delta_t={"t0": "t0"}, mu={"t0": (0,)}, delta_q=delta_q,
        beta={"even": {"0": Fraction(2, 3), "1": Fraction(1, 3)},
              "odd": {"0": Fraction(1, 3), "1": Fraction(2, 3)}},
        initial=("t0", "even"), name="parity"))


ZOO = {
    "identity": identity_compressor,
    "silent": silent_compressor,
    "c_half": c_half,
    "uniform": uniform_gambler,
    "alternation": alternation_gambler,
    "vanishing": vanishing_gambler,
    "parity": parity_gambler,
}
