"""Random machine families for property tests and the verification suites."""

from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction

from .construct import fold_full_speed_heads
from .machine import COMPRESSOR, GAMBLER, MachineSpec, observation_vectors, validate_machine
from .seqgen import DIGITS


def random_movement(rng: random.Random, h: int, n_t: int) -> tuple[tuple, dict, dict]:
    ts = tuple(f"t{i}" for i in range(n_t))
    delta_t = {t: rng.choice(ts) for t in ts}
    mu = {t: tuple(rng.randint(0, 1) for _ in range(h - 1)) for t in ts}
    return ts, delta_t, mu


def random_distribution(rng: random.Random, alphabet, positive: bool = False,
                        max_weight: int = 4) -> dict:
    low = 1 if positive else 0
    while True:
        weights = [rng.randint(low, max_weight) for _ in alphabet]
        if sum(weights):
            break
    total = sum(weights)
    return {a: Fraction(w, total) for a, w in zip(alphabet, weights)}


def random_prefix_code(rng: random.Random, size: int, max_len: int = 3) -> list[str]:
    """``size`` distinct codewords, no one a prefix of another."""
    leaves = [""]
    while len(leaves) < size:
        splittable = [w for w in leaves if len(w) < max_len]
        w = rng.choice(splittable)
        leaves.remove(w)
        leaves += [w + "0", w + "1"]
    return rng.sample(leaves, size)


def _machine(rng, kind, alphabet, h, n_t, n_q):
    ts, delta_t, mu = random_movement(rng, h, n_t)
    qs = tuple(f"q{i}" for i in range(n_q))
    delta_q = {(q, obs): rng.choice(qs) for q in qs for obs in observation_vectors(alphabet, h)}
    return MachineSpec(kind=kind, h=h, alphabet=tuple(alphabet), t_states=ts, q_states=qs,
                       delta_t=delta_t, delta_q=delta_q, mu=mu,
                       initial=(rng.choice(ts), rng.choice(qs)))


def random_gambler(rng: random.Random, sigma: int = 2, max_heads: int = 3, max_t: int = 3,
                   max_q: int = 3, non_vanishing: bool = False, capital=None) -> MachineSpec:
    alphabet = DIGITS[:sigma]
    spec = _machine(rng, GAMBLER, alphabet, rng.randint(1, max_heads),
                    rng.randint(1, max_t), rng.randint(1, max_q))
    beta = {q: random_distribution(rng, alphabet, positive=non_vanishing) for q in spec.q_states}
    c0 = Fraction(capital) if capital is not None else Fraction(rng.randint(1, 4), rng.randint(1, 4))
    return validate_machine(replace(spec, beta=beta, capital=c0, name="random-gambler"))


def random_il_compressor(rng: random.Random, sigma: int = 2, max_heads: int = 3, max_t: int = 3,
                         max_q: int = 3, max_len: int = 3) -> MachineSpec:
    """Compressor whose every Q-state emits a prefix-free code for the next symbol.

    The input is recovered symbol by symbol: the decoder always knows the
    current Q-state because it depends only on symbols already decoded.
    """
    alphabet = DIGITS[:sigma]
    spec = _machine(rng, COMPRESSOR, alphabet, rng.randint(1, max_heads),
                    rng.randint(1, max_t), rng.randint(1, max_q))
    nu = {}
    for q in spec.q_states:
        for a, word in zip(alphabet, random_prefix_code(rng, sigma, max_len)):
            nu[(q, a)] = word
    return validate_machine(replace(spec, nu=nu, name="random-il"))


def folded(spec: MachineSpec) -> MachineSpec:
    return fold_full_speed_heads(spec)


def random_string(rng: random.Random, alphabet, n: int) -> str:
    return "".join(rng.choice(alphabet) for _ in range(n))
