"""Exact martingales and s-gales of finite-state gamblers.

s-gale values carry the factor ``|Sigma|^((s-1)|w|)`` symbolically, since it
is irrational for most ``s``.  Every comparison is decided exactly by raising
both sides to a common integer power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import mpmath

from .machine import Cursor

LOG_PRECISION = 256


def martingale_values(gambler, w: Iterable) -> Iterator[Fraction]:
    """Yield ``d_G(w[:n])`` for ``n = 0, 1, ..., |w|``."""
    sigma = len(gambler.alphabet)
    d = Fraction(gambler.capital)
    yield d
    cur = Cursor(gambler)
    for a in w:
        q = cur.feed(a)
        d = sigma * d * gambler.bet(q)[a]
        yield d


def martingale_value(gambler, w: Iterable) -> Fraction:
    d = None
    for d in martingale_values(gambler, w):
        pass
    return d


def exact_compare(factors: Sequence[tuple]) -> int:
    """Sign of ``prod(base ** exponent) - 1`` for rational bases and exponents.

    Bases must be nonnegative; a zero base with a positive exponent makes the
    product zero.  Returns -1, 0 or 1.
    """
    factors = [(Fraction(b), Fraction(e)) for b, e in factors]
    for b, e in factors:
        if b < 0:
            raise ValueError("bases must be nonnegative")
        if b == 0:
            if e <= 0:
                raise ValueError("zero base needs a positive exponent")
            return -1
    denom = math.lcm(*(e.denominator for _, e in factors)) if factors else 1
    num = den = 1
    for b, e in factors:
        p = int(e * denom)
        if p >= 0:
            num *= b.numerator ** p
            den *= b.denominator ** p
        else:
            num *= b.denominator ** -p
            den *= b.numerator ** -p
    return (num > den) - (num < den)


_SIGNS = {-1: "<", 0: "=", 1: ">"}


@dataclass(frozen=True)
class GaleValue:
    """The number ``mantissa * sigma ** exponent``."""

    mantissa: Fraction
    exponent: Fraction
    sigma: int

    def compare(self, other: Fraction | int = 1) -> str:
        """Exact trichotomy against a positive rational: '<', '=' or '>'."""
        other = Fraction(other)
        if self.mantissa == 0:
            return "<" if other > 0 else "="
        return _SIGNS[exact_compare([(self.mantissa / other, 1), (self.sigma, self.exponent)])]

    def log2(self) -> float:
        """``log2`` of the value, evaluated at 256-bit precision (``-inf`` at 0)."""
        if self.mantissa == 0:
            return float("-inf")
        with mpmath.workprec(LOG_PRECISION):
            m = self.mantissa
            value = (mpmath.log(m.numerator, 2) - mpmath.log(m.denominator, 2)
                     + mpmath.mpf(self.exponent.numerator) / self.exponent.denominator
                     * mpmath.log(self.sigma, 2))
            return float(value)

    def __float__(self) -> float:
        return float(self.mantissa) * float(self.sigma) ** float(self.exponent)


def sgale_value(gambler, s, w: Sequence) -> GaleValue:
    s = Fraction(s)
    if s <= 0:
        raise ValueError("s must be positive")
    return GaleValue(martingale_value(gambler, w), (s - 1) * len(w), len(gambler.alphabet))


def compare_gale_to_one(gambler, s, w: Sequence) -> str:
    """Exact comparison of ``d_G^(s)(w)`` with 1.

    With ``s = c/d`` this is the integer comparison
    ``d_G(w)^d`` vs ``|Sigma|^((d-c)|w|)``.
    """
    return sgale_value(gambler, s, w).compare(1)


@dataclass
class IdentityCheck:
    holds: bool
    nodes: int
    leaves: int
    counterexample: tuple | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_gale_identity(gambler, s=1, depth: int = 5) -> IdentityCheck:
    """Verify ``d(w) = |Sigma|^-1 * sum_a d(wa)`` for every ``|w| < depth``.

    Dividing the s-gale identity by ``|Sigma|^((s-1)|w|)`` reduces it to the
    martingale identity, so ``s`` does not change the verdict; it is kept for
    the record.  The tree is walked depth-first, carrying the simulation
    state, and the first violating node is returned.
    """
    alphabet = tuple(gambler.alphabet)
    sigma = len(alphabet)
    nodes = leaves = 0

    def child(cur_state, a):
        t, q, pos, syms = cur_state
        n = len(syms)
        obs = tuple(a if p == n else syms[p] for p in pos) + (a,)
        return (gambler.next_t(t), gambler.next_q(q, obs),
                tuple(p + m for p, m in zip(pos, gambler.move(t))), syms + (a,))

    stack = [(gambler.initial[0], gambler.initial[1], (0,) * (gambler.h - 1), ()), ]
    values = [Fraction(gambler.capital)]
    while stack:
        node = stack.pop()
        d = values.pop()
        nodes += 1
        t, q, pos, syms = node
        if len(syms) == depth:
            leaves += 1
            continue
        row = gambler.bet(q)
        kids = [(child(node, a), sigma * d * Fraction(row[a])) for a in alphabet]
        total = sum(v for _, v in kids) / sigma
        if total != d:
            return IdentityCheck(False, nodes, leaves, syms, d, total)
        for state, v in reversed(kids):
            stack.append(state)
            values.append(v)
    return IdentityCheck(True, nodes, leaves)


@dataclass
class SuccessProbe:
    s: Fraction
    samples: list = field(default_factory=list)
    exact: list = field(default_factory=list)
    verdict_hint: str = ""


def success_probe(gambler, s, sequence: Sequence, checkpoints: Sequence[int]) -> SuccessProbe:
    """Sample ``log2 d_G^(s)(S[0:n])`` at increasing checkpoints.

    ``verdict_hint`` only describes the sampled trend; no limit is decided.
    """
    s = Fraction(s)
    checkpoints = list(checkpoints)
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    if checkpoints and checkpoints[-1] > len(sequence):
        raise ValueError("sequence prefix shorter than the last checkpoint")
    sigma = len(gambler.alphabet)
    wanted = set(checkpoints)
    probe = SuccessProbe(s)
    for n, d in enumerate(martingale_values(gambler, sequence[:checkpoints[-1]] if checkpoints else ())):
        if n in wanted:
            g = GaleValue(d, (s - 1) * n, sigma)
            probe.exact.append((n, g))
            probe.samples.append((n, g.log2()))
    logs = [v for _, v in probe.samples]
    if len(logs) < 2:
        probe.verdict_hint = "insufficient"
    elif all(b > a for a, b in zip(logs, logs[1:])):
        probe.verdict_hint = "increasing"
    elif all(b < a for a, b in zip(logs, logs[1:])):
        probe.verdict_hint = "decreasing"
    elif all(b == a for a, b in zip(logs, logs[1:])):
        probe.verdict_hint = "flat"
    else:
        probe.verdict_hint = "mixed"
    return probe
