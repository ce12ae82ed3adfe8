"""Deterministic prefixes of infinite sequences.

Families: ``periodic:<period>``, ``champernowne:<base>``,
``debruijn:<base>:<order>`` (the cyclic de Bruijn word repeated forever) and
``iid:<seed>[:<p0>,<p1>,...]`` (independent draws, uniform binary by default).
Symbols are digit characters ``0..9a..z``.

The iid family draws 64-bit words from ``random.Random(seed).getrandbits``
(MT19937, whose output for integer seeds is fixed across platforms and
Python versions) and compares them with the exact cumulative probabilities.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class SequenceSpec:
    family: str
    params: tuple

    def __str__(self) -> str:
        return ":".join([self.family, *map(str, self.params)])


def parse_sequence(text: str) -> SequenceSpec:
    family, _, rest = text.partition(":")
    parts = rest.split(":") if rest else []
    if family == "periodic":
        spec = SequenceSpec(family, (rest,))
    elif family == "champernowne":
        spec = SequenceSpec(family, (int(parts[0]) if parts else 2,))
    elif family == "debruijn":
        if len(parts) != 2:
            raise ValueError("debruijn needs <base>:<order>")
        spec = SequenceSpec(family, (int(parts[0]), int(parts[1])))
    elif family == "iid":
        if not parts:
            raise ValueError("iid needs a seed")
        probs = tuple(Fraction(p) for p in parts[1].split(",")) if len(parts) > 1 else (Fraction(1, 2),) * 2
        spec = SequenceSpec(family, (int(parts[0]), probs))
    else:
        raise ValueError(f"unknown sequence family {family!r}")
    check_spec(spec)
    return spec


def check_spec(spec: SequenceSpec) -> None:
    f, p = spec.family, spec.params
    if f == "periodic":
        if not p[0]:
            raise ValueError("periodic sequence needs a non-empty period")
    elif f == "champernowne":
        if not 2 <= p[0] <= len(DIGITS):
            raise ValueError(f"champernowne base must be in 2..{len(DIGITS)}")
    elif f == "debruijn":
        if not 2 <= p[0] <= len(DIGITS):
            raise ValueError(f"de Bruijn base must be in 2..{len(DIGITS)}")
        if p[1] < 1:
            raise ValueError("de Bruijn order must be positive")
    elif f == "iid":
        probs = p[1]
        if len(probs) < 2 or any(x < 0 for x in probs) or sum(probs) != 1:
            raise ValueError("iid needs a distribution on at least 2 symbols summing to 1")
    else:
        raise ValueError(f"unknown sequence family {f!r}")


def alphabet_of(spec: SequenceSpec) -> tuple:
    f, p = spec.family, spec.params
    if f == "periodic":
        return tuple(sorted(set(p[0])))
    size = len(p[1]) if f == "iid" else p[0]
    return tuple(DIGITS[:size])


def _to_base(m: int, base: int) -> str:
    out = []
    while m:
        m, r = divmod(m, base)
        out.append(DIGITS[r])
    return "".join(reversed(out))


def de_bruijn(base: int, order: int) -> str:
    """Lexicographically least de Bruijn word B(base, order)."""
    a = [0] * (base * order)
    out: list[int] = []

    def db(t, p):
        if t > order:
            if order % p == 0:
                out.extend(a[1:p + 1])
        else:
            a[t] = a[t - p]
            db(t + 1, p)
            for j in range(a[t - p] + 1, base):
                a[t] = j
                db(t + 1, t)

    db(1, 1)
    return "".join(DIGITS[d] for d in out)


def generate(spec: SequenceSpec, n: int) -> str:
    """The first ``n`` symbols of the sequence."""
    check_spec(spec)
    f, p = spec.family, spec.params
    if f == "periodic":
        period = p[0]
        reps = -(-n // len(period))
        return (period * reps)[:n]
    if f == "debruijn":
        word = de_bruijn(*p)
        return (word * (-(-n // len(word))))[:n]
    if f == "champernowne":
        out = []
        total = 0
        m = 1
        while total < n:
            digits = _to_base(m, p[0])
            out.append(digits)
            total += len(digits)
            m += 1
        return "".join(out)[:n]
    seed, probs = p
    rng = random.Random(seed)
    cuts = []
    acc = Fraction(0)
    for x in probs[:-1]:
        acc += x
        cuts.append(acc)
    out = []
    for _ in range(n):
        r = Fraction(rng.getrandbits(64), 1 << 64)
        out.append(DIGITS[sum(1 for c in cuts if r >= c)])
    return "".join(out)
