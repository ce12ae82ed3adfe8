"""Independent reference implementations used to cross-check the package.

These are written from the definitions, favour clarity over speed and share
no code with ``mfsc`` beyond reading ``MachineSpec`` fields.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def naive_positions(spec, n):
    """Trailing-head positions after ``n`` steps, straight from the recurrence."""
    pos = [0] * (spec.h - 1)
    t = spec.initial[0]
    for _ in range(n):
        for i in range(spec.h - 1):
            pos[i] += spec.mu[t][i]
        t = spec.delta_t[t]
    return tuple(pos)


def naive_states(spec, w):
    """Q-state sequence q_0..q_|w| by full re-simulation."""
    q = spec.initial[1]
    qs = [q]
    for n, a in enumerate(w):
        pos = naive_positions(spec, n)
        obs = tuple(w[p] for p in pos) + (a,)
        q = spec.delta_q[(q, obs)]
        qs.append(q)
    return qs


def naive_martingale(spec, w):
    qs = naive_states(spec, w)
    d = Fraction(spec.capital)
    for n, a in enumerate(w):
        d *= len(spec.alphabet) * Fraction(spec.beta[qs[n]][a])
    return d


def naive_output(spec, w):
    qs = naive_states(spec, w)
    return "".join(spec.nu[(qs[n], a)] for n, a in enumerate(w))


def naive_hat_nu(spec, q, u, w):
    out = ""
    for i, a in enumerate(w):
        out += spec.nu[(q, a)]
        if i < len(u):
            q = spec.delta_q[(q, tuple(u[i]) + (a,))]
    return out


def naive_gamma(spec, q, u, words):
    return sum(Fraction(1, 2 ** len(naive_hat_nu(spec, q, u, x))) for x in words)


def sfe_codebook(alphabet, measure):
    """Textbook SFE over blocks in lexicographic (alphabet) order.

    ``measure`` maps every block to its probability.  Codeword of ``w`` is
    the first ``1 + ceil(-log2 p(w))`` bits of ``F(w-) + p(w)/2``.
    """
    order = sorted(measure, key=lambda w: [alphabet.index(a) for a in w])
    book = {}
    below = Fraction(0)
    for w in order:
        p = measure[w]
        if p == 0:
            continue
        length = 1
        while Fraction(1, 2 ** (length - 1)) > p:
            length += 1
        mid = below + p / 2
        book[w] = format(int(mid * 2 ** length), f"0{length}b")
        below += p
    return book


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)
