"""Brute-force oracles and exact checkers for the compression/gambling lemmas.

Every verdict is decided in exact rational arithmetic.  Quantities involving
``log |Sigma|`` or fractional powers are compared by exponentiating both
sides (see :func:`mfsc.gale.exact_compare`); floats only appear in the
human-readable columns of a report.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Sequence

from .construct import (CompressorFromGambler, GamblerFromCompressor, SuffixSet, block_code,
                        compressor_to_gambler, full_stream_decode, gamma, gambler_to_compressor,
                        is_non_vanishing, make_non_vanishing, mixing_weight)
from .gale import GaleValue, exact_compare, martingale_values
from .machine import (COMPRESSOR, GAMBLER, Cursor, positions, run_compressor, speed_profile,
                      trailing_observations)
from .sfe import is_prefix_free, kraft_sum

IL_BUDGET = 1 << 22


class BudgetExceeded(RuntimeError):
    pass


def _render(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, GaleValue):
        return {"mantissa": str(x.mantissa), "exponent": str(x.exponent), "sigma": x.sigma}
    if isinstance(x, tuple):
        return "".join(map(str, x))
    if isinstance(x, dict):
        return {str(k): _render(v) for k, v in x.items()}
    if isinstance(x, (list,)):
        return [_render(v) for v in x]
    return x


@dataclass
class LemmaReport:
    lemma: str
    machine: str
    params: dict
    lhs: object
    rhs: object
    holds: bool
    witness: object = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({k: _render(v) for k, v in self.__dict__.items()}, sort_keys=True)

    def __bool__(self) -> bool:
        return self.holds


# -- information losslessness ---------------------------------------------------

@dataclass
class LosslessCheck:
    holds: bool
    strings: int
    collision: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_information_lossless(machine, L: int, budget: int = IL_BUDGET) -> LosslessCheck:
    """Exhaustive injectivity of ``w -> (C(w), t_|w|, q_|w|)`` over ``|w| <= L``."""
    sigma = len(machine.alphabet)
    if sigma ** L > budget:
        raise BudgetExceeded(f"|Sigma|^L = {sigma}^{L} exceeds the budget {budget}")
    t0, q0 = machine.initial
    seen: dict = {}
    count = 0
    stack = [((), (0,) * (machine.h - 1), t0, q0, "")]
    while stack:
        syms, pos, t, q, out = stack.pop()
        key = (out, t, q)
        count += 1
        if key in seen:
            return LosslessCheck(False, count, (seen[key], syms))
        seen[key] = syms
        if len(syms) == L:
            continue
        n = len(syms)
        move = machine.move(t)
        pos2 = tuple(p + d for p, d in zip(pos, move))
        t2 = machine.next_t(t)
        for a in reversed(machine.alphabet):
            obs = tuple(a if p == n else syms[p] for p in pos) + (a,)
            stack.append((syms + (a,), pos2, t2, machine.next_q(q, obs), out + machine.output(q, a)))
    return LosslessCheck(True, count)


# -- compressor -> gambler lemmas ------------------------------------------------------

class CompressorRun:
    """One compressor, its gambler ``G_k`` and both runs on a fixed prefix ``S``.

    The gambler side comes from the lazily constructed ``G_k``; the other side
    of each lemma is recomputed from the source compressor's own trajectory,
    so the two routes share nothing but the input.
    """

    def __init__(self, compressor, k: int, s: Sequence, gambler: GamblerFromCompressor | None = None,
                 reference=None):
        self.C = compressor
        self.ref = reference if reference is not None else compressor
        self.G = gambler if gambler is not None else compressor_to_gambler(compressor, k)
        self.k = k
        self.S = tuple(s)
        self.ell = self.G.ell
        self.sigma = len(compressor.alphabet)
        self.d = list(martingale_values(self.G, self.S))
        bits, _, trace = run_compressor(self.ref, self.S)
        self.q = [st[1] for st in trace.states]
        cur = Cursor(self.ref)
        self.lengths = [len(self.ref.output(cur.feed(a), a)) for a in self.S]
        self.prefix_len = [0]
        for x in self.lengths:
            self.prefix_len.append(self.prefix_len[-1] + x)
        self.trailing = trailing_observations(self.ref, self.S, len(self.S) + k)
        self.M = self.ref.max_output_length
        self.TQ = len(self.ref.t_states) * len(self.ref.q_states)
        self._memo: dict = {}

    def record(self, n: int) -> tuple:
        return tuple(self.trailing[n:n + self.k])

    def gamma_all(self, n: int, length: int) -> Fraction:
        return gamma(self.ref, self.q[n], self.record(n), SuffixSet.all(length), memo=self._memo)

    def describe(self) -> str:
        return self.C.describe()

    def _params(self, **kw) -> dict:
        return {"k": self.k, "ell": self.ell, **kw}

    def suffix_equality(self, m: int, j: int) -> LemmaReport:
        k = self.k
        if m * k < self.ell or not 0 <= j <= k or m * k + j > len(self.S):
            raise ValueError(f"need mk >= ell, 0 <= j <= k and |S| >= mk+j (m={m}, j={j})")
        a, b = m * k, m * k + j
        lhs = self.d[b] / self.d[a]
        rhs = (Fraction(self.sigma) ** j / (1 << (self.prefix_len[b] - self.prefix_len[a]))
               * self.gamma_all(b, k - j) / self.gamma_all(a, k))
        return LemmaReport("suffix-equality", self.describe(), self._params(m=m, j=j), lhs, rhs,
                           lhs == rhs, None if lhs == rhs else "".join(self.S[:b]))

    def _block_rhs_base(self, n: int) -> Fraction:
        return Fraction(self.sigma) ** (n - self.ell) / (1 << self.prefix_len[n])

    def block_bound(self, m: int) -> LemmaReport:
        n = m * self.k
        prod = Fraction(1)
        for i in range(self.ell // self.k, m):
            prod *= self.gamma_all(i * self.k, self.k)
        lhs, rhs = self.d[n], self._block_rhs_base(n) / prod
        return LemmaReport("block-bound", self.describe(), self._params(m=m), lhs, rhs, lhs >= rhs,
                           None if lhs >= rhs else "".join(self.S[:n]))

    def _gamma_cap(self) -> int:
        return (self.k * self.M + 1) * self.TQ

    def divisible_bound(self, m: int) -> LemmaReport:
        n = m * self.k
        lhs = self.d[n]
        rhs = self._block_rhs_base(n) / Fraction(self._gamma_cap()) ** m
        extra = {}
        if n >= self.ell:
            sharper = self._block_rhs_base(n) / Fraction(self._gamma_cap()) ** (m - self.ell // self.k)
            extra = {"sharper_rhs": sharper, "sharper_holds": lhs >= sharper}
        return LemmaReport("divisible-bound", self.describe(), self._params(m=m, M=self.M), lhs, rhs,
                           lhs >= rhs, None if lhs >= rhs else "".join(self.S[:n]), extra)

    def general_bound(self, n: int) -> LemmaReport:
        lhs = self.d[n]
        rhs = (Fraction(self.sigma) ** (n - self.ell) / (1 << (self.prefix_len[n] + self.k * self.M))
               / Fraction(self._gamma_cap()) ** (-(-n // self.k)))
        return LemmaReport("general-bound", self.describe(), self._params(n=n, M=self.M), lhs, rhs,
                           lhs >= rhs, None if lhs >= rhs else "".join(self.S[:n]))


def check_suffix_equality(C, k: int, m: int, j: int, s: Sequence, **kw) -> LemmaReport:
    return CompressorRun(C, k, s[:m * k + j], **kw).suffix_equality(m, j)


def check_block_bound(C, k: int, m: int, s: Sequence, **kw) -> LemmaReport:
    return CompressorRun(C, k, s[:m * k], **kw).block_bound(m)


def check_divisible_bound(C, k: int, m: int, s: Sequence, **kw) -> LemmaReport:
    return CompressorRun(C, k, s[:m * k], **kw).divisible_bound(m)


def check_general_bound(C, k: int, n: int, s: Sequence, **kw) -> LemmaReport:
    return CompressorRun(C, k, s[:n], **kw).general_bound(n)


# -- gambler -> compressor lemma --------------------------------------------------------

def compressor_bound_holds(clen: int, d: Fraction, n: int, k: int, ell: int, sigma: int,
                           capital: Fraction) -> bool:
    """``clen <= 2n/k + (n+ell) log sigma + ell + log c0 - log d``, exactly."""
    if d == 0:
        return True
    factors = [(2, Fraction(clen) - Fraction(2 * n, k) - ell), (sigma, -(n + ell)),
               (d, 1), (Fraction(capital), -1)]
    return exact_compare(factors) <= 0


def compressor_bound_value(n: int, k: int, ell: int, sigma: int, capital: Fraction, d: Fraction) -> float:
    if d == 0:
        return math.inf
    return (2 * n / k + (n + ell) * math.log2(sigma) + ell + math.log2(capital)
            - (math.log2(d.numerator) - math.log2(d.denominator)))


def check_compressor_bound(G, k: int, n: int, s: Sequence, compressor: CompressorFromGambler | None = None
                           ) -> LemmaReport:
    Ck = compressor if compressor is not None else gambler_to_compressor(G, k)
    w = tuple(s[:n])
    bits, _, _ = run_compressor(Ck, w, trace=False)
    d = None
    for d in martingale_values(G, w):
        pass
    sigma = len(G.alphabet)
    holds = compressor_bound_holds(len(bits), d, n, k, Ck.ell, sigma, G.capital)
    rhs = compressor_bound_value(n, k, Ck.ell, sigma, Fraction(G.capital), d)
    return LemmaReport("compressor-bound", G.describe(), {"k": k, "n": n, "ell": Ck.ell},
                       len(bits), rhs, holds, None if holds else "".join(w),
                       {"martingale": d})


# -- dimension vs compression probes ------------------------------------------------------

def dimension_probe(machine, direction: str, k: int, s_grid: Sequence, sequence: Sequence,
                    n_grid: Sequence[int], eps) -> list[dict]:
    """Evaluate the concrete inequality chain linking gale success and compression.

    ``c2g``: ``machine`` is a compressor, each ``s`` in the grid plays the
    target ratio ``r``.  Whenever ``|C(S[0:n])| <= (r+2eps) n log|Sigma|`` and
    ``((kM+1)|T||Q|)^ceil(n/k) <= 2^(eps n)``, the constructed gambler must
    satisfy ``d^(r+4eps)(S[0:n]) >= 2^(-kM) |Sigma|^(eps n - ell)``.

    ``g2c``: ``machine`` is a gambler (made non-vanishing with ``eps`` when
    needed, capital normalized to 1).  Whenever ``d^(s+2eps)(S[0:n]) >= 1`` and
    ``2/k + (log|Sigma|+1) ell/n <= 2 eps``, the constructed compressor must
    satisfy ``|C_k(S[0:n])| <= (s+4eps) n log|Sigma|``.

    ``log2_gale`` is the premise/conclusion gale above; ``log2_sgale`` is the
    plain ``s``-gale of the gambler at the grid exponent.  Rows record raw
    numbers and the exact verdicts; ``consistent`` is false
    only if the premises hold and the conclusion fails.
    """
    eps = Fraction(eps)
    sigma = len(machine.alphabet)
    log_sigma = math.log2(sigma)
    n_grid = sorted(n_grid)
    w = tuple(sequence[:n_grid[-1]])
    rows = []
    if direction == "c2g":
        if machine.kind != COMPRESSOR:
            raise ValueError("c2g probes need a compressor")
        G = compressor_to_gambler(machine, k)
        M = machine.max_output_length
        TQ = len(machine.t_states) * len(machine.q_states)
        outs = [0]
        cur = Cursor(machine)
        for a in w:
            outs.append(outs[-1] + len(machine.output(cur.feed(a), a)))
        ds = list(martingale_values(G, w))
        for r in map(Fraction, s_grid):
            for n in n_grid:
                clen = outs[n]
                ratio_ok = exact_compare([(2, clen), (sigma, -(r + 2 * eps) * n)]) <= 0
                k_ok = n >= k and exact_compare([((k * M + 1) * TQ, -(-n // k)), (2, -eps * n)]) <= 0
                gale = GaleValue(ds[n], (r + 4 * eps - 1) * n, sigma)
                sgale = GaleValue(ds[n], (r - 1) * n, sigma)
                target = exact_compare([(ds[n], 1), (sigma, (r + 4 * eps - 1) * n),
                                        (2, k * M), (sigma, G.ell - eps * n)]) >= 0
                rows.append({"direction": "c2g", "k": k, "s": str(r), "eps": str(eps), "n": n,
                             "ell": G.ell, "output_bits": clen,
                             "ratio": clen / (n * log_sigma) if n else math.nan,
                             "premise_ratio": ratio_ok, "premise_k": k_ok,
                             "log2_gale": gale.log2(), "log2_sgale": sgale.log2(),
                             "conclusion": target, "consistent": not (ratio_ok and k_ok) or target})
        return rows
    if direction != "g2c":
        raise ValueError(f"unknown direction {direction!r}")
    if machine.kind != GAMBLER:
        raise ValueError("g2c probes need a gambler")
    G = machine if is_non_vanishing(machine) else make_non_vanishing(machine, eps)
    G = replace(G, capital=Fraction(1))
    Ck = gambler_to_compressor(G, k)
    outs = [0]
    cur = Cursor(Ck)
    for a in w:
        outs.append(outs[-1] + len(Ck.output(cur.feed(a), a)))
    ds = list(martingale_values(G, w))
    for s in map(Fraction, s_grid):
        for n in n_grid:
            clen = outs[n]
            gale = GaleValue(ds[n], (s + 2 * eps - 1) * n, sigma)
            gale_ok = gale.compare(1) in (">", "=")
            sgale = GaleValue(ds[n], (s - 1) * n, sigma)
            if n:
                x = (2 * eps - Fraction(2, k)) * n / Ck.ell - 1
                n_ok = exact_compare([(sigma, 1), (2, -x)]) <= 0
            else:
                n_ok = False
            target = exact_compare([(2, clen), (sigma, -(s + 4 * eps) * n)]) <= 0
            chain = compressor_bound_holds(clen, ds[n], n, k, Ck.ell, sigma, Fraction(1))
            rows.append({"direction": "g2c", "k": k, "s": str(s), "eps": str(eps), "n": n,
                         "ell": Ck.ell, "output_bits": clen,
                         "ratio": clen / (n * log_sigma) if n else math.nan,
                         "premise_gale": gale_ok, "premise_n": n_ok,
                         "log2_gale": gale.log2(), "log2_sgale": sgale.log2(),
                         "conclusion": target, "lemma_bound": chain,
                         "consistent": chain and (not (gale_ok and n_ok) or target)})
    return rows


# -- verification suites ------------------------------------------------------------------

def _rng(seed, *salt) -> random.Random:
    return random.Random(f"{seed}:{':'.join(map(str, salt))}")


def suite_gale_identity(instances: int = 200, seed: int = 0, depth: int = 6) -> Iterator[LemmaReport]:
    from .gale import check_gale_identity
    from .randgen import random_gambler
    for i in range(instances):
        rng = _rng(seed, "gale", i)
        G = random_gambler(rng, sigma=rng.choice((2, 3)))
        res = check_gale_identity(G, Fraction(1, 2), depth)
        yield LemmaReport("gale-identity", G.describe(), {"instance": i, "depth": depth},
                          res.lhs, res.rhs, res.holds, res.counterexample, {"nodes": res.nodes})


def movement_compressor(ts, delta_t, mu, h) -> "object":
    from .machine import MachineSpec, observation_vectors, validate_machine
    alphabet = ("0", "1")
    return validate_machine(MachineSpec(
        kind=COMPRESSOR, h=h, alphabet=alphabet, t_states=ts, q_states=("q",), delta_t=delta_t,
        delta_q={("q", obs): "q" for obs in observation_vectors(alphabet, h)}, mu=mu,
        nu={("q", a): a for a in alphabet}, initial=(ts[0], "q"), name="movement"))


def suite_kinematics(instances: int = 100, seed: int = 0, horizon: int = 10_000,
                     align_horizon: int = 1000, ks=(1, 2, 3, 4)) -> Iterator[LemmaReport]:
    from .construct import fold_full_speed_heads
    from .randgen import random_movement
    for i in range(instances):
        rng = _rng(seed, "kin", i)
        h = rng.randint(2, 3)
        ts, delta_t, mu = random_movement(rng, h, rng.randint(1, 5))
        C = movement_compressor(ts, delta_t, mu, h)
        prof = speed_profile(C)
        bad = next((n for n, p in enumerate(positions(C, horizon)) if not prof.holds(p, n)), None)
        yield LemmaReport("speed-bound", C.describe(), {"instance": i, "alphas": list(prof.alphas)},
                          None, prof.slack, bad is None, bad)
        F = fold_full_speed_heads(C)
        for k in ks:
            G = compressor_to_gambler(F, k)
            lhs = positions(G, align_horizon)
            rhs = positions(F, align_horizon + k)
            n0 = G.params.n0
            bad = next((n for n in range(n0, align_horizon + 1) if lhs[n] != rhs[n + k]), None)
            yield LemmaReport("alignment", F.describe(), {"instance": i, "k": k, "n0": n0},
                              None, None, bad is None, bad)


def il_compressor_instances(instances: int, seed: int) -> Iterator[tuple]:
    from .construct import fold_full_speed_heads
    from .randgen import random_il_compressor, random_string
    for i in range(instances):
        rng = _rng(seed, "ilc", i)
        C = fold_full_speed_heads(random_il_compressor(rng, sigma=rng.choice((2, 3))))
        for k in (1, 2, 3):
            G = compressor_to_gambler(C, k)
            S = random_string(rng, C.alphabet, G.ell + 4 * k)
            yield i, C, k, G, S


def suite_gambler_bounds(instances: int = 100, seed: int = 0) -> Iterator[LemmaReport]:
    for i, C, k, G, S in il_compressor_instances(instances, seed):
        run = CompressorRun(C, k, S, gambler=G)
        ell = G.ell
        top = ell + 3 * k
        for m in range(ell // k, top // k + 1):
            for j in range(k + 1):
                if m * k + j <= top:
                    yield run.suffix_equality(m, j)
        for m in range(0, top // k + 1):
            yield run.block_bound(m)
            yield run.divisible_bound(m)
        for n in range(0, top + 1):
            yield run.general_bound(n)


def _dominance_witness(G, Gp, factor: Fraction, depth: int):
    """First ``w`` with ``d_Gp(w) < factor^|w| d_G(w)``, by a joint walk of both gamblers."""
    sigma = len(G.alphabet)
    t0, q0 = G.initial
    stack = [((), t0, q0, Gp.initial[1], (0,) * (G.h - 1), Fraction(G.capital), Fraction(Gp.capital))]
    while stack:
        w, t, q, qp, pos, d, dp = stack.pop()
        if dp < factor ** len(w) * d:
            return w
        if len(w) == depth:
            continue
        n = len(w)
        pos2 = tuple(p + m for p, m in zip(pos, G.move(t)))
        for a in G.alphabet:
            obs = tuple(a if p == n else w[p] for p in pos) + (a,)
            stack.append((w + (a,), G.next_t(t), G.next_q(q, obs), Gp.next_q(qp, obs), pos2,
                          sigma * d * G.bet(q)[a], sigma * dp * Gp.bet(qp)[a]))
    return None


def suite_nv(instances: int = 50, seed: int = 0, max_len: int = 8,
             eps_grid=(Fraction(1), Fraction(1, 2), Fraction(1, 4))) -> Iterator[LemmaReport]:
    from .randgen import random_gambler
    for i in range(instances):
        rng = _rng(seed, "nv", i)
        G = random_gambler(rng, sigma=rng.choice((2, 3)))
        for eps in eps_grid:
            lam = mixing_weight(eps)
            Gp = make_non_vanishing(G, eps)
            admissible = (1 - lam) ** eps.denominator * 2 ** eps.numerator >= 1
            positive = is_non_vanishing(Gp)
            witness = _dominance_witness(G, Gp, 1 - lam, max_len)
            yield LemmaReport("non-vanishing", G.describe(), {"instance": i, "eps": eps, "lambda": lam},
                              None, None, admissible and positive and witness is None, witness,
                              {"admissible": admissible, "non_vanishing": positive})


def suite_sfe(instances: int = 50, seed: int = 0, max_k: int = 4, records: int = 3) -> Iterator[LemmaReport]:
    """SFE codes for the block measures of random non-vanishing gamblers.

    Each instance draws ``k <= max_k`` and checks every Q-state against a few
    random trailing records.
    """
    from .machine import observation_vectors
    from .randgen import random_gambler
    from .sfe import ceil_neg_log2
    for i in range(instances):
        rng = _rng(seed, "sfe", i)
        G = random_gambler(rng, sigma=rng.choice((2, 3)), non_vanishing=True)
        k = rng.randint(1, max_k)
        vecs = list(observation_vectors(G.alphabet, G.h - 1))
        for q in G.q_states:
            for _ in range(records):
                u = tuple(rng.choice(vecs) for _ in range(k))
                code = block_code(G, q, u)
                book = code.codebook()
                lengths_ok = all(len(c) == 1 + ceil_neg_log2(code.probability(w)) for w, c in book.items())
                total = sum(code.probability(w) for w in book)
                roundtrip = all(code.decode(c + "0101")[0] == w and code.decode(c)[1] == len(c)
                                for w, c in book.items())
                pf = is_prefix_free(book.values())
                kraft = kraft_sum(book.values())
                holds = (len(book) == len(G.alphabet) ** k and lengths_ok and pf and roundtrip
                         and kraft <= 1 and total == 1)
                yield LemmaReport("sfe-code", G.describe(), {"instance": i, "k": k, "q": q}, kraft,
                                  Fraction(1), holds, None,
                                  {"prefix_free": pf, "lengths": lengths_ok, "roundtrip": roundtrip,
                                   "measure_total": total})


def lossless_instances(instances: int, seed: int, ks=(1, 2), sigma_choices=(2, 3),
                       max_setup: int | None = None) -> Iterator[tuple]:
    from .randgen import folded, random_gambler
    i = 0
    attempt = 0
    while i < instances:
        rng = _rng(seed, "ck", attempt)
        attempt += 1
        G = folded(random_gambler(rng, sigma=rng.choice(sigma_choices), non_vanishing=True))
        Cs = [gambler_to_compressor(G, k) for k in ks]
        if max_setup is not None and any(C.ell + 2 * C.k > max_setup for C in Cs):
            continue
        yield i, G, Cs, rng
        i += 1


def suite_lossless(instances: int = 10, seed: int = 0, strings: int = 500,
                   exhaustive: int = 20, il_max_length: int = 22) -> Iterator[LemmaReport]:
    from .randgen import random_string
    for i, G, Cs, rng in lossless_instances(instances, seed):
        for C in Cs:
            bad = None
            for _ in range(strings):
                w = tuple(random_string(rng, G.alphabet, rng.randint(0, C.ell + 3 * C.k)))
                bits, final, _ = run_compressor(C, w, trace=False)
                try:
                    back = full_stream_decode(C, bits, final, len(w))
                except ValueError as exc:
                    back = exc
                if back != w:
                    bad = w
                    break
            yield LemmaReport("stream-decode", C.describe(), {"instance": i, "k": C.k, "strings": strings},
                              None, None, bad is None, bad)
    for i, G, Cs, rng in lossless_instances(exhaustive, seed + 1, sigma_choices=(2,),
                                            max_setup=il_max_length):
        for C in Cs:
            L = C.ell + 2 * C.k
            res = check_information_lossless(C, L)
            yield LemmaReport("information-lossless", C.describe(), {"instance": i, "k": C.k, "L": L},
                              res.strings, None, res.holds, res.collision)


def suite_compressor_bound(instances: int = 100, seed: int = 0, ks=(1, 2, 4),
                           extra: int = 64) -> Iterator[LemmaReport]:
    from .randgen import folded, random_gambler, random_string
    for i in range(instances):
        rng = _rng(seed, "cb", i)
        G = folded(random_gambler(rng, sigma=rng.choice((2, 3)), non_vanishing=True))
        k = ks[i % len(ks)]
        C = gambler_to_compressor(G, k)
        w = tuple(random_string(rng, G.alphabet, C.ell + extra))
        bits = [0]
        cur = Cursor(C)
        for a in w:
            bits.append(bits[-1] + len(C.output(cur.feed(a), a)))
        ds = list(martingale_values(G, w))
        sigma = len(G.alphabet)
        bad = next((n for n in range(len(w) + 1)
                    if not compressor_bound_holds(bits[n], ds[n], n, k, C.ell, sigma, G.capital)), None)
        yield LemmaReport("compressor-bound", G.describe(), {"instance": i, "k": k, "n_max": len(w)},
                          bits[-1], compressor_bound_value(len(w), k, C.ell, sigma, G.capital, ds[-1]),
                          bad is None, bad)


def suite_ratio_witness(seed: int = 0) -> Iterator[LemmaReport]:
    from .seqgen import generate, parse_sequence
    from .zoo import alternation_gambler
    S = generate(parse_sequence("periodic:01"), 4096)
    C = gambler_to_compressor(alternation_gambler(), 16)
    bits, _, _ = run_compressor(C, S, trace=False)
    ratio = Fraction(len(bits), 4096)
    holds = Fraction(41, 100) <= ratio <= Fraction(57, 100)
    yield LemmaReport("ratio-witness", C.describe(), {"k": 16, "n": 4096, "sequence": "periodic:01"},
                      ratio, "[0.41, 0.57]", holds, None, {"ratio_float": float(ratio)})


# -- mutation controls ---------------------------------------------------------------------

def mutate_bet(G, rng: random.Random, delta=Fraction(1, 64)):
    """Copy of ``G`` with one bet entry nudged by ``delta`` (rows no longer sum to 1)."""
    q = rng.choice(G.q_states)
    a = rng.choice(G.alphabet)
    beta = {p: dict(row) for p, row in G.beta.items()}
    beta[q][a] += delta
    return replace(G, beta=beta, name=f"{G.name}-mutated")


def mutate_output(C, rng: random.Random):
    """Copy of ``C`` with one output extended by a bit (the lemmas only see lengths)."""
    q = rng.choice(C.q_states)
    a = rng.choice(C.alphabet)
    return replace(C, nu={**C.nu, (q, a): C.nu[(q, a)] + "0"}, name=f"{C.name}-mutated")


SUITES = {
    "gale-identity": suite_gale_identity,
    "kinematics": suite_kinematics,
    "gambler-bounds": suite_gambler_bounds,
    "nv": suite_nv,
    "sfe": suite_sfe,
    "lossless": suite_lossless,
    "compressor-bound": suite_compressor_bound,
    "ratio-witness": suite_ratio_witness,
}
