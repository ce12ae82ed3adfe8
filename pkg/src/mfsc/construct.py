"""Compressor -> gambler and gambler -> compressor constructions.

Both constructed machines share the same T-component: a copy of the source's
T-state plus a saturating step counter, whose movement function pushes each
trailing head until it runs exactly ``k`` time steps ahead of the source's
corresponding head.  Their Q-states record the last ``k`` trailing
observations, so after the setup phase they can simulate the source ``k``
steps into the future.

The composite Q-space is far too large to enumerate, so composite states are
built on demand and every derived quantity (transitions, bets, outputs,
codebooks, gamma sums) is memoized.  Cache entries are pure functions of
their keys.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from typing import NamedTuple, Sequence

from .machine import (COMPRESSOR, GAMBLER, Cursor, MachineSpec, head_speeds,
                      observation_vectors, positions, state_label, t_orbit, validate_machine)
from .sfe import BlockCode, LengthMismatch, NoMatch


class FullSpeedHead(ValueError):
    """A trailing head moves at speed 1; fold it into the leading head first."""


class VanishingBet(ValueError):
    """The gambler bets zero on some symbol; apply make_non_vanishing first."""


# -- simulating the source several steps ahead -------------------------------

def hat_delta(machine, q, u: Sequence[tuple], w: Sequence):
    """Q-state reached from ``q`` by reading ``w`` against the oldest ``|w|`` records."""
    if len(w) > len(u):
        raise LengthMismatch(f"|w|={len(w)} exceeds the record length {len(u)}")
    for vec, a in zip(u, w):
        q = machine.next_q(q, tuple(vec) + (a,))
    return q


def hat_nu(machine, q, u: Sequence[tuple], w: Sequence) -> str:
    """Concatenated source outputs along the simulated path; ``|w| <= |u| + 1``."""
    if len(w) > len(u) + 1:
        raise LengthMismatch(f"|w|={len(w)} exceeds the record length {len(u)} + 1")
    out = []
    for i, a in enumerate(w):
        out.append(machine.output(q, a))
        if i + 1 < len(w):
            q = machine.next_q(q, tuple(u[i]) + (a,))
    return "".join(out)


class SuffixSet(NamedTuple):
    """``prefix . Sigma^(length - |prefix|)``; ``SuffixSet((), 0)`` is ``{lambda}``."""

    prefix: tuple
    length: int

    @classmethod
    def all(cls, length: int) -> "SuffixSet":
        return cls((), length)

    @classmethod
    def starting(cls, a, length: int) -> "SuffixSet":
        return cls((a,), length)

    def members(self, alphabet) -> list[tuple]:
        return [self.prefix + rest for rest in product(alphabet, repeat=self.length - len(self.prefix))]


def _gamma_all(machine, q, u: tuple, length: int, memo: dict | None) -> Fraction:
    """``gamma(q, u, Sigma^length)`` by a shared-prefix descent."""
    if length == 0:
        return Fraction(1)
    key = (q, u[:length - 1], length)
    if memo is not None and key in memo:
        return memo[key]
    total = Fraction(0)
    for a in machine.alphabet:
        weight = Fraction(1, 1 << len(machine.output(q, a)))
        if length > 1:
            weight *= _gamma_all(machine, machine.next_q(q, tuple(u[0]) + (a,)), u[1:], length - 1, memo)
        total += weight
    if memo is not None:
        memo[key] = total
    return total


def gamma(machine, q, u: Sequence[tuple], A: SuffixSet, memo: dict | None = None) -> Fraction:
    """``sum_{x in A} 2^-|hat_nu(q, u, x)|`` for ``A = prefix . Sigma^r``."""
    u = tuple(tuple(v) for v in u)
    if A.length > len(u) + 1 or len(A.prefix) > A.length:
        raise LengthMismatch(f"suffix set of length {A.length} needs a record of length >= {A.length - 1}")
    if not A.prefix:
        return _gamma_all(machine, q, u, A.length, memo)
    head = Fraction(1, 1 << len(hat_nu(machine, q, u, A.prefix)))
    if A.length == len(A.prefix):
        return head
    q2 = hat_delta(machine, q, u, A.prefix)
    return head * _gamma_all(machine, q2, u[len(A.prefix):], A.length - len(A.prefix), memo)


def tilde_beta(machine, q, u: Sequence[tuple], w: Sequence) -> Fraction:
    """Product of the simulated gambler's bets along ``w`` (``|w| <= |u|``)."""
    if len(w) > len(u):
        raise LengthMismatch(f"|w|={len(w)} exceeds the record length {len(u)}")
    p = Fraction(1)
    for vec, a in zip(u, w):
        p *= machine.bet(q)[a]
        q = machine.next_q(q, tuple(vec) + (a,))
    return p


def block_measure(machine, q, u: Sequence[tuple]) -> dict[tuple, Fraction]:
    """The measure ``w -> tilde_beta(q, u, w)`` on ``Sigma^|u|``, as a full table."""
    return {w: tilde_beta(machine, q, u, w) for w in product(machine.alphabet, repeat=len(u))}


def block_code(machine, q, u: Sequence[tuple]) -> BlockCode:
    """SFE code for ``block_measure(machine, q, u)`` without building the table."""
    u = tuple(tuple(v) for v in u)
    states = {(): q}

    def state(prefix):
        s = states.get(prefix)
        if s is None:
            s = states[prefix] = machine.next_q(state(prefix[:-1]), u[len(prefix) - 1] + (prefix[-1],))
        return s

    return BlockCode(machine.alphabet, len(u), lambda prefix: machine.bet(state(prefix)))


# -- setup parameters ----------------------------------------------------------

@dataclass(frozen=True)
class SetupParams:
    k: int
    n0: int
    ell: int
    M: int | None = None

    def summary(self) -> str:
        text = f"n0={self.n0} ℓ={self.ell}"
        return text if self.M is None else f"{text} M={self.M}"


def compute_n0(source, k: int) -> int:
    """Steps until every trailing head is ``k`` time steps behind the leader."""
    if k < 1:
        raise ValueError("k must be positive")
    speeds = head_speeds(source)
    if not speeds:
        return 0
    fast = [i + 1 for i, a in enumerate(speeds) if a == 1]
    if fast:
        raise FullSpeedHead(f"trailing head(s) {fast} have speed 1; fold them first")
    slack = len(t_orbit(source)[0])
    alpha = max(speeds)
    bound = math.ceil((alpha * k + slack) / (1 - alpha))
    pos = positions(source, bound + k)
    n0 = 0
    for i in range(source.h - 1):
        n = 0
        while n < pos[n + k][i]:
            n += 1
        n0 = max(n0, n)
    return n0


def setup_length(n0: int, k: int) -> int:
    return k * (-(-(n0 + k) // k))


def setup_params(source, k: int) -> SetupParams:
    n0 = compute_n0(source, k)
    M = source.max_output_length if source.kind == COMPRESSOR else None
    return SetupParams(k, n0, setup_length(n0, k), M)


# -- folding full-speed trailing heads ---------------------------------------------

def fold_full_speed_heads(source: MachineSpec) -> MachineSpec:
    """Remove every speed-1 trailing head.

    Such a head eventually trails the leader by a constant lag; its reads
    are served from a buffer of the leader's last symbols kept in the
    Q-state, together with a saturating step counter that tells the lag.
    """
    speeds = head_speeds(source)
    full = [i for i, a in enumerate(speeds) if a == 1]
    if not full:
        return source
    orbit, start = t_orbit(source)
    pos = positions(source, start)
    lag = {i: [n - pos[n][i] for n in range(start + 1)] for i in full}
    depth = max(max(v) for v in lag.values())
    kept = [i for i in range(source.h - 1) if i not in full]
    alphabet = source.alphabet
    h = len(kept) + 1

    def step(state, obs):
        q, buf, c = state
        a = obs[-1]
        it = iter(obs[:-1])
        full_obs = []
        for i in range(source.h - 1):
            if i in lag:
                back = lag[i][c]
                full_obs.append(a if back == 0 else buf[-back])
            else:
                full_obs.append(next(it))
        q2 = source.next_q(q, tuple(full_obs) + (a,))
        buf2 = (buf + (a,))[len(buf) + 1 - depth:] if depth else ()
        return (q2, buf2, min(c + 1, start))

    init = (source.initial[1], (alphabet[0],) * depth, 0)
    seen = {init: state_label(init)}
    queue = deque([init])
    delta_q = {}
    while queue:
        s = queue.popleft()
        for obs in observation_vectors(alphabet, h):
            s2 = step(s, obs)
            if s2 not in seen:
                seen[s2] = state_label(s2)
                queue.append(s2)
            delta_q[(seen[s], obs)] = seen[s2]
    labels = list(seen.values())
    mu = {t: tuple(source.mu[t][i] for i in kept) for t in source.t_states}
    folded = replace(source, h=h, q_states=tuple(labels), delta_q=delta_q, mu=mu,
                     initial=(source.initial[0], seen[init]),
                     name=f"{source.name or 'machine'}-folded")
    if source.kind == COMPRESSOR:
        folded = replace(folded, nu={(seen[s], a): source.nu[(s[0], a)] for s in seen for a in alphabet})
    else:
        folded = replace(folded, beta={seen[s]: dict(source.beta[s[0]]) for s in seen})
    return validate_machine(folded)


# -- non-vanishing transform -------------------------------------------------------

MIX_DENOMINATOR_LIMIT = 1 << 16


def _mix_admissible(lam: Fraction, eps: Fraction) -> bool:
    return (1 - lam) ** eps.denominator * 2 ** eps.numerator >= 1


def mixing_weight(eps, limit: int = MIX_DENOMINATOR_LIMIT) -> Fraction:
    """Largest ``lam`` with denominator ``<= limit`` and ``(1-lam)^d 2^c >= 1`` (``eps = c/d``).

    Stern-Brocot descent between 0/1 and 1/1 with galloping runs.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")

    def ok(a, b):
        return _mix_admissible(Fraction(a, b), eps)

    def longest(pred, tmax):
        lo, hi = 0, tmax
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if pred(mid):
                lo = mid
            else:
                hi = mid - 1
        return lo

    a, b, c, d = 0, 1, 1, 1
    while b + d <= limit:
        if ok(a + c, b + d):
            t = longest(lambda t: ok(a + t * c, b + t * d), (limit - b) // d)
            a, b = a + t * c, b + t * d
        else:
            t = longest(lambda t: not ok(c + t * a, d + t * b), (limit - d) // b)
            c, d = c + t * a, d + t * b
    lam = Fraction(a, b)
    if lam == 0:
        raise ValueError(f"eps={eps} is too small for a mixing weight with denominator <= {limit}")
    return lam


def make_non_vanishing(gambler: MachineSpec, eps) -> MachineSpec:
    """Mix every bet row with the uniform distribution at weight ``mixing_weight(eps)``.

    Each bet shrinks by a factor of at most ``1 - lam >= 2^-eps``, so the
    martingale loses at most a factor ``2^(-eps n)`` over ``n`` steps.
    """
    if gambler.kind != GAMBLER:
        raise ValueError("make_non_vanishing needs a gambler")
    lam = mixing_weight(eps)
    uniform = Fraction(1, len(gambler.alphabet))
    beta = {q: {a: (1 - lam) * Fraction(p) + lam * uniform for a, p in row.items()}
            for q, row in gambler.beta.items()}
    return validate_machine(replace(gambler, beta=beta, name=f"{gambler.name or 'gambler'}-nv"))


def is_non_vanishing(gambler) -> bool:
    return all(p > 0 for row in gambler.beta.values() for p in row.values())


# -- lazily constructed machines -----------------------------------------------------

class TPrime(NamedTuple):
    base_t: object
    counter: int


class GState(NamedTuple):
    """Q-state of the constructed gambler."""

    base_q: object
    record: tuple
    phase: int
    prefix: tuple


class CState(NamedTuple):
    """Q-state of the constructed compressor.

    ``anchor`` is the ``(base_q, record)`` pair in force when the current
    block started; the block's codebook is built from it.
    """

    base_q: object
    record: tuple
    block: tuple
    prefix: tuple
    anchor: tuple


class LazyMachine:
    direction: str = ""
    kind: str = ""

    def __init__(self, source: MachineSpec, k: int):
        if k < 1:
            raise ValueError("k must be positive")
        self.source = source
        self.params = setup_params(source, k)
        self.alphabet = source.alphabet
        self.h = source.h
        self.k = k
        self._source_pos = positions(source, self.params.ell + k + 1)
        self._record0 = ((self.alphabet[0],) * (self.h - 1),) * k
        self.initial = (TPrime(source.initial[0], 0), self._initial_q())
        self.clear_cache()

    def clear_cache(self) -> None:
        self._ahead: dict = {}
        self._setup_q: dict = {(): self.source.initial[1]}
        self._next_q: dict = {}
        self._gamma: dict = {}

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    @property
    def ell(self) -> int:
        return self.params.ell

    # T-component
    def next_t(self, t: TPrime) -> TPrime:
        return TPrime(self.source.next_t(t.base_t), min(t.counter + 1, self.params.n0))

    def _k_ahead(self, t):
        if t not in self._ahead:
            x = t
            for _ in range(self.k):
                x = self.source.next_t(x)
            self._ahead[t] = x
        return self._ahead[t]

    def move(self, t: TPrime) -> tuple:
        c = t.counter
        later = self.source.move(self._k_ahead(t.base_t))
        if c >= self.params.n0:
            return later
        target = self._source_pos[c + self.k]
        return tuple(1 if c < target[i] else later[i] for i in range(self.h - 1))

    def setup_state(self, prefix: tuple):
        """Source Q-state after reading ``prefix`` (any length ``<= ell``)."""
        known = self._setup_q
        if prefix in known:
            return known[prefix]
        n = len(prefix) - 1
        q = self.setup_state(prefix[:-1])
        obs = tuple(prefix[p] for p in self._source_pos[n]) + (prefix[-1],)
        known[prefix] = self.source.next_q(q, obs)
        return known[prefix]

    def next_q(self, q, obs: tuple):
        key = (q, obs)
        hit = self._next_q.get(key)
        if hit is None:
            hit = self._next_q[key] = self._step_q(q, obs)
        return hit

    def _advance(self, base_q, record, prefix, obs):
        """Shared part of both Q-transitions: ``(base_q', record', prefix')``."""
        a = obs[-1]
        record2 = record[1:] + (tuple(obs[:-1]),)
        if len(prefix) < self.params.ell:
            prefix2 = prefix + (a,)
            return self.setup_state(prefix2), record2, prefix2
        return self.source.next_q(base_q, record[0] + (a,)), record2, prefix

    def in_setup(self, q) -> bool:
        return len(q.prefix) < self.params.ell

    def _initial_q(self):
        raise NotImplementedError

    def _step_q(self, q, obs):
        raise NotImplementedError

    def describe(self) -> str:
        return (f"{type(self).__name__}(k={self.k}, {self.params.summary()}) "
                f"from {self.source.describe()}")


class GamblerFromCompressor(LazyMachine):
    """The gambler ``G_k`` built from an information-lossless compressor."""

    direction = "c2g"
    kind = GAMBLER
    capital = Fraction(1)

    def clear_cache(self) -> None:
        super().clear_cache()
        self._bets: dict = {}

    def _initial_q(self):
        return GState(self.source.initial[1], self._record0, 0, ())

    def _step_q(self, q: GState, obs):
        base_q, record, prefix = self._advance(q.base_q, q.record, q.prefix, obs)
        return GState(base_q, record, (q.phase + 1) % self.k, prefix)

    def gamma(self, q, u, A: SuffixSet) -> Fraction:
        return gamma(self.source, q, u, A, memo=self._gamma)

    def bet(self, q: GState) -> dict:
        row = self._bets.get(q)
        if row is not None:
            return row
        if self.in_setup(q):
            row = {a: Fraction(1, self.sigma) for a in self.alphabet}
        else:
            rest = self.k - q.phase
            whole = self.gamma(q.base_q, q.record, SuffixSet.all(rest))
            row = {a: self.gamma(q.base_q, q.record, SuffixSet.starting(a, rest)) / whole
                   for a in self.alphabet}
        self._bets[q] = row
        return row


def phi_width(sigma: int) -> int:
    return (sigma - 1).bit_length()


def phi(alphabet: Sequence, a) -> str:
    """Fixed-width big-endian binary index of ``a``."""
    return format(list(alphabet).index(a), f"0{phi_width(len(alphabet))}b")


class CompressorFromGambler(LazyMachine):
    """The compressor ``C_k`` built from a non-vanishing gambler."""

    direction = "g2c"
    kind = COMPRESSOR

    def __init__(self, source: MachineSpec, k: int):
        if not is_non_vanishing(source):
            raise VanishingBet("the gambler bets zero on some symbol; pass it through make_non_vanishing (--eps)")
        super().__init__(source, k)
        self._phi = {a: phi(self.alphabet, a) for a in self.alphabet}

    def clear_cache(self) -> None:
        super().clear_cache()
        self._codes: dict = {}
        self._outputs: dict = {}

    def _initial_q(self):
        q0 = self.source.initial[1]
        return CState(q0, self._record0, (), (), (q0, self._record0))

    def _step_q(self, q: CState, obs):
        base_q, record, prefix = self._advance(q.base_q, q.record, q.prefix, obs)
        if len(q.block) < self.k - 1:
            return CState(base_q, record, q.block + (obs[-1],), prefix, q.anchor)
        return CState(base_q, record, (), prefix, (base_q, record))

    def code(self, anchor: tuple) -> BlockCode:
        c = self._codes.get(anchor)
        if c is None:
            c = self._codes[anchor] = block_code(self.source, *anchor)
        return c

    def output(self, q: CState, a) -> str:
        if self.in_setup(q):
            return self._phi[a]
        if len(q.block) < self.k - 1:
            return ""
        key = (q.anchor, q.block + (a,))
        bits = self._outputs.get(key)
        if bits is None:
            bits = self._outputs[key] = self.code(q.anchor).encode(q.block + (a,))
        return bits

    @property
    def max_output_length(self) -> int:
        raise NotImplementedError("output lengths of C_k depend on the reached contexts")


def compressor_to_gambler(compressor: MachineSpec, k: int) -> GamblerFromCompressor:
    if compressor.kind != COMPRESSOR:
        raise ValueError("compressor_to_gambler needs a compressor")
    return GamblerFromCompressor(compressor, k)


def gambler_to_compressor(gambler: MachineSpec, k: int) -> CompressorFromGambler:
    if gambler.kind != GAMBLER:
        raise ValueError("gambler_to_compressor needs a gambler")
    return CompressorFromGambler(gambler, k)


# -- materialization ---------------------------------------------------------------

class NotClosed(RuntimeError):
    """The reachable composite-state set did not close within the horizon."""


def reachable_states(machine, horizon: int, limit: int = 200_000) -> tuple[list, list, bool]:
    """Breadth-first closure over T' and Q' up to ``horizon`` transitions.

    Q-transitions are explored for every symbol vector in ``Sigma^h``.
    Returns ``(t_states, q_states, closed)``.
    """
    t_states, _ = t_orbit(machine)
    q0 = machine.initial[1]
    seen = {q0: 0}
    order = [q0]
    frontier = [q0]
    closed = False
    for depth in range(horizon + 1):
        nxt = []
        for q in frontier:
            for obs in observation_vectors(machine.alphabet, machine.h):
                q2 = machine.next_q(q, obs)
                if q2 not in seen:
                    seen[q2] = depth + 1
                    order.append(q2)
                    nxt.append(q2)
                    if len(order) > limit:
                        return t_states, order, False
        if not nxt:
            closed = True
            break
        if depth == horizon:
            break
        frontier = nxt
    return t_states, order, closed


def export_machine(machine, horizon: int) -> MachineSpec:
    """Materialize a lazy machine as a :class:`MachineSpec` (string state ids)."""
    t_states, q_states, closed = reachable_states(machine, horizon)
    if not closed:
        raise NotClosed(f"reachable states not closed within horizon {horizon}")
    tl = {t: state_label(t) for t in t_states}
    ql = {q: state_label(q) for q in q_states}
    spec = MachineSpec(
        kind=machine.kind, h=machine.h, alphabet=machine.alphabet,
        t_states=tuple(tl.values()), q_states=tuple(ql.values()),
        delta_t={tl[t]: tl[machine.next_t(t)] for t in t_states},
        delta_q={(ql[q], obs): ql[machine.next_q(q, obs)]
                 for q in q_states for obs in observation_vectors(machine.alphabet, machine.h)},
        mu={tl[t]: machine.move(t) for t in t_states},
        initial=(tl[machine.initial[0]], ql[machine.initial[1]]),
        name=f"{machine.direction}-k{machine.k}")
    if machine.kind == COMPRESSOR:
        spec = replace(spec, nu={(ql[q], a): machine.output(q, a) for q in q_states for a in machine.alphabet})
    else:
        spec = replace(spec, beta={ql[q]: dict(machine.bet(q)) for q in q_states},
                       capital=Fraction(machine.capital))
    return validate_machine(spec)


# -- decoding ----------------------------------------------------------------------

def full_stream_decode(machine: CompressorFromGambler, bits: str, final_state: tuple, n: int) -> tuple:
    """Recover the input of ``C_k`` from its output, final state and length.

    The setup symbols come back through the inverse of the fixed-width index
    code; each later block is decoded with the codebook of its starting
    context, which is re-derived by simulating ``C_k`` on the symbols decoded
    so far.  The unfinished last block is read off the final state.
    """
    cur = Cursor(machine)
    inverse = {code: a for a, code in machine._phi.items()}
    width = phi_width(machine.sigma)
    pos = 0
    setup = min(n, machine.ell)
    for _ in range(setup):
        code = bits[pos:pos + width]
        if code not in inverse:
            raise NoMatch(f"bit {pos}: {code!r} is not a setup codeword")
        cur.feed(inverse[code])
        pos += width
    blocks, tail = divmod(n - setup, machine.k)
    for _ in range(blocks):
        block, used = machine.code(cur.q.anchor).decode(bits[pos:])
        pos += used
        for a in block:
            cur.feed(a)
    if pos != len(bits):
        raise LengthMismatch(f"decoded {pos} of {len(bits)} bits for n={n}")
    if tail:
        pending = final_state[1].block
        if len(pending) != tail:
            raise LengthMismatch(f"final state holds {len(pending)} pending symbols, expected {tail}")
        for a in pending:
            cur.feed(a)
    if cur.state != tuple(final_state):
        raise LengthMismatch("replayed final state differs from the given one")
    return tuple(cur.symbols)
