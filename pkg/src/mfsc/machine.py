"""Multihead finite-state compressors and gamblers: types, validation, simulation.

A machine has a T-component (driving the oblivious trailing heads) and a
Q-component (reading one symbol per head).  Observation vectors are ordered
``(S[pi_1(n)], ..., S[pi_{h-1}(n)], S[n])``: trailing heads first, leading
head last.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

COMPRESSOR = "compressor"
GAMBLER = "gambler"


class MachineValidationError(ValueError):
    """Raised by :func:`validate_machine`; ``errors`` lists every violation."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class MachineSpec:
    """Declarative h-head finite-state compressor or gambler.

    ``delta_q`` is keyed by ``(q, obs)`` where ``obs`` is a tuple of ``h``
    symbols.  ``mu`` maps each T-state to a tuple of ``h - 1`` bits.
    Exactly one of ``nu`` (compressor) and ``beta`` (gambler) is set.
    """

    kind: str
    h: int
    alphabet: tuple
    t_states: tuple
    q_states: tuple
    delta_t: Mapping
    delta_q: Mapping
    mu: Mapping
    initial: tuple
    nu: Mapping | None = None
    beta: Mapping | None = None
    capital: Fraction = Fraction(1)
    name: str = field(default="", compare=False)

    # -- the stepping interface shared with constructed (lazy) machines --

    def next_t(self, t):
        return self.delta_t[t]

    def move(self, t) -> tuple:
        return self.mu[t]

    def next_q(self, q, obs: tuple):
        return self.delta_q[(q, obs)]

    def output(self, q, a) -> str:
        return self.nu[(q, a)]

    def bet(self, q) -> Mapping:
        return self.beta[q]

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    @property
    def max_output_length(self) -> int:
        """``M``: the longest single-symbol output of a compressor."""
        return max(len(v) for v in self.nu.values())

    def describe(self) -> str:
        label = self.name or "machine"
        return (f"{label} ({self.kind}, h={self.h}, |T|={len(self.t_states)}, "
                f"|Q|={len(self.q_states)}, |Sigma|={self.sigma})")


def _as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def validate_machine(spec: MachineSpec) -> MachineSpec:
    """Check every structural invariant and return a normalized copy.

    Normalization turns containers into tuples/dicts and bets/capital into
    :class:`Fraction`.  All violations are collected before raising.
    """
    errors: list[str] = []
    alphabet = tuple(spec.alphabet)
    t_states = tuple(spec.t_states)
    q_states = tuple(spec.q_states)

    if spec.kind not in (COMPRESSOR, GAMBLER):
        errors.append(f"kind must be {COMPRESSOR!r} or {GAMBLER!r}, got {spec.kind!r}")
    if not isinstance(spec.h, int) or spec.h < 1:
        errors.append(f"h must be a positive integer, got {spec.h!r}")
        raise MachineValidationError(errors)
    if len(alphabet) < 2:
        errors.append(f"alphabet needs at least 2 symbols, got {len(alphabet)}")
    if len(set(alphabet)) != len(alphabet):
        errors.append("alphabet symbols are not unique")
    if not t_states:
        errors.append("T is empty")
    if not q_states:
        errors.append("Q is empty")
    if len(set(t_states)) != len(t_states) or len(set(q_states)) != len(q_states):
        errors.append("duplicate state ids")

    delta_t = dict(spec.delta_t)
    for t in t_states:
        if t not in delta_t:
            errors.append(f"delta_T: missing entry for T-state {t!r}")
        elif delta_t[t] not in t_states:
            errors.append(f"delta_T[{t!r}] = {delta_t[t]!r} is not a T-state")

    mu = {}
    for t in t_states:
        if t not in spec.mu:
            errors.append(f"mu: missing entry for T-state {t!r}")
            continue
        vec = tuple(int(b) for b in spec.mu[t])
        if len(vec) != spec.h - 1:
            errors.append(f"mu[{t!r}] has length {len(vec)}, expected h-1 = {spec.h - 1}")
        if any(b not in (0, 1) for b in vec):
            errors.append(f"mu[{t!r}] = {vec!r} is not a bit vector")
        mu[t] = vec

    delta_q = {}
    arity_ok = True
    for (q, obs), target in spec.delta_q.items():
        obs = tuple(obs)
        if len(obs) != spec.h:
            errors.append(f"delta_Q[{q!r}, {obs!r}]: symbol vector has length {len(obs)}, expected h = {spec.h}")
            arity_ok = False
            continue
        delta_q[(q, obs)] = target
    if arity_ok:
        for q in q_states:
            for obs in observation_vectors(alphabet, spec.h):
                if (q, obs) not in delta_q:
                    errors.append(f"delta_Q: missing entry for ({q!r}, {','.join(map(str, obs))})")
                elif delta_q[(q, obs)] not in q_states:
                    errors.append(f"delta_Q[{q!r}, {obs!r}] = {delta_q[(q, obs)]!r} is not a Q-state")

    nu = beta = None
    capital = Fraction(1)
    if spec.kind == COMPRESSOR:
        if spec.nu is None:
            errors.append("compressor has no output function nu")
        if spec.beta is not None:
            errors.append("compressor must not define beta")
        if spec.nu is not None:
            nu = {}
            for q in q_states:
                for a in alphabet:
                    if (q, a) not in spec.nu:
                        errors.append(f"nu: missing entry for ({q!r}, {a!r})")
                        continue
                    bits = str(spec.nu[(q, a)])
                    if set(bits) - {"0", "1"}:
                        errors.append(f"nu[{q!r}, {a!r}] = {bits!r} is not a bitstring")
                    nu[(q, a)] = bits
    elif spec.kind == GAMBLER:
        if spec.beta is None:
            errors.append("gambler has no betting function beta")
        if spec.nu is not None:
            errors.append("gambler must not define nu")
        capital = _as_fraction(spec.capital)
        if capital <= 0:
            errors.append(f"initial capital must be positive, got {capital}")
        if spec.beta is not None:
            beta = {}
            for q in q_states:
                if q not in spec.beta:
                    errors.append(f"beta: missing row for Q-state {q!r}")
                    continue
                row = {a: _as_fraction(p) for a, p in spec.beta[q].items()}
                extra = set(row) - set(alphabet)
                if extra:
                    errors.append(f"beta[{q!r}] has symbols outside the alphabet: {sorted(map(str, extra))}")
                row = {a: row.get(a, Fraction(0)) for a in alphabet}
                if any(p < 0 for p in row.values()):
                    errors.append(f"beta[{q!r}] has a negative probability")
                total = sum(row.values())
                if total != 1:
                    errors.append(f"beta[{q!r}]: distribution sums to {total}")
                beta[q] = row

    t0, q0 = spec.initial
    if t0 not in t_states:
        errors.append(f"initial T-state {t0!r} not in T")
    if q0 not in q_states:
        errors.append(f"initial Q-state {q0!r} not in Q")

    if errors:
        raise MachineValidationError(errors)
    return replace(spec, alphabet=alphabet, t_states=t_states, q_states=q_states,
                   delta_t=delta_t, delta_q=delta_q, mu=mu, nu=nu, beta=beta,
                   initial=(t0, q0), capital=capital)


def observation_vectors(alphabet: Sequence, width: int) -> Iterator[tuple]:
    """All symbol vectors of the given width, in lexicographic order."""
    if width == 0:
        yield ()
        return
    for head in alphabet:
        for rest in observation_vectors(alphabet, width - 1):
            yield (head,) + rest


# -- head kinematics --------------------------------------------------------

def positions(machine, n: int) -> list[tuple]:
    """Return ``[pi(0), ..., pi(n)]``."""
    t = machine.initial[0]
    pos = (0,) * (machine.h - 1)
    out = [pos]
    for _ in range(n):
        pos = tuple(p + m for p, m in zip(pos, machine.move(t)))
        t = machine.next_t(t)
        out.append(pos)
    return out


def position_vector(machine, n: int) -> tuple:
    t = machine.initial[0]
    pos = [0] * (machine.h - 1)
    for _ in range(n):
        for i, m in enumerate(machine.move(t)):
            pos[i] += m
        t = machine.next_t(t)
    return tuple(pos)


def t_orbit(machine) -> tuple[list, int]:
    """The delta_T orbit from t0 as ``(states, cycle_start)``.

    ``states`` lists every visited T-state once; the orbit cycles back to
    ``states[cycle_start]`` after the last one.
    """
    seen: dict[Any, int] = {}
    states = []
    t = machine.initial[0]
    while t not in seen:
        seen[t] = len(states)
        states.append(t)
        t = machine.next_t(t)
    return states, seen[t]


def head_speed(machine, i: int) -> Fraction:
    """Asymptotic speed of trailing head ``i`` (1-based)."""
    if not 1 <= i <= machine.h - 1:
        raise IndexError(f"trailing head index {i} out of range 1..{machine.h - 1}")
    states, start = t_orbit(machine)
    cycle = states[start:]
    return Fraction(sum(machine.move(t)[i - 1] for t in cycle), len(cycle))


def head_speeds(machine) -> tuple[Fraction, ...]:
    return tuple(head_speed(machine, i) for i in range(1, machine.h))


@dataclass(frozen=True)
class SpeedProfile:
    alphas: tuple
    slack: int

    def holds(self, pos: Sequence[int], n: int) -> bool:
        return all(a * n - self.slack <= p <= a * n + self.slack
                   for a, p in zip(self.alphas, pos))


def speed_profile(machine) -> SpeedProfile:
    slack = len(getattr(machine, "t_states", None) or t_orbit(machine)[0])
    return SpeedProfile(head_speeds(machine), slack)


# -- simulation -------------------------------------------------------------

@dataclass
class HeadTrace:
    positions: list = field(default_factory=list)
    observations: list = field(default_factory=list)
    states: list = field(default_factory=list)


class Cursor:
    """Incremental simulation: feed symbols one at a time.

    Keeps the symbols read so far so trailing heads can look back.
    """

    def __init__(self, machine, record: bool = False):
        self.machine = machine
        self.symbols: list = []
        self.t, self.q = machine.initial
        self.pos = (0,) * (machine.h - 1)
        self.trace = HeadTrace([self.pos], [], [(self.t, self.q)]) if record else None

    @property
    def n(self) -> int:
        return len(self.symbols)

    def observe(self, a) -> tuple:
        """The observation vector the next step would see if ``a`` is read."""
        syms = self.symbols
        n = len(syms)
        return tuple(a if p == n else syms[p] for p in self.pos) + (a,)

    def feed(self, a):
        """Consume ``a``; return the Q-state that was active when reading it."""
        m = self.machine
        obs = self.observe(a)
        q_before = self.q
        self.symbols.append(a)
        self.pos = tuple(p + d for p, d in zip(self.pos, m.move(self.t)))
        self.t = m.next_t(self.t)
        self.q = m.next_q(self.q, obs)
        if self.trace is not None:
            self.trace.observations.append(obs)
            self.trace.positions.append(self.pos)
            self.trace.states.append((self.t, self.q))
        return q_before

    @property
    def state(self) -> tuple:
        return (self.t, self.q)


def run_compressor(machine, w: Iterable, trace: bool = True):
    """Run a compressor on ``w``; return ``(bits, (t, q), HeadTrace | None)``."""
    cur = Cursor(machine, record=trace)
    out = []
    for a in w:
        q = cur.feed(a)
        out.append(machine.output(q, a))
    return "".join(out), cur.state, cur.trace


def compressor_outputs(machine, w: Iterable) -> list[str]:
    """Per-symbol outputs ``nu(q_n, w[n])``."""
    cur = Cursor(machine)
    return [machine.output(cur.feed(a), a) for a in w]


def run_gambler_trace(machine, w: Iterable, trace: bool = True):
    """Run a gambler on ``w``; return ``(bets, (t, q), HeadTrace | None)``.

    ``bets[n]`` is ``beta(q_n)(w[n])``.
    """
    cur = Cursor(machine, record=trace)
    bets = []
    for a in w:
        q = cur.feed(a)
        bets.append(machine.bet(q)[a])
    return bets, cur.state, cur.trace


def trailing_observations(machine, s: Sequence, n_max: int) -> list[tuple]:
    """Trailing-head symbol vectors ``sigma_n[0:h-1]`` for ``n < n_max``.

    Only the trailing heads are read, so ``s`` may be shorter than ``n_max``
    as long as it covers every trailing position.
    """
    out = []
    for pos in positions(machine, n_max)[:n_max]:
        out.append(tuple(s[p] for p in pos))
    return out


def state_label(x: Hashable) -> str:
    """Canonical text rendering of a (possibly composite) state."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        if hasattr(x, "_fields"):
            return "(" + ";".join(f"{f}={state_label(v)}" for f, v in zip(x._fields, x)) + ")"
        return "(" + ",".join(state_label(v) for v in x) + ")"
    return str(x)
