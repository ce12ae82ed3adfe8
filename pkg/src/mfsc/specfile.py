"""Text format for machine specs.

Example (a 2-head compressor)::

    # comments start with '#'
    kind: compressor
    heads: 2
    alphabet: 0 1
    T: t0 t1
    Q: q0 q1
    initial: t0 q0

    [delta_T]
    t0 -> t1
    t1 -> t0

    [mu]
    t0 -> 1
    t1 -> 0

    [delta_Q]
    q0 | 0,0 -> q0
    ...

    [nu]
    q0 | 0 -> 01
    q1 | 1 -> -

Gamblers replace ``[nu]`` by ``[beta]`` rows ``q | a -> p/q`` and may set
``capital: p/q`` in the header (default 1).  Movement vectors are written as
bit strings of length h-1; ``-`` stands for the empty string or vector.
Symbol vectors are comma-joined, trailing heads first.  State ids and
symbols must not contain whitespace; symbols must not contain commas.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .machine import COMPRESSOR, GAMBLER, MachineSpec, MachineValidationError, validate_machine

EMPTY = "-"
SECTIONS = ("delta_T", "mu", "delta_Q", "nu", "beta")


class SpecFileError(ValueError):
    def __init__(self, line: int | None, message: str, source: str = "<string>"):
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


def loads(text: str, source: str = "<string>") -> MachineSpec:
    header: dict[str, tuple[int, str]] = {}
    tables: dict[str, list[tuple[int, str]]] = {s: [] for s in SECTIONS}
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in tables:
                raise SpecFileError(lineno, f"unknown section [{section}]", source)
            continue
        if section is None:
            key, sep, value = line.partition(":")
            if not sep:
                raise SpecFileError(lineno, f"expected 'key: value', got {line!r}", source)
            header[key.strip()] = (lineno, value.strip())
        else:
            tables[section].append((lineno, line))

    def need(key):
        if key not in header:
            raise SpecFileError(None, f"missing header field {key!r}", source)
        return header[key]

    kind = need("kind")[1]
    ln, heads = need("heads")
    try:
        h = int(heads)
    except ValueError:
        raise SpecFileError(ln, f"heads must be an integer, got {heads!r}", source) from None
    alphabet = tuple(need("alphabet")[1].split())
    t_states = tuple(need("T")[1].split())
    q_states = tuple(need("Q")[1].split())
    ln, init = need("initial")
    parts = init.split()
    if len(parts) != 2:
        raise SpecFileError(ln, "initial needs a T-state and a Q-state", source)
    capital = Fraction(1)
    if "capital" in header:
        ln, c = header["capital"]
        try:
            capital = Fraction(c)
        except ValueError:
            raise SpecFileError(ln, f"bad rational {c!r}", source) from None

    def arrow(lineno, line):
        left, sep, right = line.partition("->")
        if not sep:
            raise SpecFileError(lineno, f"expected '... -> ...', got {line!r}", source)
        return left.strip(), right.strip()

    def keyed(lineno, left):
        q, sep, sym = left.partition("|")
        if not sep:
            raise SpecFileError(lineno, f"expected 'state | symbols', got {left!r}", source)
        return q.strip(), sym.strip()

    delta_t, mu, delta_q, nu, beta = {}, {}, {}, {}, {}
    for lineno, line in tables["delta_T"]:
        t, t2 = arrow(lineno, line)
        delta_t[t] = t2
    for lineno, line in tables["mu"]:
        t, bits = arrow(lineno, line)
        bits = "" if bits == EMPTY else bits
        if set(bits) - {"0", "1"}:
            raise SpecFileError(lineno, f"movement vector {bits!r} is not a bit string", source)
        mu[t] = tuple(int(b) for b in bits)
    for lineno, line in tables["delta_Q"]:
        left, q2 = arrow(lineno, line)
        q, syms = keyed(lineno, left)
        delta_q[(q, tuple(s.strip() for s in syms.split(",")))] = q2
    for lineno, line in tables["nu"]:
        left, bits = arrow(lineno, line)
        q, a = keyed(lineno, left)
        nu[(q, a)] = "" if bits == EMPTY else bits
    for lineno, line in tables["beta"]:
        left, p = arrow(lineno, line)
        q, a = keyed(lineno, left)
        try:
            beta.setdefault(q, {})[a] = Fraction(p)
        except ValueError:
            raise SpecFileError(lineno, f"bad rational {p!r}", source) from None

    spec = MachineSpec(
        kind=kind, h=h, alphabet=alphabet, t_states=t_states, q_states=q_states,
        delta_t=delta_t, delta_q=delta_q, mu=mu, initial=tuple(parts),
        nu=nu if tables["nu"] or kind == COMPRESSOR else None,
        beta=beta if tables["beta"] or kind == GAMBLER else None,
        capital=capital, name=Path(source).stem if source != "<string>" else "")
    try:
        return validate_machine(spec)
    except MachineValidationError as exc:
        raise SpecFileError(None, "invalid machine: " + "; ".join(exc.errors), source) from None


def load(path) -> MachineSpec:
    path = Path(path)
    return loads(path.read_text(), source=str(path))


def dumps(spec: MachineSpec) -> str:
    lines = [f"kind: {spec.kind}", f"heads: {spec.h}",
             "alphabet: " + " ".join(spec.alphabet),
             "T: " + " ".join(spec.t_states), "Q: " + " ".join(spec.q_states),
             f"initial: {spec.initial[0]} {spec.initial[1]}"]
    if spec.kind == GAMBLER:
        lines.append(f"capital: {spec.capital}")
    lines += ["", "[delta_T]"]
    lines += [f"{t} -> {spec.delta_t[t]}" for t in spec.t_states]
    lines += ["", "[mu]"]
    lines += [f"{t} -> {''.join(map(str, spec.mu[t])) or EMPTY}" for t in spec.t_states]
    lines += ["", "[delta_Q]"]
    lines += [f"{q} | {','.join(obs)} -> {q2}" for (q, obs), q2 in spec.delta_q.items()]
    if spec.kind == COMPRESSOR:
        lines += ["", "[nu]"]
        lines += [f"{q} | {a} -> {spec.nu[(q, a)] or EMPTY}" for q in spec.q_states for a in spec.alphabet]
    else:
        lines += ["", "[beta]"]
        lines += [f"{q} | {a} -> {spec.beta[q][a]}" for q in spec.q_states for a in spec.alphabet]
    return "\n".join(lines) + "\n"


def dump(spec: MachineSpec, path) -> None:
    Path(path).write_text(dumps(spec))
