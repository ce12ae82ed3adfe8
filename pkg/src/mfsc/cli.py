"""Command-line driver: ``mfsc simulate | construct | ratio | verify | dim-probe``.

Every command is deterministic.  Reports go to ``--out`` (CSV files start
with a ``# schema: ...`` line; lemma reports are JSON lines).  Exit status:
0 success, 1 verification failure, 2 usage or parse error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import specfile
from .construct import (FullSpeedHead, NotClosed, compressor_to_gambler,
                        export_machine, gambler_to_compressor, is_non_vanishing,
                        make_non_vanishing, reachable_states)
from .gale import martingale_values
from .machine import COMPRESSOR, GAMBLER, MachineValidationError, Cursor, state_label
from .seqgen import alphabet_of, generate, parse_sequence
from .sfe import pack_bits
from .verify import SUITES, BudgetExceeded, check_information_lossless, dimension_probe
from .zoo import ZOO

OK, FAILED, USAGE, BUDGET = 0, 1, 2, 3

TRACE_SCHEMA = "mfsc.trace/1"
RATIO_SCHEMA = "mfsc.ratio/1"
SUMMARY_SCHEMA = "mfsc.verify-summary/1"
PROBE_SCHEMA = "mfsc.dim-probe/1"


class UsageError(Exception):
    pass


# -- argument helpers -------------------------------------------------------------------

def _int_list(text) -> list[int]:
    if isinstance(text, list):
        return [int(x) for x in text]
    return [int(x) for x in str(text).split(",") if x.strip()]


def _frac_list(text) -> list[Fraction]:
    if isinstance(text, list):
        return [Fraction(str(x)) for x in text]
    return [Fraction(x) for x in str(text).split(",") if x.strip()]


def _increasing(name: str, values: list) -> list:
    if not values:
        raise UsageError(f"--{name} must not be empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError(f"--{name} must be strictly increasing")
    return values


def load_machine(ref: str):
    if ref.startswith("zoo:"):
        name = ref[4:]
        if name not in ZOO:
            raise UsageError(f"unknown zoo machine {name!r}; choose from {', '.join(sorted(ZOO))}")
        return ZOO[name]()
    path = Path(ref)
    if not path.exists():
        raise UsageError(f"machine file {ref} does not exist")
    return specfile.load(path)


def build(machine, via: str | None, k: int | None, eps):
    """Apply an optional construction to a loaded machine."""
    if via is None:
        return machine
    if k is None:
        raise UsageError("--k is required with --via")
    return construct_machine(machine, via, k, eps)


def construct_machine(machine, direction: str, k: int, eps):
    if direction == "c2g":
        if machine.kind != COMPRESSOR:
            raise UsageError("c2g needs a compressor")
        return compressor_to_gambler(machine, k)
    if direction == "g2c":
        if machine.kind != GAMBLER:
            raise UsageError("g2c needs a gambler")
        if eps is not None and not is_non_vanishing(machine):
            machine = make_non_vanishing(machine, Fraction(eps))
        return gambler_to_compressor(machine, k)
    raise UsageError(f"unknown direction {direction!r}")


def sequence_for(machine, seq: str, n: int) -> str:
    spec = parse_sequence(seq)
    extra = set(alphabet_of(spec)) - set(machine.alphabet)
    if extra:
        raise UsageError(f"sequence symbols {sorted(extra)} are not in the machine alphabet "
                         f"{list(machine.alphabet)}")
    return generate(spec, n)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _csv(path: Path, schema: str, header: list, rows) -> None:
    with path.open("w", newline="") as fh:
        fh.write(f"# schema: {schema}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _vec(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


# -- commands -----------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    machine = build(load_machine(args.machine), args.via, args.k, args.eps)
    s = sequence_for(machine, args.seq, args.n)
    out = _out_dir(args)
    cur = Cursor(machine)
    rows, bits = [], []
    compressor = machine.kind == COMPRESSOR
    for n, a in enumerate(s):
        pos, obs, state = cur.pos, cur.observe(a), cur.state
        q = cur.feed(a)
        if compressor:
            emitted = machine.output(q, a)
            bits.append(emitted)
        else:
            emitted = str(machine.bet(q)[a])
        rows.append([n, _vec(pos), _vec(obs), state_label(state), emitted])
    _csv(out / "trace.csv", TRACE_SCHEMA,
         ["n", "positions", "observation", "state", "bits" if compressor else "bet"], rows)
    if compressor:
        text = "".join(bits)
        (out / "output.bits").write_text(text + "\n")
        (out / "output.bin").write_bytes(pack_bits(text))
        print(f"{len(s)} symbols -> {len(text)} bits")
    else:
        d = None
        for d in martingale_values(machine, s):
            pass
        print(f"{len(s)} symbols, martingale {d}")
    return OK


def cmd_construct(args) -> int:
    machine = load_machine(args.machine)
    try:
        built = construct_machine(machine, args.direction, args.k, args.eps)
    except FullSpeedHead as exc:
        raise UsageError(f"{exc}; fold full-speed heads before constructing") from None
    print(built.params.summary())
    t_states, q_states, closed = reachable_states(built, args.horizon)
    status = "closed" if closed else "open"
    print(f"reachable states within horizon {args.horizon}: |T'|={len(t_states)} "
          f"|Q'|={len(q_states)} ({status})")
    if args.export:
        try:
            spec = export_machine(built, args.horizon)
        except NotClosed as exc:
            raise UsageError(f"{exc}; raise --horizon") from None
        specfile.dump(spec, args.export)
        print(f"exported to {args.export}")
    return OK


def ratio_rows(machine, s: str, n_grid: list[int]) -> list[list]:
    log_sigma = math.log2(len(machine.alphabet))
    cur = Cursor(machine)
    total, rows = 0, []
    wanted = set(n_grid)
    if 0 in wanted:
        rows.append([0, 0, "nan"])
    for n, a in enumerate(s, 1):
        total += len(machine.output(cur.feed(a), a))
        if n in wanted:
            rows.append([n, total, f"{total / (n * log_sigma):.12f}"])
    return rows


def cmd_ratio(args) -> int:
    machine = build(load_machine(args.machine), args.via, args.k, args.eps)
    if machine.kind != COMPRESSOR:
        raise UsageError("ratio needs a compressor (use --via g2c for a gambler)")
    n_grid = _increasing("n-grid", _int_list(args.n_grid))
    s = sequence_for(machine, args.seq, n_grid[-1])
    rows = ratio_rows(machine, s, n_grid)
    if args.out:
        _csv(_out_dir(args) / "ratio.csv", RATIO_SCHEMA, ["n", "output_bits", "ratio"], rows)
    for r in rows:
        print(",".join(map(str, r)))
    return OK


def cmd_verify(args) -> int:
    if args.suite == "il":
        if not args.machine or args.L is None:
            raise UsageError("--suite il needs --machine and --L")
        machine = build(load_machine(args.machine), args.via, args.k, args.eps)
        res = check_information_lossless(machine, args.L, budget=args.budget)
        if res:
            print(f"il: PASS ({res.strings} strings, L={args.L})")
            return OK
        a, b = ("".join(x) for x in res.collision)
        print(f"il: FAIL collision {a!r} vs {b!r}")
        return FAILED
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        raise UsageError(f"unknown suite {args.suite!r}")
    out = _out_dir(args) if args.out else None
    summary, failures = [], 0
    jsonl = (out / "reports.jsonl").open("w") if out else None
    try:
        for name in names:
            kw = {} if name == "ratio-witness" else {"seed": args.seed}
            if args.instances is not None and name != "ratio-witness":
                kw["instances"] = args.instances
            counts = {}
            for rep in SUITES[name](**kw):
                passed, failed = counts.get(rep.lemma, (0, 0))
                counts[rep.lemma] = (passed + rep.holds, failed + (not rep.holds))
                if jsonl:
                    jsonl.write(rep.to_json() + "\n")
            for lemma, (passed, failed) in counts.items():
                summary.append([lemma, passed + failed, passed, failed])
                failures += failed
                print(f"{name}/{lemma}: {'PASS' if not failed else 'FAIL'} {passed}/{passed + failed}")
    finally:
        if jsonl:
            jsonl.close()
    if out:
        _csv(out / "summary.csv", SUMMARY_SCHEMA, ["lemma", "instances", "passes", "failures"], summary)
    return FAILED if failures else OK


def cmd_dim_probe(args) -> int:
    machine = load_machine(args.machine)
    direction = "g2c" if machine.kind == GAMBLER else "c2g"
    s_grid = _increasing("s-grid", _frac_list(args.s_grid))
    k_grid = _increasing("k-grid", _int_list(args.k_grid))
    n_grid = _increasing("n-grid", _int_list(args.n_grid))
    eps = Fraction(args.eps) if args.eps is not None else Fraction(1, 8)
    s = sequence_for(machine, args.seq, n_grid[-1])
    rows = []
    for k in k_grid:
        try:
            rows += dimension_probe(machine, direction, k, s_grid, s, n_grid, eps)
        except FullSpeedHead as exc:
            raise UsageError(f"{exc}; fold full-speed heads first") from None
    cols = list(rows[0]) if rows else []
    if args.out:
        _csv(_out_dir(args) / "dim_probe.csv", PROBE_SCHEMA, cols,
             [[_cell(r[c]) for c in cols] for r in rows])
    n_max = n_grid[-1]
    final = [r for r in rows if r["n"] == n_max]
    if direction == "g2c":
        best = min(final, key=lambda r: (r["ratio"], r["k"]))
        print(f"compression-ratio upper-bound witness: ratio={best['ratio']:.12f} "
              f"k={best['k']} n={n_max} machine={machine.describe()}")
    gale = [r for r in final if r["log2_sgale"] >= 0]
    if gale:
        best = min(gale, key=lambda r: (Fraction(r["s"]), r["k"]))
        print(f"dimension upper-bound witness: s={best['s']} log2(s-gale)={best['log2_sgale']:.6f} "
              f"slope={best['log2_sgale'] / n_max:.6f} k={best['k']} n={n_max}")
    else:
        print("dimension upper-bound witness: none on this grid")
    bad = [r for r in rows if not r["consistent"]]
    print(f"probe rows: {len(rows)}, inconsistent: {len(bad)}")
    return FAILED if bad else OK


def _cell(x):
    if isinstance(x, float):
        return f"{x:.12f}" if math.isfinite(x) else str(x)
    return x


# -- parser -------------------------------------------------------------------------------

def _add_common(p, seq=True):
    p.add_argument("--machine", help="machine file or zoo:<name>")
    if seq:
        p.add_argument("--seq", help="sequence spec, e.g. periodic:01, champernowne:2, iid:42")
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="JSON file whose keys mirror the flags")


def _add_via(p):
    p.add_argument("--via", choices=("c2g", "g2c"), help="apply a construction first")
    p.add_argument("--k", type=int)
    p.add_argument("--eps", help="non-vanishing mixing target p/q (g2c)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfsc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="trace a machine on a sequence prefix")
    _add_common(p)
    _add_via(p)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_simulate, required=("machine", "seq", "n", "out"))

    p = sub.add_parser("construct", help="build G_k or C_k and summarize it")
    _add_common(p, seq=False)
    p.add_argument("--direction", choices=("c2g", "g2c"))
    p.add_argument("--k", type=int)
    p.add_argument("--eps", help="mix in the uniform bet with this target p/q")
    p.add_argument("--horizon", type=int, default=64)
    p.add_argument("--export", help="write the reachable fragment as a machine file")
    p.set_defaults(func=cmd_construct, required=("machine", "direction", "k"))

    p = sub.add_parser("ratio", help="compression ratios along an n-grid")
    _add_common(p)
    _add_via(p)
    p.add_argument("--n-grid", dest="n_grid", help="comma-separated increasing lengths")
    p.set_defaults(func=cmd_ratio, required=("machine", "seq", "n_grid"))

    p = sub.add_parser("verify", help="run oracle suites")
    p.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)}, all, il")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int)
    p.add_argument("--budget", type=int, default=1 << 22)
    p.add_argument("--L", type=int, help="string length bound for --suite il")
    _add_common(p, seq=False)
    _add_via(p)
    p.set_defaults(func=cmd_verify, required=())

    p = sub.add_parser("dim-probe", help="upper-bound witnesses for dimension and ratio")
    _add_common(p)
    p.add_argument("--s-grid", dest="s_grid", default="1")
    p.add_argument("--k-grid", dest="k_grid", default="1")
    p.add_argument("--n-grid", dest="n_grid")
    p.add_argument("--eps", help="slack p/q (default 1/8)")
    p.set_defaults(func=cmd_dim_probe, required=("machine", "seq", "n_grid"))
    return parser


def _apply_config(args, explicit: set) -> None:
    """Fill arguments from ``--config``; flags given on the command line win."""
    if not getattr(args, "config", None):
        return
    try:
        data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"config {args.config}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config {args.config}: expected a JSON object")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr) or attr in ("func", "required", "command"):
            raise UsageError(f"config {args.config}: unknown key {key!r}")
        if attr not in explicit:
            setattr(args, attr, value)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    explicit = {a.lstrip("-").split("=")[0].replace("-", "_") for a in argv if a.startswith("--")}
    try:
        _apply_config(args, explicit)
        missing = [r for r in args.required if getattr(args, r, None) in (None, "")]
        if missing:
            raise UsageError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing))
        for name in ("k", "n", "L", "horizon"):
            v = getattr(args, name, None)
            if isinstance(v, str):
                setattr(args, name, int(v))
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (specfile.SpecFileError, MachineValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET


if __name__ == "__main__":
    sys.exit(main())
