"""Acceptance criteria 1-10, each at its stated scale and tolerance.

Every criterion prints one ``criterion N: PASS|FAIL ...`` line (also echoed
in the pytest terminal summary).  Run directly with
``python tests/test_acceptance.py`` to get just those lines.
"""

import random
import time
from fractions import Fraction

from mfsc import verify
from mfsc.construct import gambler_to_compressor, mixing_weight
from mfsc.gale import check_gale_identity
from mfsc.machine import run_compressor
from mfsc.randgen import random_gambler
from mfsc.seqgen import generate, parse_sequence
from mfsc.zoo import alternation_gambler, silent_compressor

RESULTS: list[str] = []


def report(number: int, ok: bool, detail: str, elapsed: float, limit: float | None = None) -> bool:
    within = limit is None or elapsed < limit
    verdict = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit else ""
    line = f"criterion {number}: {verdict} {detail} [{elapsed:.1f}s{budget}]"
    RESULTS.append(line)
    print(line)
    return ok and within


def _tally(reports) -> tuple[int, int, list]:
    reports = list(reports)
    bad = [r for r in reports if not r.holds]
    return len(reports), len(bad), bad


def test_criterion_1_gale_identity():
    t = time.perf_counter()
    n, fails, bad = _tally(verify.suite_gale_identity(instances=200, depth=6))
    ok = n == 200 and fails == 0
    assert report(1, ok, f"{n} gamblers, |w|<=6, {fails} violations", time.perf_counter() - t, 60), bad[:1]


def test_criterion_2_kinematics():
    t = time.perf_counter()
    reps = list(verify.suite_kinematics(instances=100, horizon=10_000, align_horizon=1000, ks=(1, 2, 3, 4)))
    speed = [r for r in reps if r.lemma == "speed-bound"]
    align = [r for r in reps if r.lemma == "alignment"]
    fails = sum(not r.holds for r in reps)
    ok = len(speed) == 100 and len(align) == 400 and fails == 0
    assert report(2, ok, f"{len(speed)} speed bounds to n=10^4, {len(align)} alignments, {fails} violations",
                  time.perf_counter() - t, 30)


def _bound_reports():
    if not hasattr(_bound_reports, "cache"):
        start = time.perf_counter()
        _bound_reports.cache = (list(verify.suite_gambler_bounds(instances=100)), time.perf_counter() - start)
    return _bound_reports.cache


def test_criterion_3_suffix_equality():
    reps, elapsed = _bound_reports()
    se = [r for r in reps if r.lemma == "suffix-equality"]
    fails = sum(not r.holds for r in se)
    ks = {r.params["k"] for r in se}
    ok = fails == 0 and ks == {1, 2, 3} and len({r.machine for r in se}) > 1
    assert report(3, ok, f"{len(se)} exact equalities over k in {sorted(ks)}, {fails} violations",
                  elapsed, 300)


def test_criterion_4_block_divisible_general():
    reps, elapsed = _bound_reports()
    counts = {}
    for name in ("block-bound", "divisible-bound", "general-bound"):
        sel = [r for r in reps if r.lemma == name]
        counts[name] = (len(sel), sum(not r.holds for r in sel))
    ragged = sum(1 for r in reps if r.lemma == "general-bound" and r.params["n"] % r.params["k"])
    fails = sum(f for _, f in counts.values())
    ok = fails == 0 and ragged > 0 and all(n for n, _ in counts.values())
    detail = ", ".join(f"{k} {n}" for k, (n, _) in counts.items())
    assert report(4, ok, f"{detail} ({ragged} with k not dividing n), {fails} violations", elapsed)


def test_criterion_5_non_vanishing():
    t = time.perf_counter()
    reps = list(verify.suite_nv(instances=50, max_len=8))
    fails = sum(not r.holds for r in reps)
    lams = {str(e): str(mixing_weight(e)) for e in (Fraction(1), Fraction(1, 2), Fraction(1, 4))}
    ok = len(reps) == 150 and fails == 0
    assert report(5, ok, f"50 gamblers x eps in {{1,1/2,1/4}}, |w|<=8 exhaustive, lambda={lams}, "
                         f"{fails} violations", time.perf_counter() - t)


def test_criterion_6_sfe():
    t = time.perf_counter()
    reps = list(verify.suite_sfe(instances=50, max_k=4))
    fails = sum(not r.holds for r in reps)
    ok = len({r.params["instance"] for r in reps}) == 50 and fails == 0
    assert report(6, ok, f"{len(reps)} block measures from 50 gamblers, k<=4, {fails} violations",
                  time.perf_counter() - t)


def test_criterion_7_lossless():
    t = time.perf_counter()
    reps = list(verify.suite_lossless(instances=10, strings=500))
    dec = [r for r in reps if r.lemma == "stream-decode"]
    il = [r for r in reps if r.lemma == "information-lossless"]
    fails = sum(not r.holds for r in reps)
    ok = fails == 0 and len(dec) == 20 and len(il) > 0 and all(r.params["k"] <= 2 for r in il)
    assert report(7, ok, f"{len(dec)} decoders x 500 strings, {len(il)} exhaustive IL checks "
                         f"(L=ell+2k up to {max(r.params['L'] for r in il)}), {fails} violations",
                  time.perf_counter() - t, 300)


def test_criterion_8_compressor_bound():
    t = time.perf_counter()
    reps = list(verify.suite_compressor_bound(instances=100, ks=(1, 2, 4), extra=64))
    fails = sum(not r.holds for r in reps)
    ok = len(reps) == 100 and fails == 0 and {r.params["k"] for r in reps} == {1, 2, 4}
    assert report(8, ok, f"100 instances, every n<=ell+64, {fails} violations", time.perf_counter() - t)


def test_criterion_9_end_to_end_ratio():
    t = time.perf_counter()
    s = generate(parse_sequence("periodic:01"), 4096)
    c = gambler_to_compressor(alternation_gambler(Fraction(3, 4)), 16)
    bits, _, _ = run_compressor(c, s, trace=False)
    ratio = Fraction(len(bits), 4096)
    ok = Fraction(41, 100) <= ratio <= Fraction(57, 100)
    assert report(9, ok, f"|C_16(S[0:4096])|={len(bits)}, ratio={float(ratio):.9f} in [0.41, 0.57]",
                  time.perf_counter() - t, 60)


def test_criterion_10_negative_controls():
    t = time.perf_counter()
    il = verify.check_information_lossless(silent_compressor(), 1)
    # a mutated bet row must break the gale identity of criterion 1
    rng = random.Random(10)
    gale_broken = 0
    for i in range(20):
        g = random_gambler(random.Random(f"0:gale:{i}"), sigma=2)
        if not check_gale_identity(verify.mutate_bet(g, rng), Fraction(1, 2), 6).holds:
            gale_broken += 1
    # a mutated output must break criterion 3 on at least one instance
    nu_broken = nu_total = 0
    for inst, c, k, g, s in verify.il_compressor_instances(20, seed=0):
        nu_total += 1
        mutated = verify.mutate_output(c, rng)
        run = verify.CompressorRun(c, k, s, gambler=g, reference=mutated)
        top = g.ell + 3 * k
        if any(not run.suffix_equality(m, j).holds
               for m in range(g.ell // k, top // k + 1) for j in range(k + 1) if m * k + j <= top):
            nu_broken += 1
    ok = not il.holds and gale_broken > 0 and nu_broken > 0
    assert report(10, ok, f"silent IL collision at L=1: {not il.holds}; mutated beta broke "
                          f"{gale_broken}/20; mutated nu broke {nu_broken}/{nu_total}",
                  time.perf_counter() - t)


if __name__ == "__main__":
    import sys
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
