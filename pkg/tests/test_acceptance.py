"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` (or plain ``python3
tests/test_acceptance.py``). The lines are also repeated in the pytest
terminal summary. Criteria that do not hold are left failing on purpose;
the printed detail says what was measured.
"""
from __future__ import annotations

import io
import json
import time
from contextlib import redirect_stdout

import pytest

from btstab.cli import main as cli_main
from btstab.quadext import classify_extensions, make_extension, norm_fiber_check, norm_kernel_check
from btstab.ring import parse_base
from btstab.stab import Mutation, tan_containment, verify_lemma_j, verify_theorem
from btstab.suites import check_barbs, check_dilation, check_galois, filtration_records

LINES: dict[int, str] = {}
_ORACLES: dict = {}  # shared oracle runs, keyed by (base, ext, point, N, mode)

Q2 = parse_base("q2", 8)
Q2_EXTS = [make_extension(Q2, d) for d in classify_extensions(Q2)]


def top_level(ext) -> int:
    return 2 if ext.ramified else 3


def report(k: int, ok: bool, detail: str, elapsed: float, limit: float) -> bool:
    ok_time = elapsed < limit
    passed = ok and ok_time
    line = f"criterion {k}: {'PASS' if passed else 'FAIL'} ({elapsed:.1f}s, limit {limit:.0f}s) {detail}"
    if not ok_time:
        line += " [over time]"
    LINES[k] = line
    print(line)
    return passed


def theorem_runs(exts, mode, levels=None, N=None, parse="union_first", mutation=None):
    reps = []
    for ext in exts:
        top = levels if levels is not None else top_level(ext)
        reps += verify_theorem(ext, top, N, parse, mode, mutation, oracle_cache=_ORACLES)
    return reps


def tally(reps) -> str:
    bad = [r for r in reps if r.verdict != "equal"]
    kinds = sorted({f"{r.point.ext.desc.spec()}@n={r.params.n}:{r.verdict}" for r in bad})
    return f"{len(reps) - len(bad)}/{len(reps)} equal" + (f"; failing {', '.join(kinds)}" if kinds else "")


# -- criteria ------------------------------------------------------------------------


def criterion_1() -> bool:
    t = time.time()
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(["extensions", "--base", "q2"])
    data = json.loads(buf.getvalue())
    diffs = sorted(d["diff_recomputed"] for d in data)
    ok = (code == 0 and len(data) == 7 and diffs == [0, 2, 2, 3, 3, 3, 3]
          and all(d["diff_val"] == d["diff_recomputed"] for d in data)
          and [d["kind"] for d in data].count("unramified") == 1)
    return report(1, ok, f"{len(data)} classes, recomputed diff_val {diffs}", time.time() - t, 1)


def criterion_2() -> bool:
    t = time.time()
    reps = theorem_runs(Q2_EXTS, "orbit")
    ok = all(r.verdict == "equal" for r in reps)
    elapsed = time.time() - t
    wit = next((r for r in reps if r.verdict != "equal"), None)
    detail = f"orbit oracle: {tally(reps)}"
    if wit is not None:
        detail += f"; e.g. {wit.point.rep.label()} oracle {len(wit.oracle_set)} vs closed " \
                  f"{len(wit.closed_set)}, witness {wit.witnesses[:1]}"
    vertex = theorem_runs(Q2_EXTS, "vertex")
    detail += f" | diagnostic, vertex-fixing oracle: {tally(vertex)}"
    return report(2, ok, detail, elapsed, 300)


def criterion_3() -> bool:
    t = time.time()
    results = {}
    for mode in ("orbit", "vertex"):
        holds = []
        for r in theorem_runs(Q2_EXTS, mode):
            holds.append(tan_containment(r.point, r.precision_N, mode, r.oracle_set).holds)
        results[mode] = holds
    alt = theorem_runs(Q2_EXTS, "vertex", parse="difference_last")
    alt_fails = sum(r.verdict != "equal" for r in alt)
    ok = all(results["orbit"])
    detail = (f"orbit oracle contained in T.J' for {sum(results['orbit'])}/{len(results['orbit'])} points; "
              f"difference_last parse breaks equality on {alt_fails}/{len(alt)} while containment is "
              f"parse-free | diagnostic, vertex-fixing oracle: {sum(results['vertex'])}/{len(results['vertex'])}")
    return report(3, ok, detail, time.time() - t, 60)


def criterion_4() -> bool:
    t = time.time()
    reps = [r for ext in Q2_EXTS for n in range(3) for r in verify_lemma_j(ext, n)]
    bad = [r for r in reps if not r.equal]
    kinds = sorted({f"{r.ext}@n={r.n}:{r.target}({r.stabilizer_size} vs {r.target_size})" for r in bad})
    detail = f"{len(reps) - len(bad)}/{len(reps)} ball stabilizers match"
    if kinds:
        detail += f"; mismatches {', '.join(kinds[:4])}{' ...' if len(kinds) > 4 else ''}"
    return report(4, not bad, detail, time.time() - t, 60)


def criterion_5() -> bool:
    t = time.time()
    checks = []
    for ext in Q2_EXTS:
        checks += [norm_fiber_check(ext, n) for n in (1, 2, 3)]
        if ext.ramified:
            checks += norm_kernel_check(ext, 3)
    bad = [c.name for c in checks if not c.holds]
    return report(5, not bad, f"{len(checks) - len(bad)}/{len(checks)} norm checks hold {bad or ''}",
                  time.time() - t, 30)


def criterion_6() -> bool:
    t = time.time()
    recs = []
    for ext in Q2_EXTS:
        if not ext.ramified:
            continue
        recs += [check_dilation(ext, 3), check_galois(ext, 4), check_barbs(ext, 4)]
    bad = [f"{r['ext']}:{r['check']}" for r in recs if not r["holds"]]
    barbs = sorted({(r["ext"], r["measured"]) for r in recs if r["check"] == "barbs"})
    return report(6, not bad, f"{len(recs) - len(bad)}/{len(recs)} checks hold; barb diameters {barbs} {bad or ''}",
                  time.time() - t, 30)


def criterion_7() -> bool:
    t = time.time()
    recs = filtration_records(Q2.with_precision(3), 2)
    bad = [r for r in recs if not r["holds"]]
    detail = f"{len(recs) - len(bad)}/{len(recs)} identities hold"
    if bad:
        detail += "; failing " + ", ".join(
            f"{r['identity']} (sizes {r['sizes'][0]} vs {r['sizes'][1]}, K in J: {r.get('K_in_J')})" for r in bad)
    return report(7, not bad, detail, time.time() - t, 30)


MUTATIONS = ([Mutation(params={k: s}) for k in ("m", "t", "eps", "delta") for s in (1, -1)]
             + [Mutation(bounds={k: s}) for k in "ABCD" for s in (1, -1)])


def criterion_8() -> bool:
    # Measured against the vertex-fixing oracle, where the unmutated closed form
    # agrees everywhere; with the orbit oracle every mutation would "fail" trivially.
    t = time.time()
    base = theorem_runs(Q2_EXTS, "vertex")
    baseline_ok = all(r.verdict == "equal" for r in base)
    caught, missed = [], []
    for mut in MUTATIONS:
        reps = theorem_runs(Q2_EXTS, "vertex", mutation=mut)
        (caught if any(r.verdict != "equal" for r in reps) else missed).append(mut.label())
    ok = baseline_ok and not missed
    detail = f"baseline equal: {baseline_ok}; detected {len(caught)}/{len(MUTATIONS)} {caught}; undetected {missed}"
    return report(8, ok, detail, time.time() - t, 300)


def criterion_9() -> bool:
    t = time.time()
    F = parse_base("q2sqrt2", 12)
    exts = [make_extension(F, d) for d in classify_extensions(F) if d.kind == "ramified"]
    reps = theorem_runs(exts, "orbit", levels=1, N=3)
    eq = all(r.verdict == "equal" for r in reps)
    tan = all(tan_containment(r.point, 3, "orbit", r.oracle_set).holds for r in reps)
    lj = [r for ext in exts for n in (0, 1) for r in verify_lemma_j(ext, n, 3)]
    lj_ok = all(r.equal for r in lj)
    deltas = sorted({r.params.delta for r in reps})
    detail = (f"{len(exts)} ramified E over Q2(sqrt2): theorem {tally(reps)}; containment {tan}; "
              f"ball stabilizers {sum(r.equal for r in lj)}/{len(lj)}; del values {deltas}; "
              f"m values {sorted({r.params.m for r in reps})}")
    return report(9, eq and tan and lj_ok, detail, time.time() - t, 600)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


@pytest.mark.parametrize("k", range(1, 10))
def test_criterion(k):
    assert CRITERIA[k - 1](), LINES[k]


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
