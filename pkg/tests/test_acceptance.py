"""Acceptance gate: one PASS/FAIL line per criterion.

Run with `pytest tests/test_acceptance.py -v`; the lines are printed even when
output capture is on. Criteria 2, 3 and 6 take several minutes each.
"""

import random
import time

import numpy as np
import pytest

from helpers import abba, all_strings, fib, thue_morse
from packedsquares.counting import (analyze, count_distinct_squares, count_powers, pyramid_types,
                                    report_squares)
from packedsquares.errors import RootMismatch
from packedsquares.grouping import Rooter
from packedsquares.oracle import (classify_square, linear_runs, min_rotation, naive_distinct_squares,
                                  naive_powers, naive_pyramid, naive_runs, naive_square_counts,
                                  runs_based_distinct_squares, squares_from_runs_of, validate_sync)
from packedsquares.packed_text import TauConfig, encode
from packedsquares.pillar import QueryIndex
from packedsquares.pyramids import layer_special_window, pyramid_canonical
from packedsquares.runs import compute_all_runs, short_runs_tabulated
from packedsquares.structures import Run
from packedsquares.sync import build_sync

# tolerances
EXAMPLE_SECONDS = 1.0          # criterion 1
PIPELINE_SECONDS_1E7 = 10.0    # criterion 6, "single-digit seconds"
TABULATION_SPEEDUP = 4.0       # criterion 6, chars/second ratio
RANDOM_N = 10 ** 5             # criterion 3
SAMPLED_SQUARES = 10 ** 4      # criterion 7

# bound checks gathered along the way for criterion 5
BOUNDS = {"inputs": 0, "violations": []}


@pytest.fixture
def verdict(capsys):
    def say(num, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {num}] {'PASS' if ok else 'FAIL'}: {detail}")
    return say


def note_bounds(t, total, powers=None, n_runs=None):
    n = len(t)
    BOUNDS["inputs"] += 1
    if total > n:
        BOUNDS["violations"].append(("squares", t[:20], total))
    for tt, c in (powers or {}).items():
        if c * (tt - 1) > n:
            BOUNDS["violations"].append((f"powers{tt}", t[:20], c))
    if n_runs is not None and n_runs > n:
        BOUNDS["violations"].append(("runs", t[:20], n_runs))


def test_c1_example_string(verdict):
    count_distinct_squares(encode(abba(4), 2))  # load compiled kernels
    P = encode(abba(1000), 2)
    t0 = time.perf_counter()
    total = count_distinct_squares(P).total
    dt = time.perf_counter() - t0
    t8 = abba(8)
    P8 = encode(t8, 2)
    got = report_squares(P8, count_distinct_squares(P8).total)
    strs = [t8[s:s + 2 * h] for s, h in got]
    same = set(strs) == naive_distinct_squares(t8) and len(strs) == len(set(strs))
    ok = total == 2000 and dt < EXAMPLE_SECONDS and same
    verdict(1, ok, f"m=1000 total={total} in {dt:.3f}s (< {EXAMPLE_SECONDS}s); m=8 report matches oracle: {same}")
    assert ok


def _exhaustive(sigma, n_max):
    bad = []
    count = 0
    for t in all_strings(sigma, n_max):
        P = encode(t, sigma)
        an = analyze(P)
        c = count_distinct_squares(P, None, an)
        ref = naive_square_counts(t)
        pw = {k: count_powers(P, k, None, an) for k in (3, 4)}
        if (c.np, c.plain_p, c.special, c.total) != (ref["np"], ref["plain_p"], ref["special"], ref["total"]):
            bad.append(("counts", t))
        for k, v in pw.items():
            if v != len(naive_powers(t, k)):
                bad.append((f"power{k}", t))
        sq = report_squares(P, c.total, None, an)
        if {t[s:s + 2 * h] for s, h in sq} != naive_distinct_squares(t) or len(sq) != ref["total"]:
            bad.append(("report", t))
        note_bounds(t, c.total, pw, len(an.runs.explicit_runs) + sum(cl.size for cl in an.runs.clusters)
                    + sum(py.n_regular for py in an.runs.pyramids))
        count += 1
    return count, bad


REPORT_ALL = {}


def test_c2_exhaustive(verdict):
    t0 = time.perf_counter()
    n2, bad2 = _exhaustive(2, 16)
    n3, bad3 = _exhaustive(3, 11)
    dt = time.perf_counter() - t0
    bad = bad2 + bad3
    REPORT_ALL["checked"] = n2 + n3
    REPORT_ALL["bad"] = [b for b in bad if b[0] == "report"]
    ok = not [b for b in bad if b[0] != "report"]
    verdict(2, ok, f"{n2} binary + {n3} ternary strings, {len(bad)} mismatches, {dt:.0f}s (expected <= 600s)")
    assert ok, bad[:5]


def _adversarial():
    out = []
    for m in (1000, 5000, 25000):
        out.append(abba(m))
    for k in (9, 40, 300):
        out.append((b"\x00\x00\x01" * k + b"\x00") * (RANDOM_N // (3 * k + 1)))
    out.append(bytes((b"\x00\x00\x01" * 20 + b"\x01") * 1500))
    out.append(b"\x00" * RANDOM_N)
    out.append(b"\x00" * (RANDOM_N // 2) + b"\x01" + b"\x00" * (RANDOM_N // 2))
    for n in (RANDOM_N, RANDOM_N - 1, 65536, 2 ** 15 + 7):
        out.append(thue_morse(n))
    for n in (RANDOM_N, 46368):
        out.append(fib(n))
    rng = random.Random(7)
    while len(out) < 20:
        u = bytes(rng.randrange(2) for _ in range(rng.randint(2, 7)))
        v = bytes(rng.randrange(2) for _ in range(rng.randint(1, 3)))
        blk = u * rng.randint(4, 12) + v
        out.append((blk * (RANDOM_N // len(blk) + 1))[:RANDOM_N])
    return out


def test_c3_random_and_adversarial(verdict):
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    bad = []
    inputs = []
    for i in range(200):
        sigma = (2, 4, 26)[i % 3]
        inputs.append((rng.integers(0, sigma, RANDOM_N, dtype=np.uint8).tobytes(), sigma))
    inputs += [(t, 2) for t in _adversarial()]
    for t, sigma in inputs:
        got = count_distinct_squares(encode(t, sigma)).total
        want = runs_based_distinct_squares(t)
        note_bounds(t, got)
        if got != want:
            bad.append((len(t), sigma, got, want))
    dt = time.perf_counter() - t0
    ok = not bad
    verdict(3, ok, f"{len(inputs)} inputs (200 random + {len(inputs) - 200} adversarial), "
                   f"{len(bad)} mismatches, {dt:.0f}s (expected <= 300s)")
    assert ok, bad[:5]


def _lemma_suites():
    """Violations per invariant, over exhaustive small binary strings."""
    v = {k: 0 for k in ("sync", "roots", "layers", "types", "regular_count", "containment",
                        "special_pyramid", "runs_complete", "squares_from_runs")}
    checked = {k: 0 for k in v}
    for t in all_strings(2, 14, n_min=2):
        runs = [Run(*r) for r in naive_runs(t)]
        if squares_from_runs_of(t, runs) != naive_distinct_squares(t):
            v["squares_from_runs"] += 1
        checked["squares_from_runs"] += 1
        P = encode(t, 2)
        ix = QueryIndex(P)
        for tau in (1, 2, 3):
            if len(t) >= 2 * tau:
                S = build_sync(P, ix, tau)
                v["sync"] += bool(validate_sync(t, S.positions, tau))
                checked["sync"] += 1
        for tau, scan in ((None, 0), (3, 0), (None, 32)):
            rep = compute_all_runs(P, ix, None, TauConfig.default(len(t), 2, tau_runs=tau, scan_below=scan))
            denoted = list(rep.denoted_runs())
            v["runs_complete"] += len(denoted) != len(set(denoted)) or sorted(denoted) != sorted(runs)
            checked["runs_complete"] += 1
        if runs:
            S = build_sync(P, ix, 1)
            gid, _ = Rooter(ix, S, 1).group([R.start for R in runs], [R.period for R in runs])
            roots = [(R.period, min_rotation(t[R.start:R.start + R.period])) for R in runs]
            key = {}
            for g, r in zip(gid.tolist(), roots):
                key.setdefault(g, r)
                v["roots"] += key[g] != r
            v["roots"] += len(key) != len(set(roots))
            checked["roots"] += 1
    # pyramids need a special square, which first appears at length 18
    for t in all_strings(2, 18, n_min=18):
        specials = {sq for sq in naive_distinct_squares(t) if classify_square(sq) == "special"}
        if not specials:
            continue
        _pyramid_checks(t, specials, v, checked)
    for t in _lemma_extra():
        specials = {sq for sq in naive_distinct_squares(t) if classify_square(sq) == "special"}
        _pyramid_checks(t, specials, v, checked)
    return v, checked


def _lemma_extra():
    rng = random.Random(11)
    out = [bytes(b"\x00\x00\x01" * 9 + b"\x00" + b"\x00\x00\x01" * 9), abba(12),
           bytes(b"\x00\x01" * 9 + b"\x00" + b"\x00\x01" * 9)]
    for _ in range(300):
        out.append(_periodic(rng))
    # several runs of one root split by short gaps: many pyramids sharing a root
    for _ in range(600):
        u = rng.choice([b"\x00\x01", b"\x00\x00\x01", b"\x00\x01\x01", b"\x00\x01\x00\x01\x01"])
        s = b""
        for _ in range(rng.randint(2, 5)):
            s += u * rng.randint(4, 9) + bytes(rng.randrange(2) for _ in range(rng.randint(0, 2)))
        out.append(s[:160])
    return out


def _periodic(rng):
    s = b""
    for _ in range(rng.randint(1, 4)):
        u = bytes(rng.randrange(2) for _ in range(rng.randint(1, 4)))
        v = bytes(rng.randrange(2) for _ in range(rng.randint(0, 3)))
        s += (u * rng.randint(1, 7) + v) * rng.randint(1, 5)
    return s[:90] or b"\x00"


def _layer_squares(t, py, R):
    lo, hi = layer_special_window(py, R)
    y = R.period
    return {t[py.Fp.start + u - y:py.Fp.start + u + y] for u in range(lo, hi + 1)}


def _pyramid_checks(t, specials, v, checked):
    ix = QueryIndex(t)
    runs = naive_runs(t)
    for F in runs:
        for G in runs:
            if F[2] == G[2] and F[0] < G[0] <= F[1] + 1 < G[1] + 1:
                ref = {Run(*r) for r in naive_pyramid(t, F, G, runs)}
                try:
                    py = pyramid_canonical(ix, Run(*F), Run(*G))
                except RootMismatch:
                    py = None
                got = set(py.layers()) if py is not None else set()
                v["layers"] += got != ref or py is not None and any(
                    py.layer(k).period != k * py.p + py.delta for k in range(py.k_min, py.k_max + 1))
                checked["layers"] += 1
    sigma = max(t) + 1
    an = analyze(encode(t, sigma), TauConfig.default(len(t), sigma, scan_below=0))
    # untrimmed canonical forms, so every regular layer is present
    pys = [pyramid_canonical(an.ix, py.F, py.Fp) for py in an.pyramids]
    an.pyramids = pys
    types = pyramid_types(an)
    got = set()
    regs, alls = [], []
    for py in pys:
        reg = set()
        for R in py.regular_layers():
            reg |= _layer_squares(t, py, R)
        full = set(reg)
        if py.max_layer is not None:
            full |= _layer_squares(t, py, py.max_layer)
        v["regular_count"] += len(reg) != py.n_regular * (py.overlap + 1)
        checked["regular_count"] += 1
        regs.append(reg)
        alls.append(full)
        got |= full
    v["special_pyramid"] += got != specials
    checked["special_pyramid"] += 1
    for a in range(len(pys)):
        for b in range(a + 1, len(pys)):
            if types[a] != types[b]:
                v["types"] += bool(alls[a] & alls[b])
                checked["types"] += 1
            else:
                small, tall = sorted((a, b), key=lambda i: pys[i].k_max)
                v["containment"] += not regs[small] <= regs[tall]
                checked["containment"] += 1


def test_c4_lemma_suites(verdict):
    t0 = time.perf_counter()
    v, checked = _lemma_suites()
    dt = time.perf_counter() - t0
    ok = not any(v.values())
    summary = ", ".join(f"{k}={v[k]}/{checked[k]}" for k in v)
    verdict(4, ok, f"violations/checks: {summary} ({dt:.0f}s)")
    assert ok, v


def test_c5_bounds(verdict):
    if BOUNDS["inputs"] == 0:
        for t in list(all_strings(2, 12)) + [fib(5000), thue_morse(5000), abba(2500)]:
            P = encode(t, 2)
            c = count_distinct_squares(P).total
            note_bounds(t, c, {k: count_powers(P, k) for k in (3, 4)}, len(linear_runs(t)))
    rng = random.Random(5)
    for _ in range(200):
        t = _periodic(rng) * rng.randint(1, 30)
        P = encode(t, 2)
        note_bounds(t, count_distinct_squares(P).total, {k: count_powers(P, k) for k in (3, 4, 5)},
                    len(linear_runs(t)))
    ok = not BOUNDS["violations"]
    verdict(5, ok, f"{BOUNDS['inputs']} inputs, {len(BOUNDS['violations'])} bound violations "
                   "(squares <= n, t-powers <= n/(t-1), runs <= n)")
    assert ok, BOUNDS["violations"][:5]


def test_c6_performance(verdict):
    n = 10 ** 7
    raw = np.random.default_rng(1).integers(0, 2, n, dtype=np.uint8).tobytes()
    P = encode(raw, 2)
    t0 = time.perf_counter()
    cfg = TauConfig.default(n, 2, tau_runs=3)
    short_runs_tabulated(P, cfg)
    tab_rate = n / (time.perf_counter() - t0)
    m = 10 ** 6
    t0 = time.perf_counter()
    linear_runs(raw[:m])
    oracle_rate = m / (time.perf_counter() - t0)
    t0 = time.perf_counter()
    count_distinct_squares(P)
    dt = time.perf_counter() - t0
    speedup = tab_rate / oracle_rate
    ok = dt < PIPELINE_SECONDS_1E7 and speedup >= TABULATION_SPEEDUP
    verdict(6, ok, f"n=1e7 pipeline {dt:.1f}s (target < {PIPELINE_SECONDS_1E7:.0f}s); tabulation "
                   f"{tab_rate:.3g} chars/s vs byte oracle {oracle_rate:.3g} chars/s = {speedup:.1f}x "
                   f"(target >= {TABULATION_SPEEDUP:.0f}x)")
    assert ok


def test_c7_report_soundness(verdict):
    if "checked" not in REPORT_ALL:
        bad = []
        for t in all_strings(2, 12):
            P = encode(t, 2)
            sq = report_squares(P, count_distinct_squares(P).total)
            if {t[s:s + 2 * h] for s, h in sq} != naive_distinct_squares(t):
                bad.append(t)
        REPORT_ALL.update(checked=2 ** 13 - 2, bad=bad)
    rng = random.Random(3)
    big_bad = 0
    sampled = 0
    inputs = [fib(RANDOM_N), abba(RANDOM_N // 4),
              np.random.default_rng(9).integers(0, 2, RANDOM_N, dtype=np.uint8).tobytes()]
    for t in inputs:
        P = encode(t, 2)
        total = count_distinct_squares(P).total
        sq = report_squares(P, total)
        pick = rng.sample(sq, min(SAMPLED_SQUARES, len(sq)))
        sampled += len(pick)
        ix = QueryIndex(t)
        if any(ix.lce(s, s + h) < h for s, h in pick):
            big_bad += 1
        # equal strings share a length and sit next to each other in suffix order
        keyed = sorted(pick, key=lambda x: (x[1], ix.rank(x[0])))
        for (s1, h1), (s2, h2) in zip(keyed, keyed[1:]):
            if h1 == h2 and ix.lce(s1, s2) >= 2 * h1:
                big_bad += 1
    ok = not REPORT_ALL["bad"] and not big_bad
    verdict(7, ok, f"k=total exact on {REPORT_ALL['checked']} small strings ({len(REPORT_ALL['bad'])} bad); "
                   f"{sampled} sampled large-input squares, {big_bad} not distinct or not squares")
    assert ok
