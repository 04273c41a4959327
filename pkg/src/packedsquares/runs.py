"""Runs as a disjoint union of explicit runs, clusters and pyramid regular layers."""

import numpy as np

from .packed_text import PackedText, TauConfig
from .pillar import merge_progressions
from .pyramids import MIN_LAYER, pyramid_canonical, regular_layer_filter
from .radix import radix_argsort
from .structures import ArithmeticProgression, Pyramid, Run, RunCluster, RunsRepr


def minimal_rotation(s) -> int:
    """Booth's algorithm: offset of the lexicographically least rotation."""
    n = len(s)
    if n == 0:
        return 0
    ss = s + s
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        c = ss[j]
        i = f[j - k - 1]
        while i != -1 and c != ss[k + i + 1]:
            if c < ss[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if c != ss[k + i + 1]:
            if c < ss[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


_ROT_CACHE = {}


def lyndon_position(ix, start: int, p: int) -> int:
    """Position in [start..start+p) where the Lyndon root of the run starts."""
    root = ix.text[start:start + p]
    off = _ROT_CACHE.get(root)
    if off is None:
        off = minimal_rotation(root)
        if p <= 64:
            _ROT_CACHE[root] = off
    return start + off


# -- short runs by tabulation ------------------------------------------------

def _runs_in_block(u, pmax, first_hi, min_len_cut):
    """Runs of the block u with period <= pmax, start in [1..first_hi],
    end <= len(u) - 2 and length < min_len_cut."""
    L = len(u)
    out = []
    for p in range(1, pmax + 1):
        i = 0
        while i + p < L:
            if u[i] != u[i + p]:
                i += 1
                continue
            j = i
            while j + p < L and u[j] == u[j + p]:
                j += 1
            s, e = i, j + p - 1
            if e - s + 1 >= 2 * p and 1 <= s <= first_hi and e <= L - 2 and e - s + 1 < min_len_cut:
                seg = u[s:e + 1]
                if all(seg[q:] != seg[:-q] for q in range(1, p)):
                    out.append((s, e, p))
            i = j
    return tuple(out)


def short_runs_tabulated(P: PackedText, cfg: TauConfig, table: dict | None = None) -> list:
    """Clusters of all runs with length < 3 tau - 1 and period <= tau / 3."""
    tau = cfg.tau_runs
    if tau < 3 or P.n == 0:
        return []
    S = P.with_sentinels()
    N = S.n
    h = tau // 2
    Lb = int(3.5 * tau)
    pmax = tau // 3
    if table is None:
        table = {}
    starts = np.arange(0, N, h, dtype=np.int64)
    full = starts[starts + Lb <= N]
    keys = S.extract_blocks(full, Lb) if len(full) else np.zeros(0, dtype=np.uint64)
    uniq, first, inv = np.unique(keys, return_index=True, return_inverse=True)
    groups = {}
    for g, key in enumerate(uniq.tolist()):
        tk = (Lb, key)
        X = table.get(tk)
        if X is None:
            i0 = int(full[first[g]])
            X = _runs_in_block(_block_codes(S, i0, Lb), pmax, h, 3 * tau - 1)
            table[tk] = X
        if X:
            groups[tk] = (X, [])
    if groups:
        order = np.argsort(inv, kind="stable")
        bounds = np.searchsorted(inv[order], np.arange(len(uniq) + 1))
        for g, key in enumerate(uniq.tolist()):
            tk = (Lb, key)
            if tk in groups:
                groups[tk][1].extend(full[order[bounds[g]:bounds[g + 1]]].tolist())
    # truncated blocks at the right end
    for i0 in starts[starts + Lb > N].tolist():
        length = N - i0
        key = (length, S.extract_block(i0, length) if length * S.bits_per_char <= 64
               else tuple(_block_codes(S, i0, length)))
        X = table.get(key)
        if X is None:
            X = _runs_in_block(_block_codes(S, i0, length), pmax, h, 3 * tau - 1)
            table[key] = X
        if X:
            groups.setdefault(key, (X, []))[1].append(i0)
    clusters = []
    for X, occ in groups.values():
        occ.sort()
        d0 = occ[0]
        # block offset s in S coordinates becomes d0 + s - 1 in T coordinates
        base = [Run(d0 + s - 1, d0 + e - 1, p) for s, e, p in X]
        clusters.append(RunCluster(base, [d - d0 for d in occ]))
    clusters.sort(key=lambda c: (c.base_runs[0].start, c.base_runs[0].end))
    return clusters


def _block_codes(S: PackedText, i, length):
    return [S.access(i + t) for t in range(length)]


# -- tau-runs ------------------------------------------------------------------

def tau_runs(P: PackedText, ix, cfg: TauConfig) -> list:
    """Runs with length >= 3 tau - 1 and period <= tau / 3, as (Run, Lyndon position)."""
    tau = cfg.tau_runs
    n = ix.n
    if tau < 3 or n < tau:
        return []
    h = tau // 2
    starts = np.arange(0, n - tau + 1, h, dtype=np.int64)
    if tau * P.bits_per_char <= 64:
        keys = P.extract_blocks(starts, tau)
        uniq, inv = np.unique(keys, return_inverse=True)
        per_of_key = {}
        first = {}
        for idx, g in enumerate(inv.tolist()):
            if g not in first:
                first[g] = int(starts[idx])
        for g, i0 in first.items():
            per_of_key[g] = ix.two_period(i0, i0 + tau)
        periods = [per_of_key[g] for g in inv.tolist()]
    else:
        periods = [ix.two_period(i, i + tau) for i in starts.tolist()]
    found = {}
    for i, p in zip(starts.tolist(), periods):
        if p is None or 3 * p > tau:
            continue
        R = ix.gamma(i, p)
        if R is not None and R.length >= 3 * tau - 1 and R not in found:
            found[R] = lyndon_position(ix, R.start, p)
    return sorted(found.items())


# -- small periods by equality scan ----------------------------------------------

def scan_runs(codes, lo: int, hi: int) -> list:
    """All runs with period in [lo..hi), one numpy pass per period."""
    codes = np.asarray(codes)
    n = len(codes)
    parts = []
    for p in range(1, min(hi, n // 2 + 1)):
        eq = np.concatenate(([False], codes[:-p] == codes[p:], [False]))
        edges = np.flatnonzero(eq[1:] != eq[:-1])
        s, e = edges[0::2], edges[1::2] - 1
        keep = e - s + 1 >= p
        if keep.any():
            s = s[keep]
            parts.append(np.stack((s, e[keep] + p, np.full(len(s), p)), axis=1))
    if not parts:
        return []
    arr = np.concatenate(parts).astype(np.int64)
    # an interval found for p and for a multiple of p is the run of the smaller period
    order = np.lexsort((arr[:, 2], arr[:, 1], arr[:, 0]))
    arr = arr[order]
    first = np.ones(len(arr), dtype=bool)
    first[1:] = (arr[1:, 0] != arr[:-1, 0]) | (arr[1:, 1] != arr[:-1, 1])
    arr = arr[first]
    return [Run(*t) for t in arr[arr[:, 2] >= lo].tolist()]


# -- long runs ---------------------------------------------------------------

def _occurrences(ix, i, k):
    """Occurrences of T[i..i+k) starting in [i..min(i+4k+1, n)) via windows shorter than 2k."""
    n = ix.n
    stop = min(i + 4 * k + 1, n - k + 1)
    progs = []
    u = i
    while u < stop:
        hi = min(u + k, stop)  # starts handled by this tile: [u..hi)
        progs.extend(ix.ipm(i, i + k, u, hi + k - 1))
        u = hi
    return progs


def _emit(ix, R, lo, hi, runs, pyramids):
    if R is None or not lo <= R.period < hi:
        return
    py = regular_layer_filter(ix, R)
    if py is None:
        runs.append(R)
    else:
        pyramids.append(py)


def long_runs_level(P, ix, x: int):
    """Explicit runs and pyramids covering every run with period in [2^x..2^(x+1))."""
    n = ix.n
    k = 1 if x == 0 else 1 << (x - 1)
    lo, hi = 1 << x, 1 << (x + 1)
    runs, pyramids = [], []
    text = ix.text
    for i in range(0, n - k + 1, k):
        if i + lo >= n:
            break
        per = ix.two_period(i, i + k)
        if per is None:
            # only singletons; those at distance [lo..hi) are the candidates
            pat = text[i:i + k]
            j = text.find(pat, i + lo, min(i + hi + k - 1, n))
            while j >= 0:
                _emit(ix, ix.gamma(i, j - i), lo, hi, runs, pyramids)
                j = text.find(pat, j + 1, min(i + hi + k - 1, n))
            continue
        progs = merge_progressions(_occurrences(ix, i, k), per)
        for pr in progs:
            if pr.count == 1 or pr.difference != per:
                for j in pr.positions():
                    if lo <= j - i < hi:
                        _emit(ix, ix.gamma(i, j - i), lo, hi, runs, pyramids)
                continue
            j = pr.first
            Fp = ix.gamma(j, per)
            if Fp.start <= i <= Fp.end:
                continue  # case I
            if lo <= j - i < hi:
                _emit(ix, ix.gamma(i, j - i), lo, hi, runs, pyramids)
            F = ix.gamma(i, per)
            _emit(ix, ix.gamma(F.start, Fp.start - F.start), lo, hi, runs, pyramids)
            _emit(ix, ix.gamma(F.end, Fp.end - F.end), lo, hi, runs, pyramids)
            if Fp.start <= F.end + 1:
                py = pyramid_canonical(ix, F, Fp)
                if py is None:
                    continue
                p, d = py.p, py.delta
                kk = max(py.k_min, -(-(lo - d) // p))
                if kk <= py.k_max and kk * p + d < hi:
                    pyramids.append(py)
                if py.max_layer is not None and lo <= py.max_layer.period < hi:
                    runs.append(py.max_layer)
    return runs, pyramids


def dedup_runs(runs, n) -> list:
    if not runs:
        return []
    arr = np.asarray(runs, dtype=np.int64).reshape(-1, 3)
    arr = arr[radix_argsort([arr[:, 0], arr[:, 1]], max(n, 1))]
    first = np.ones(len(arr), dtype=bool)
    first[1:] = (arr[1:, 0] != arr[:-1, 0]) | (arr[1:, 1] != arr[:-1, 1])
    return [Run(*t) for t in arr[first].tolist()]


def dedup_pyramids(pyramids, n) -> list:
    if not pyramids:
        return []
    arr = np.asarray([(py.F.start, py.F.end, py.Fp.start, py.Fp.end) for py in pyramids], dtype=np.int64)
    order = radix_argsort([arr[:, c] for c in range(4)], max(n, 1))
    out = []
    last = None
    for idx in order.tolist():
        key = tuple(arr[idx].tolist())
        if key != last:
            out.append(pyramids[idx])
            last = key
    return out


def trim_pyramid(py: Pyramid, q: int) -> Pyramid:
    """Drop regular layers with period < q."""
    p, d = py.F.period, py.delta
    k_min = max(MIN_LAYER, -(-(q - d) // p))
    return Pyramid(py.F, py.Fp, d, k_min, py.k_max, py.max_layer)


def compute_all_runs(P, ix, sync=None, cfg: TauConfig | None = None) -> RunsRepr:
    n = ix.n
    if cfg is None:
        cfg = TauConfig.default(n, P.sigma)
    repr_ = RunsRepr()
    if n < 2:
        return repr_
    q = max(cfg.q_long, cfg.scan_below)
    explicit, pyramids = [], []
    if q > cfg.q_long:
        explicit.extend(scan_runs(ix.codes, cfg.q_long, q))
    for x in range(q.bit_length() - 1, n.bit_length()):
        r, py = long_runs_level(P, ix, x)
        explicit.extend(R for R in r if R.period >= cfg.q_long)
        pyramids.extend(py)
    explicit = dedup_runs(explicit, n)
    pyramids = [trim_pyramid(py, q) for py in dedup_pyramids(pyramids, n)]
    short = tau_runs(P, ix, cfg)
    for R, ell in short:
        repr_.lyndon[R] = ell
    repr_.explicit_runs = sorted([R for R, _ in short] + explicit)
    repr_.clusters = short_runs_tabulated(P, cfg)
    repr_.pyramids = pyramids
    return repr_
