"""Brute-force references. Nothing here is shared with the counting pipeline."""

from collections import namedtuple

import numpy as np

from .errors import InputTooLarge

NAIVE_CAP = 3000
RUNS_CAP = 10 ** 6

OracleRun = namedtuple("OracleRun", "start end period")


def _as_bytes(raw):
    if isinstance(raw, str):
        return raw.encode("latin-1")
    return bytes(raw)


def smallest_period(s) -> int:
    n = len(s)
    for p in range(1, n):
        if s[p:] == s[:-p]:
            return p
    return n


def is_primitive(s) -> bool:
    return len(s) > 0 and (s + s).find(s, 1) == len(s)


def min_rotation(s):
    return min(s[i:] + s[:i] for i in range(len(s))) if s else s


def classify_square(sq) -> str:
    """'np', 'special' or 'plain_p' for a square string XX."""
    x = sq[: len(sq) // 2]
    if not is_primitive(x):
        return "np"
    if 4 * smallest_period(x) <= len(x):
        return "special"
    return "plain_p"


def naive_distinct_squares(raw, cap: int = NAIVE_CAP) -> set:
    t = _as_bytes(raw)
    n = len(t)
    if n > cap:
        raise InputTooLarge(f"n={n} exceeds the oracle cap {cap}")
    out = set()
    if n <= 64:
        for l in range(1, n // 2 + 1):
            for i in range(n - 2 * l + 1):
                if t[i:i + l] == t[i + l:i + 2 * l]:
                    out.add(t[i:i + 2 * l])
        return out
    a = np.frombuffer(t, dtype=np.uint8)
    for l in range(1, n // 2 + 1):
        eq = np.concatenate(([0], np.cumsum(a[:-l] == a[l:])))
        # square at i iff positions i..i+l-1 all match their l-shift
        hits = np.flatnonzero(eq[l:n - l + 1] - eq[: n - 2 * l + 1] == l)
        for i in hits.tolist():
            out.add(t[i:i + 2 * l])
    return out


def naive_square_counts(raw, cap: int = NAIVE_CAP) -> dict:
    counts = {"np": 0, "plain_p": 0, "special": 0}
    for sq in naive_distinct_squares(raw, cap):
        counts[classify_square(sq)] += 1
    counts["total"] = counts["np"] + counts["plain_p"] + counts["special"]
    return counts


def naive_powers(raw, t: int, cap: int = NAIVE_CAP) -> set:
    s = _as_bytes(raw)
    n = len(s)
    if n > cap:
        raise InputTooLarge(f"n={n} exceeds the oracle cap {cap}")
    out = set()
    for l in range(1, n // t + 1):
        for i in range(n - t * l + 1):
            if s[i:i + (t - 1) * l] == s[i + l:i + t * l]:
                out.add(s[i:i + t * l])
    return out


def naive_runs(raw, cap: int = NAIVE_CAP) -> list:
    """Every run, found by scanning maximal stretches of t[i] == t[i+p]."""
    t = _as_bytes(raw)
    n = len(t)
    if n > cap:
        raise InputTooLarge(f"n={n} exceeds the oracle cap {cap}")
    out = []
    for p in range(1, n // 2 + 1):
        i = 0
        while i + p < n:
            if t[i] != t[i + p]:
                i += 1
                continue
            j = i
            while j + p < n and t[j] == t[j + p]:
                j += 1
            start, end = i, j + p - 1
            if end - start + 1 >= 2 * p and smallest_period(t[start:end + 1]) == p:
                out.append(OracleRun(start, end, p))
            i = j
    out.sort()
    return out


# -- suffix structures used by the medium-scale oracles -------------------

def _suffix_ranks(a: np.ndarray) -> np.ndarray:
    n = len(a)
    rank = a.astype(np.int64)
    k = 1
    while True:
        nxt = np.full(n, -1, dtype=np.int64)
        nxt[: max(n - k, 0)] = rank[k:]
        order = np.lexsort((nxt, rank))
        r1, r2 = rank[order], nxt[order]
        new = np.empty(n, dtype=np.int64)
        brk = np.ones(n, dtype=bool)
        brk[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        new[order] = np.cumsum(brk) - 1
        rank = new
        if n == 0 or rank.max() == n - 1 or k >= n:
            return rank
        k *= 2


class _LCE:
    def __init__(self, t: bytes):
        a = np.frombuffer(t, dtype=np.uint8)
        n = len(a)
        self.n = n
        self.rank = _suffix_ranks(a) if n else np.zeros(0, dtype=np.int64)
        sa = np.empty(n, dtype=np.int64)
        sa[self.rank] = np.arange(n)
        self.sa = sa
        lcp = [0] * n
        h = 0
        rk = self.rank.tolist()
        sl = sa.tolist()
        for i in range(n):
            r = rk[i]
            if r == 0:
                h = 0
                continue
            j = sl[r - 1]
            while i + h < n and j + h < n and t[i + h] == t[j + h]:
                h += 1
            lcp[r] = h
            if h:
                h -= 1
        self.table = [np.asarray(lcp, dtype=np.int64)]
        k = 1
        while (1 << k) <= n:
            prev = self.table[-1]
            h2 = 1 << (k - 1)
            self.table.append(np.minimum(prev[:-h2], prev[h2:]))
            k += 1

    def many(self, i, j):
        """Vectorised LCE of suffix pairs (i[x], j[x]); all positions < n."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        out = np.empty(len(i), dtype=np.int64)
        same = i == j
        out[same] = self.n - i[same]
        ri, rj = self.rank[i[~same]], self.rank[j[~same]]
        lo = np.minimum(ri, rj) + 1
        hi = np.maximum(ri, rj)
        if len(lo):
            k = np.floor(np.log2(hi - lo + 1)).astype(np.int64)
            res = np.empty(len(lo), dtype=np.int64)
            for kk in np.unique(k):
                sel = k == kk
                tab = self.table[kk]
                res[sel] = np.minimum(tab[lo[sel]], tab[hi[sel] - (1 << kk) + 1])
            out[~same] = res
        return out


def _lyndon_array(rank: np.ndarray) -> list:
    """Length of the longest Lyndon word starting at each position (next smaller value)."""
    n = len(rank)
    rk = rank.tolist()
    nxt = [n] * n
    stack = []
    for i in range(n):
        while stack and rk[stack[-1]] > rk[i]:
            nxt[stack.pop()] = i
        stack.append(i)
    return [nxt[i] - i for i in range(n)]


def linear_runs(raw, cap: int = RUNS_CAP) -> list:
    """Runs from Lyndon roots under both character orders."""
    t = _as_bytes(raw)
    n = len(t)
    if n > cap:
        raise InputTooLarge(f"n={n} exceeds the oracle cap {cap}")
    if n < 2:
        return []
    a = np.frombuffer(t, dtype=np.uint8).astype(np.int64)
    fwd = _LCE(t)
    rev = _LCE(t[::-1])
    cand_i, cand_p = [], []
    for order in (a, 255 - a):
        # a trailing sentinel smaller than every character in this order
        rank = _suffix_ranks(np.concatenate((order + 1, [0])))[:n]
        lyn = _lyndon_array(rank)
        cand_i.extend(range(n))
        cand_p.extend(lyn)
    ci = np.asarray(cand_i, dtype=np.int64)
    cp = np.asarray(cand_p, dtype=np.int64)
    ok = ci + cp < n
    ci, cp = ci[ok], cp[ok]
    r = fwd.many(ci, ci + cp)
    left = np.zeros(len(ci), dtype=np.int64)
    has_left = ci > 0
    li = n - 1 - (ci[has_left] - 1)
    lj = n - 1 - (ci[has_left] + cp[has_left] - 1)
    left[has_left] = rev.many(li, lj)
    start = ci - left
    end = ci + cp + r - 1
    ok = end - start + 1 >= 2 * cp
    found = set(zip(start[ok].tolist(), end[ok].tolist(), cp[ok].tolist()))
    # keep only the smallest period per extent
    best = {}
    for s, e, p in found:
        if (s, e) not in best or p < best[(s, e)]:
            best[(s, e)] = p
    return sorted(OracleRun(s, e, p) for (s, e), p in best.items())


def runs_based_distinct_squares(raw, cap: int = RUNS_CAP, runs=None) -> int:
    """Count distinct squares by enumerating, per run, one occurrence of each rotation."""
    t = _as_bytes(raw)
    n = len(t)
    if n > cap:
        raise InputTooLarge(f"n={n} exceeds the oracle cap {cap}")
    if runs is None:
        runs = linear_runs(t, cap)
    starts, lens = [], []
    for s0, e0, p in runs:
        L = e0 - s0 + 1
        m = 1
        while 2 * m * p <= L:
            cnt = min(p, L - 2 * m * p + 1)
            starts.append(np.arange(s0, s0 + cnt, dtype=np.int64))
            lens.append(np.full(cnt, 2 * m * p, dtype=np.int64))
            m += 1
    if not starts:
        return 0
    s = np.concatenate(starts)
    ln = np.concatenate(lens)
    idx = _LCE(t)
    order = np.lexsort((idx.rank[s], ln))
    s, ln = s[order], ln[order]
    same_len = ln[1:] == ln[:-1]
    lce = np.zeros(len(s) - 1, dtype=np.int64)
    if same_len.any():
        lce[same_len] = idx.many(s[:-1][same_len], s[1:][same_len])
    dup = same_len & (lce >= ln[1:])
    return int(len(s) - dup.sum())


def squares_from_runs_of(raw, runs) -> set:
    """Every square string generated by the given runs (for small inputs)."""
    t = _as_bytes(raw)
    out = set()
    for s0, e0, p in runs:
        L = e0 - s0 + 1
        m = 1
        while 2 * m * p <= L:
            for s in range(s0, e0 - 2 * m * p + 2):
                out.add(t[s:s + 2 * m * p])
            m += 1
    return out


def subper(raw, run) -> int:
    t = _as_bytes(raw)
    s0, e0, p = run
    best = p
    for s in range(s0, e0 - 2 * p + 2):
        best = min(best, smallest_period(t[s:s + p]))
    return best


def naive_pyramid(raw, F, Fp, runs=None) -> set:
    """All runs R with subper(R) = p <= per(R)/4 and |R cap (F u Fp)| >= 2 per(R)."""
    t = _as_bytes(raw)
    if runs is None:
        runs = naive_runs(t)
    p = F[2]
    if Fp[2] != p or min_rotation(t[F[0]:F[0] + p]) != min_rotation(t[Fp[0]:Fp[0] + p]):
        return set()
    lo, hi = min(F[0], Fp[0]), max(F[1], Fp[1])
    out = set()
    for R in runs:
        P = R[2]
        if 4 * p > P:
            continue
        if min(R[1], hi) - max(R[0], lo) + 1 < 2 * P:
            continue
        if subper(t, R) == p:
            out.add(OracleRun(*R))
    return out


def validate_sync(raw, positions, tau: int) -> list:
    """Violations of the consistency and density conditions of a tau-synchronizing set."""
    t = _as_bytes(raw)
    n = len(t)
    pos = set(positions)
    bad = []
    limit = n - 2 * tau
    for s in pos:
        if s < 0 or s > limit:
            bad.append(("range", s))
    by_window = {}
    for i in range(0, limit + 1):
        by_window.setdefault(t[i:i + 2 * tau], []).append(i)
    for w, occ in by_window.items():
        flags = {i in pos for i in occ}
        if len(flags) > 1:
            bad.append(("consistency", occ[0]))
    for i in range(0, n - 3 * tau + 2):
        empty = not any(j in pos for j in range(i, i + tau))
        periodic = 3 * smallest_period(t[i:i + 3 * tau - 1]) <= tau
        if empty != periodic:
            bad.append(("density", i))
    return bad
