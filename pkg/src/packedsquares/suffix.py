"""Suffix array, LCP array and sparse-table range minima."""

import numpy as np
from numba import njit


def suffix_array(codes) -> np.ndarray:
    """Prefix doubling: O(n log^2 n) worst case, a handful of rounds on typical input."""
    s = np.asarray(codes, dtype=np.int64)
    n = len(s)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    sa = np.argsort(s, kind="stable")
    srt = s[sa]
    rank = np.empty(n, dtype=np.int64)
    rank[sa] = np.concatenate(([0], np.cumsum(srt[1:] != srt[:-1])))
    k = 1
    while rank[sa[-1]] < n - 1 and k < n:
        second = np.zeros(n, dtype=np.int64)
        second[: n - k] = rank[k:] + 1
        key = rank * (n + 1) + second
        sa = np.argsort(key, kind="stable")
        srt = key[sa]
        rank[sa] = np.concatenate(([0], np.cumsum(srt[1:] != srt[:-1])))
        k <<= 1
    return sa


@njit(cache=True)
def _kasai(s, sa, rank):
    n = len(s)
    lcp = np.zeros(n, dtype=np.int64)
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and s[i + h] == s[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp


def lcp_array(codes, sa, rank) -> np.ndarray:
    """lcp[r] = LCP of the suffixes of rank r-1 and r; lcp[0] = 0."""
    s = np.asarray(codes, dtype=np.int64)
    if len(s) == 0:
        return np.zeros(0, dtype=np.int64)
    return _kasai(s, np.asarray(sa, dtype=np.int64), np.asarray(rank, dtype=np.int64))


BLOCKED_ABOVE = 1 << 21


class SparseTable:
    """O(1) range minimum (and argmin) over a static array.

    Above BLOCKED_ABOVE entries the table is built over minima of 32-entry
    blocks, and queries scan at most two partial blocks.
    """

    B = 32

    def __init__(self, values, with_argmin: bool = False, as_lists: bool = True):
        v = np.asarray(values, dtype=np.int64)
        self.n = len(v)
        self.blocked = self.n > BLOCKED_ABOVE
        if self.blocked:
            B = self.B
            nb = -(-self.n // B)
            pad = np.full(nb * B, np.iinfo(np.int64).max, dtype=np.int64)
            pad[: self.n] = v
            grid = pad.reshape(nb, B)
            self.vals = v
            self.block_arg = grid.argmin(axis=1) + np.arange(nb) * B if with_argmin else None
            self.top = SparseTable(grid.min(axis=1), with_argmin, as_lists=False)
            return
        levels = [v]
        args = [np.arange(self.n, dtype=np.int64)] if with_argmin else None
        j = 1
        while (1 << j) <= self.n:
            prev = levels[-1]
            half = 1 << (j - 1)
            left, right = prev[:-half], prev[half:]
            if with_argmin:
                pa = args[-1]
                take_right = right < left
                args.append(np.where(take_right, pa[half:], pa[:-half]))
            levels.append(np.minimum(left, right))
            j += 1
        if as_lists:
            levels = [lv.tolist() for lv in levels]
            if with_argmin:
                args = [a.tolist() for a in args]
        self.levels = levels
        self.args = args

    def min(self, lo: int, hi: int):
        """Minimum over values[lo..hi] inclusive."""
        if self.blocked:
            return self._blocked_min(lo, hi)
        k = (hi - lo + 1).bit_length() - 1
        lv = self.levels[k]
        a, b = lv[lo], lv[hi - (1 << k) + 1]
        return a if a < b else b

    def argmin(self, lo: int, hi: int):
        """Leftmost position of the minimum over values[lo..hi]."""
        if self.blocked:
            return self._blocked_argmin(lo, hi)
        k = (hi - lo + 1).bit_length() - 1
        lv, ag = self.levels[k], self.args[k]
        j = hi - (1 << k) + 1
        return ag[lo] if lv[lo] <= lv[j] else ag[j]

    def _blocked_min(self, lo, hi):
        lo, hi = int(lo), int(hi)
        B = self.B
        bl, bh = lo // B, hi // B
        if bh - bl <= 1:
            return int(self.vals[lo:hi + 1].min())
        m = min(int(self.vals[lo:(bl + 1) * B].min()), int(self.vals[bh * B:hi + 1].min()))
        return min(m, int(self.top.min(bl + 1, bh - 1)))

    def _blocked_argmin(self, lo, hi):
        lo, hi = int(lo), int(hi)
        B = self.B
        v = self.vals
        bl, bh = lo // B, hi // B
        if bh - bl <= 1:
            return lo + int(v[lo:hi + 1].argmin())
        cands = [lo + int(v[lo:(bl + 1) * B].argmin())]
        cands.append(int(self.block_arg[self.top.argmin(bl + 1, bh - 1)]))
        cands.append(bh * B + int(v[bh * B:hi + 1].argmin()))
        best = cands[0]
        for c in cands[1:]:
            if v[c] < v[best]:
                best = c
        return best
