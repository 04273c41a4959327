"""PILLAR-style queries: LCE, reverse LCE, internal pattern matching, periods, run extension."""

import numpy as np

from .errors import EmptyPattern
from .packed_text import PackedText
from .structures import ArithmeticProgression, Run
from .suffix import SparseTable, lcp_array, suffix_array

LIST_LIMIT = 1 << 21


class _Side:
    """Suffix ranks plus LCP range minima for one direction of the text."""

    def __init__(self, codes: np.ndarray):
        n = len(codes)
        self.n = n
        self.sa = suffix_array(codes)
        rank = np.empty(n, dtype=np.int64)
        rank[self.sa] = np.arange(n, dtype=np.int64)
        self.rank_arr = rank
        self.lcp = lcp_array(codes, self.sa, rank)
        small = n <= LIST_LIMIT
        self.rank = rank.tolist() if small else rank
        self.rmq = SparseTable(self.lcp, as_lists=small)

    def lce(self, i, j):
        n = self.n
        if i == j:
            return n - i
        if i >= n or j >= n:
            return 0
        ri, rj = self.rank[i], self.rank[j]
        if ri > rj:
            ri, rj = rj, ri
        return int(self.rmq.min(ri + 1, rj))


class QueryIndex:
    """Suffix-array backed index over T and its reverse."""

    def __init__(self, text):
        if isinstance(text, PackedText):
            codes = text.decode().astype(np.int64)
            self.sigma = text.sigma
        else:
            if isinstance(text, str):
                text = text.encode("latin-1")
            codes = np.frombuffer(bytes(text), dtype=np.uint8).astype(np.int64)
            self.sigma = int(codes.max()) + 1 if len(codes) else 1
        if self.sigma > 256:
            raise ValueError("the index supports alphabets of at most 256 symbols")
        self.n = len(codes)
        self.codes = codes
        self.text = codes.astype(np.uint8).tobytes()
        self.fwd = _Side(codes)
        self.rev = _Side(codes[::-1].copy())

    # -- basic queries -------------------------------------------------
    def access(self, i):
        return self.text[i]

    def lce(self, i, j):
        return self.fwd.lce(i, j)

    def lce_rev(self, i, j):
        """Longest common suffix of T[0..i] and T[0..j]."""
        if i < 0 or j < 0:
            return 0
        m = self.n - 1
        return self.rev.lce(m - i, m - j)

    def rank(self, i):
        return self.fwd.rank[i]

    def suffix_compare(self, i, j):
        if i == j:
            return 0
        if i == self.n:
            return -1
        if j == self.n:
            return 1
        return -1 if self.fwd.rank[i] < self.fwd.rank[j] else 1

    # -- derived queries ----------------------------------------------
    def two_period(self, a, b):
        """per(T[a..b)) if it is at most (b-a)/2, else None."""
        L = b - a
        if L < 2:
            return None
        m = (L + 1) // 2
        pos = self.text.find(self.text[a:a + m], a + 1, b)
        if pos < 0:
            return None
        d = pos - a
        if self.lce(a, pos) >= L - d:
            return d
        return None

    def ipm(self, x, y, u, v):
        """Occurrences of T[x..y) starting inside T[u..v), for v-u < 2(y-x)."""
        m = y - x
        if m <= 0:
            raise EmptyPattern("empty pattern")
        if v - u >= 2 * m:
            raise ValueError("window must be shorter than twice the pattern")
        if v - u < m:
            return []
        t = self.text
        pos = t.find(t[x:y], u, v)
        if pos < 0:
            return []
        nxt = t.find(t[x:y], pos + 1, v)
        if nxt < 0:
            return [ArithmeticProgression(pos, 1, 1)]
        # two occurrences closer than |pat| apart: the pattern is periodic with
        # period d = nxt - pos and the occurrences continue along the run
        d = nxt - pos
        ext = d + self.lce(pos, pos + d)
        count = min((ext - m) // d, (v - m - pos) // d) + 1
        if count == 2 and self.two_period(x, y) != d:
            # a lone pair need not be spaced by per(pat)
            return [ArithmeticProgression(pos, 1, 1), ArithmeticProgression(nxt, 1, 1)]
        return [ArithmeticProgression(pos, count, d)]

    def gamma(self, i, p):
        """The run with smallest period p containing T[i..i+p), if any."""
        n = self.n
        if i < 0 or p < 1 or i + p > n:
            return None
        r = self.lce(i, i + p)
        l = self.lce_rev(i - 1, i + p - 1) if i > 0 else 0
        start = i - l
        end = i + p + r - 1
        if end - start + 1 < 2 * p:
            return None
        # per(F) = p iff the period-length root is primitive
        if p > 1 and self.two_period(start, start + 2 * p) != p:
            return None
        return Run(start, end, p)


class NaiveIndex:
    """Same interface as QueryIndex, answered by direct scanning."""

    def __init__(self, text):
        if isinstance(text, PackedText):
            text = text.to_bytes()
        if isinstance(text, str):
            text = text.encode("latin-1")
        self.text = bytes(text)
        self.n = len(self.text)

    def access(self, i):
        return self.text[i]

    def lce(self, i, j):
        t, n = self.text, self.n
        k = 0
        while i + k < n and j + k < n and t[i + k] == t[j + k]:
            k += 1
        return k

    def lce_rev(self, i, j):
        t = self.text
        k = 0
        while i - k >= 0 and j - k >= 0 and t[i - k] == t[j - k]:
            k += 1
        return k

    def suffix_compare(self, i, j):
        a, b = self.text[i:], self.text[j:]
        return (a > b) - (a < b)

    def two_period(self, a, b):
        s = self.text[a:b]
        for p in range(1, len(s) // 2 + 1):
            if s[p:] == s[:-p]:
                return p
        return None

    def ipm(self, x, y, u, v):
        m = y - x
        if m <= 0:
            raise EmptyPattern("empty pattern")
        pat = self.text[x:y]
        occ = [j for j in range(u, v - m + 1) if self.text[j:j + m] == pat]
        return progressions(occ, self.two_period(x, y))

    def gamma(self, i, p):
        t, n = self.text, self.n
        if i < 0 or p < 1 or i + p > n:
            return None
        s = i
        while s > 0 and t[s - 1] == t[s - 1 + p]:
            s -= 1
        e = i + p - 1
        while e + 1 < n and t[e + 1] == t[e + 1 - p]:
            e += 1
        if e - s + 1 < 2 * p:
            return None
        if self.two_period(s, e + 1) != p:
            return None
        return Run(s, e, p)


def progressions(positions, period):
    """Cut a sorted position list into maximal progressions with step `period`."""
    return merge_progressions([ArithmeticProgression(j, 1, 1) for j in sorted(positions)], period)


def merge_progressions(progs, period):
    """Join progressions whose elements continue one another with step `period`.

    Inputs must be sorted and cover disjoint position ranges.
    """
    out = []
    for p in progs:
        if not p.count:
            continue
        if out and period:
            q = out[-1]
            if (p.first - q.last == period and (q.count == 1 or q.difference == period)
                    and (p.count == 1 or p.difference == period)):
                out[-1] = ArithmeticProgression(q.first, q.count + p.count, period)
                continue
        out.append(p)
    return out
