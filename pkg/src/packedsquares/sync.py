"""tau-synchronizing sets built from length-tau identifier minimisers."""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import TauTooLarge
from .suffix import SparseTable


@dataclass
class SyncSet:
    tau: int
    positions: list
    rank: list
    rmq: SparseTable | None

    def __len__(self):
        return len(self.positions)

    def to_json(self):
        return {"tau": self.tau, "positions": list(self.positions), "rank": list(self.rank)}


def window_ids(ix, tau: int) -> np.ndarray:
    """id(j) = lexicographic class of T[j..j+tau) among all length-tau windows."""
    n = ix.n
    sa, lcp = ix.fwd.sa, ix.fwd.lcp
    new_class = np.ones(n, dtype=bool)
    new_class[1:] = lcp[1:] < tau
    cls = np.cumsum(new_class) - 1
    ids = np.empty(n, dtype=np.int64)
    ids[sa] = cls
    return ids[: n - tau + 1]


def periodic_windows(codes: np.ndarray, tau: int) -> np.ndarray:
    """Mask of j with per(T[j..j+tau)) <= tau/3."""
    n = len(codes)
    m = n - tau + 1
    out = np.zeros(max(m, 0), dtype=bool)
    for d in range(1, tau // 3 + 1):
        eq = np.concatenate(([0], np.cumsum(codes[:-d] == codes[d:])))
        span = tau - d
        # window j has period d iff codes[j+x] == codes[j+x+d] for x < tau - d
        out |= (eq[span:span + m] - eq[:m]) == span
    return out


def build_sync(P, ix, tau: int) -> SyncSet:
    n = ix.n
    if tau < 1 or (n >= 2 and 2 * tau > n):
        raise TauTooLarge(f"tau={tau} needs n >= 2 tau, n={n}")
    if n < 2 * tau:
        return SyncSet(tau, [], [], None)
    ids = window_ids(ix, tau).astype(np.float64)
    ids[periodic_windows(ix.codes, tau)] = np.inf
    last = n - 2 * tau
    wins = sliding_window_view(ids, tau + 1)[: last + 1]
    mins = wins.min(axis=1)
    keep = np.isfinite(mins) & ((mins == ids[: last + 1]) | (mins == ids[tau:tau + last + 1]))
    positions = np.flatnonzero(keep)
    return _with_ranks(ix, tau, positions)


def _with_ranks(ix, tau, positions) -> SyncSet:
    if len(positions) == 0:
        return SyncSet(tau, [], [], None)
    suffix_rank = ix.fwd.rank_arr[positions]
    order = np.argsort(suffix_rank, kind="stable")
    rank = np.empty(len(positions), dtype=np.int64)
    rank[order] = np.arange(len(positions))
    return SyncSet(tau, positions.tolist(), rank.tolist(), SparseTable(rank, with_argmin=True))


def sparse_rank_min(S: SyncSet, lo: int, hi: int):
    """(position, rank) of the lexicographically smallest sync suffix starting in [lo..hi]."""
    a = bisect_left(S.positions, lo)
    b = bisect_right(S.positions, hi) - 1
    if a > b:
        return None
    k = S.rmq.argmin(a, b)
    return S.positions[k], S.rank[k]
