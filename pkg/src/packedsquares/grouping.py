"""Grouping periodic fragments by equal (sparse-)Lyndon roots."""

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyWindow
from .radix import radix_argsort
from .runs import lyndon_position
from .sync import SyncSet, sparse_rank_min

LYNDON = "Lyndon"
SPARSE = "SparseLyndon"


@dataclass
class RootRepr:
    """Fragment = prefix (alpha chars) . root^e . suffix (beta chars); root at root_ref."""
    root_ref: tuple
    e: int
    alpha: int
    beta: int
    kind: str


@dataclass
class RunGroup:
    group_id: int
    members: list = field(default_factory=list)
    kind: str = LYNDON


def root_repr(start, end, p, ell, kind) -> RootRepr:
    alpha = ell - start
    rest = end - ell + 1
    return RootRepr((ell, p), rest // p, alpha, rest % p, kind)


def sparse_lyndon_position(S: SyncSet, start: int, p: int):
    got = sparse_rank_min(S, start, start + p - 1)
    if got is None:
        raise EmptyWindow(f"no synchronising position in [{start}..{start + p})")
    return got


class Rooter:
    """Assigns each periodic fragment a canonical root position and groups equal roots."""

    def __init__(self, ix, sync: SyncSet | None, tau_sync: int):
        self.ix = ix
        self.sync = sync if sync is not None and len(sync) else None
        self.cutoff = 2 * tau_sync

    def kind(self, p):
        return SPARSE if self.sync is not None and p > self.cutoff else LYNDON

    def root_position(self, start, p, hint=None):
        if self.kind(p) == SPARSE:
            # window emptiness depends only on the root, so the fallback stays consistent
            got = sparse_rank_min(self.sync, start, start + p - 1)
            if got is not None:
                return got[0]
        if hint is not None:
            return hint
        return lyndon_position(self.ix, start, p)

    def group(self, starts, periods, ells=None):
        """Group ids (dense, in root order) for fragments given by start and period."""
        m = len(starts)
        if ells is None:
            ells = [self.root_position(s, p) for s, p in zip(starts, periods)]
        if m == 0:
            return np.zeros(0, dtype=np.int64), ells
        ix = self.ix
        pa = np.asarray(periods, dtype=np.int64)
        ea = np.asarray(ells, dtype=np.int64)
        rk = ix.fwd.rank_arr[ea]
        order = radix_argsort([pa, rk], max(ix.n, 1) + 1)
        ps, rs = pa[order], rk[order]
        # adjacent roots in (period, rank) order: lce is a min over a rank range of LCP
        idx = np.minimum(rs + 1, ix.n - 1)
        mins = np.minimum.reduceat(ix.fwd.lcp, idx)[:-1] if m > 1 else np.zeros(0, dtype=np.int64)
        same_p = ps[1:] == ps[:-1]
        same_root = same_p & ((rs[1:] == rs[:-1]) | ((rs[1:] > rs[:-1]) & (mins >= ps[1:])))
        new = np.concatenate(([0], (~same_root).astype(np.int64)))
        gid = np.empty(m, dtype=np.int64)
        gid[order] = np.cumsum(new)
        return gid, ells


def _groups_from_ids(runs, gid, ells, kind_of):
    groups = {}
    for R, g, ell in zip(runs, gid.tolist(), ells):
        kind = kind_of(R.period)
        grp = groups.setdefault(g, RunGroup(g, [], kind))
        grp.members.append((R, root_repr(R.start, R.end, R.period, ell, kind)))
    return [groups[g] for g in sorted(groups)]


def group_small_period(runs, ix, cfg, lyndon_hints=None) -> list:
    """Groups of runs with period <= 2 tau_sync by Lyndon root."""
    rooter = Rooter(ix, None, cfg.tau_sync)
    hints = lyndon_hints or {}
    ells = [hints.get(R) if R in hints else lyndon_position(ix, R.start, R.period) for R in runs]
    gid, ells = rooter.group([R.start for R in runs], [R.period for R in runs], ells)
    return _groups_from_ids(runs, gid, ells, lambda p: LYNDON)


def group_large_period(runs, S: SyncSet, ix) -> list:
    """Groups of runs with period > 2 tau by sparse-Lyndon root."""
    rooter = Rooter(ix, S, S.tau)
    ells = [sparse_lyndon_position(S, R.start, R.period)[0] for R in runs]
    gid, ells = rooter.group([R.start for R in runs], [R.period for R in runs], ells)
    return _groups_from_ids(runs, gid, ells, lambda p: SPARSE)
