"""Counting distinct squares and t-th powers from the runs representation."""

import gc
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidExponent, KTooLarge, NotNeighboring, RootMismatch
from .grouping import Rooter, RunGroup
from .packed_text import PackedText, TauConfig, encode
from .pillar import QueryIndex
from .pyramids import MIN_LAYER, layer_special_window, pyramid_canonical, pyramid_type
from .radix import radix_argsort
from .runs import compute_all_runs, dedup_pyramids
from .structures import Run
from .sync import build_sync


@dataclass
class SquareCounts:
    np: int = 0
    plain_p: int = 0
    special: int = 0

    @property
    def total(self):
        return self.np + self.plain_p + self.special

    def as_dict(self):
        return {"np": self.np, "plain_p": self.plain_p, "special": self.special}


# -- rotation interval unions ------------------------------------------------

def _intervals(start, end, p, ell, level, t):
    """Cyclic rotation intervals [lo, hi) of rot_c(root)^(t*level) generated by each member.

    Returns (member index, lo, hi) arrays with wrapping intervals split in two.
    """
    L = end - start + 1
    cnt = np.minimum(p, L - t * level * p + 1)
    c0 = (start - ell) % p
    hi = c0 + cnt
    idx = np.arange(len(start))
    wrap = hi > p
    m_idx = np.concatenate((idx, idx[wrap]))
    lo = np.concatenate((c0, np.zeros(int(wrap.sum()), dtype=np.int64)))
    hi2 = np.concatenate((np.minimum(hi, p), (hi - p)[wrap]))
    return m_idx, lo, hi2


def union_sizes(gid, lo, hi, n_groups, universe):
    """Per group, the size of the union of half-open intervals [lo, hi)."""
    out = np.zeros(n_groups, dtype=np.int64)
    if len(gid) == 0:
        return out
    order = radix_argsort([gid, lo], max(n_groups, universe) + 1)
    g, a, b = gid[order], lo[order], hi[order]
    off = g * (universe + 1)
    a = a + off
    b = b + off
    reach = np.maximum.accumulate(b)
    prev = np.concatenate(([np.iinfo(np.int64).min], reach[:-1]))
    contrib = np.maximum(0, b - np.maximum(a, prev))
    np.add.at(out, g, contrib)
    return out


def _top_level_union(members, gid, n_groups, t, top, universe):
    """Union sizes of level-`top[g]` rotation intervals over members attaining it."""
    start, end, p, ell = members
    L = end - start + 1
    e = L // (t * p)
    sel = (e == top[gid]) & (e >= 1)
    m_idx, lo, hi = _intervals(start[sel], end[sel], p[sel], ell[sel], e[sel], t)
    return union_sizes(gid[sel][m_idx], lo, hi, n_groups, universe)


def _group_tops(members, gid, n_groups, t):
    start, end, p, _ = members
    e = (end - start + 1) // (t * p)
    top = np.zeros(n_groups, dtype=np.int64)
    np.maximum.at(top, gid, e)
    per = np.zeros(n_groups, dtype=np.int64)
    per[gid] = p
    return top, per


def count_group(group: RunGroup, t: int = 2):
    """(p_count, np_count) for t = 2; (t-th power count, 0) otherwise."""
    if not group.members:
        return 0, 0
    start = np.array([R.start for R, _ in group.members], dtype=np.int64)
    end = np.array([R.end for R, _ in group.members], dtype=np.int64)
    p = np.array([R.period for R, _ in group.members], dtype=np.int64)
    ell = np.array([rr.root_ref[0] for _, rr in group.members], dtype=np.int64)
    gid = np.zeros(len(start), dtype=np.int64)
    members = (start, end, p, ell)
    universe = int(p.max())
    if t != 2:
        return int(power_counts(members, gid, 1, t, universe).sum()), 0
    return int(p_counts(members, gid, 1, universe)[0]), int(np_counts(members, gid, 1, universe)[0])


def np_counts(members, gid, n_groups, universe):
    top, per = _group_tops(members, gid, n_groups, 2)
    u = _top_level_union(members, gid, n_groups, 2, top, universe)
    return np.where(top >= 2, per * np.maximum(0, top - 2) + u, 0)


def p_counts(members, gid, n_groups, universe):
    top, per = _group_tops(members, gid, n_groups, 2)
    level1 = np.where(top >= 2, 0, 1)
    u = _top_level_union(members, gid, n_groups, 2, level1 * top, universe)
    return np.where(top >= 2, per, u)


def power_counts(members, gid, n_groups, t, universe):
    top, per = _group_tops(members, gid, n_groups, t)
    u = _top_level_union(members, gid, n_groups, t, top, universe)
    return np.where(top >= 1, per * np.maximum(0, top - 1) + u, 0)


# -- subperiodic runs ---------------------------------------------------------

def split_subperiodic(ix, R: Run):
    """Pyramids R belongs to, and the plain fragments of R.

    A square of half per(R) inside R is special exactly when its half lies in
    a run of period at most per(R)/4; such runs are found by sampling windows of
    length ceil(P/2) every floor(P/2) positions.
    """
    P = R.period
    s0, e0 = R.start, R.end
    if P < 2 * MIN_LAYER:
        return [], [R]
    h, w = P // 2, (P + 1) // 2
    pyramids = {}
    covers = []
    q = s0
    last = e0 - P - w + 1
    seen = set()
    while q <= last:
        p1 = ix.two_period(q, q + w)
        if p1 is not None and MIN_LAYER * p1 <= P:
            G = ix.gamma(q, p1)
            if G not in seen:
                seen.add(G)
                covers.append(G)
                G2 = ix.gamma(q + P, p1)
                if G2 is not None and G2 != G and G.start < G2.start <= G.end + 1 < G2.end + 1:
                    key = (G, G2)
                    if key not in pyramids:
                        try:
                            pyramids[key] = pyramid_canonical(ix, G, G2)
                        except (NotNeighboring, RootMismatch):
                            pyramids[key] = None
        q += h
    W = min(P, e0 - s0 - 2 * P + 2)
    if not covers:
        return [], [R]
    special = np.zeros(W, dtype=bool)
    for G in covers:
        lo = max(G.start - s0, 0)
        hi = min(G.end - P + 1 - s0, W - 1)
        if lo <= hi:
            special[lo:hi + 1] = True
    frags = []
    if not special.any():
        frags.append(R)
    else:
        r = 0
        while r < W:
            if special[r]:
                r += 1
                continue
            r2 = r
            while r2 + 1 < W and not special[r2 + 1]:
                r2 += 1
            frags.append(Run(s0 + r, s0 + r2 + 2 * P - 1, P))
            r = r2 + 1
    return [py for py in pyramids.values() if py is not None], frags


def _may_have_special(nonreg, runs):
    """Cheap necessary test for split_subperiodic: some run of exponent >= 4 and
    period <= P/4 overlaps R by at least P positions (regular layers never qualify)."""
    if not nonreg:
        return np.zeros(0, dtype=bool)
    hp = [G for G in runs.explicit_runs if G.length >= 4 * G.period]
    for c in runs.clusters:
        hp.extend(G for G in c.runs() if G.length >= 4 * G.period)
    s, e, P = (np.array(v, dtype=np.int64) for v in zip(*nonreg))
    out = np.zeros(len(nonreg), dtype=bool)
    cand = np.flatnonzero(P >= 2 * MIN_LAYER)
    hp = [G for G in hp if G.length >= 2 * MIN_LAYER]
    if not hp or not len(cand):
        return out
    gs, ge, gp = (np.array(v, dtype=np.int64) for v in zip(*hp))
    if len(cand) <= len(hp):
        for i in cand.tolist():
            ok = (MIN_LAYER * gp <= P[i]) & (np.minimum(ge, e[i]) - np.maximum(gs, s[i]) + 1 >= P[i])
            out[i] = ok.any()
    else:
        cs, ce, cp = s[cand], e[cand], P[cand]
        for j in range(len(gs)):
            ok = (MIN_LAYER * gp[j] <= cp) & (np.minimum(ge[j], ce) - np.maximum(gs[j], cs) + 1 >= cp)
            out[cand[ok]] = True
    return out


# -- the pipeline -----------------------------------------------------------------

@dataclass
class Analysis:
    P: PackedText
    ix: QueryIndex
    cfg: TauConfig
    sync: object
    runs: object
    rooter: Rooter
    nonregular: list = field(default_factory=list)
    nonregular_ell: list = field(default_factory=list)
    plain: list = field(default_factory=list)
    pyramids: list = field(default_factory=list)
    _cache: dict = field(default_factory=dict, repr=False)

    def nonregular_groups(self):
        if "nonreg" not in self._cache:
            gid, _ = self.rooter.group([R.start for R in self.nonregular],
                                       [R.period for R in self.nonregular], self.nonregular_ell)
            self._cache["nonreg"] = gid
        return self._cache["nonreg"]

    def plain_groups(self):
        if "plain" not in self._cache:
            self._cache["plain"] = self.rooter.group([R.start for R in self.plain],
                                                     [R.period for R in self.plain])
        return self._cache["plain"]

    def special_plan(self):
        if "plan" not in self._cache:
            self._cache["plan"] = _special_plan(self)
        return self._cache["plan"]


def _as_packed(P, sigma=None):
    if isinstance(P, PackedText):
        return P
    if isinstance(P, str):
        P = P.encode("latin-1")
    raw = bytes(P)
    if sigma is None:
        sigma = (max(raw) + 1) if raw else 1
    return encode(raw, sigma)


@contextmanager
def _gc_paused():
    # the pipeline allocates millions of small tuples and no cycles
    was = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


def analyze(P, cfg: TauConfig | None = None, ix=None) -> Analysis:
    with _gc_paused():
        return _analyze(P, cfg, ix)


def _analyze(P, cfg, ix):
    P = _as_packed(P)
    n = P.n
    if cfg is None:
        cfg = TauConfig.default(n, P.sigma)
    if ix is None:
        ix = QueryIndex(P)
    sync = None
    if n >= 2 * cfg.tau_sync:
        sync = build_sync(P, ix, cfg.tau_sync)
    runs = compute_all_runs(P, ix, sync, cfg)
    rooter = Rooter(ix, sync, cfg.tau_sync)
    an = Analysis(P, ix, cfg, sync, runs, rooter)
    nonreg = list(runs.explicit_runs)
    for c in runs.clusters:
        nonreg.extend(c.base_runs)
    an.nonregular = nonreg
    an.nonregular_ell = [rooter.root_position(R.start, R.period, runs.lyndon.get(R)) for R in nonreg]
    pyramids = list(runs.pyramids)
    maybe = _may_have_special(nonreg, runs)
    for R, m in zip(nonreg, maybe):
        if not m:
            an.plain.append(R)
            continue
        pys, frags = split_subperiodic(ix, R)
        pyramids.extend(pys)
        an.plain.extend(frags)
    an.pyramids = dedup_pyramids(pyramids, n)
    return an


def _arrays(runs, ells):
    start = np.array([R.start for R in runs], dtype=np.int64)
    end = np.array([R.end for R in runs], dtype=np.int64)
    p = np.array([R.period for R in runs], dtype=np.int64)
    return start, end, p, np.asarray(ells, dtype=np.int64)


def count_np(an: Analysis) -> int:
    if not an.nonregular:
        return 0
    gid = an.nonregular_groups()
    members = _arrays(an.nonregular, an.nonregular_ell)
    return int(np_counts(members, gid, int(gid.max()) + 1, max(an.ix.n, 1)).sum())


def count_plain_p(an: Analysis) -> int:
    if not an.plain:
        return 0
    frags = an.plain
    gid, ells = an.plain_groups()
    members = _arrays(frags, ells)
    return int(p_counts(members, gid, int(gid.max()) + 1, max(an.ix.n, 1)).sum())


def pyramid_types(an: Analysis):
    pys = an.pyramids
    if not pys:
        return []
    rooter = an.rooter
    ellF = [rooter.root_position(py.F.start, py.p) for py in pys]
    ellFp = [rooter.root_position(py.Fp.start, py.p) for py in pys]
    gid, _ = rooter.group([py.F.start for py in pys], [py.p for py in pys], ellF)
    return [pyramid_type(py, g, a, b) for py, g, a, b in zip(pys, gid.tolist(), ellF, ellFp)]


def _special_plan(an: Analysis):
    """Per type: tallest regular stack and the max-layer windows above it."""
    types = pyramid_types(an)
    by_type = {}
    for py, ty in zip(an.pyramids, types):
        by_type.setdefault(ty, []).append(py)
    plan = []
    for ty, pys in by_type.items():
        tallest = max(pys, key=lambda py: py.k_max)
        r_star = max(0, tallest.k_max - (MIN_LAYER - 1))
        extra = {}
        for py in pys:
            ML = py.max_layer
            if ML is None:
                continue
            k = (ML.period - py.delta) // py.p
            if k <= r_star + MIN_LAYER - 1:
                continue
            lo, hi = layer_special_window(py, ML)
            if lo <= hi:
                extra.setdefault(k, []).append((lo, hi, py))
        plan.append((ty, tallest, r_star, extra))
    return plan


def count_special(an: Analysis) -> int:
    total = 0
    lo_all, hi_all, gid_all = [], [], []
    g = 0
    for ty, tallest, r_star, extra in an.special_plan():
        total += r_star * (ty.ov + 1)
        for k, wins in extra.items():
            for lo, hi, _ in wins:
                lo_all.append(lo)
                hi_all.append(hi + 1)
                gid_all.append(g)
            g += 1
    if g:
        sizes = union_sizes(np.asarray(gid_all, dtype=np.int64), np.asarray(lo_all, dtype=np.int64),
                            np.asarray(hi_all, dtype=np.int64), g, max(an.ix.n, 1))
        total += int(sizes.sum())
    return total


def count_distinct_squares(P, cfg: TauConfig | None = None, analysis: Analysis | None = None) -> SquareCounts:
    an = analysis if analysis is not None else analyze(P, cfg)
    return SquareCounts(count_np(an), count_plain_p(an), count_special(an))


def count_powers(P, t: int, cfg: TauConfig | None = None, analysis: Analysis | None = None) -> int:
    if t < 2:
        raise InvalidExponent(f"exponent must be at least 2, got {t}")
    an = analysis if analysis is not None else analyze(P, cfg)
    if t == 2:
        return count_distinct_squares(P, cfg, an).total
    if not an.nonregular:
        return 0
    gid = an.nonregular_groups()
    members = _arrays(an.nonregular, an.nonregular_ell)
    return int(power_counts(members, gid, int(gid.max()) + 1, t, max(an.ix.n, 1)).sum())


# -- reporting ------------------------------------------------------------------

def _interval_witnesses(runs, ells, gid, t, level_of_group, only_top):
    """Yield (start, half) for every rotation in the union at each group's level."""
    by_group = {}
    for R, ell, g in zip(runs, ells, gid.tolist()):
        by_group.setdefault(g, []).append((R, ell))
    for g in sorted(by_group):
        mem = by_group[g]
        p = mem[0][0].period
        top = max(R.length // (t * p) for R, _ in mem)
        for m in level_of_group(top):
            covered = {}
            for R, ell in mem:
                e = R.length // (t * p)
                if e < m or (only_top and m == top and e != top):
                    continue
                cnt = min(p, R.length - t * m * p + 1)
                c0 = (R.start - ell) % p
                for d in range(cnt):
                    c = (c0 + d) % p
                    if c not in covered:
                        covered[c] = R.start + d
                if len(covered) == p:
                    break
            for c in sorted(covered):
                yield covered[c], m * p


def iter_squares(an: Analysis):
    """Every distinct square once, as (start, half_length)."""
    if an.nonregular:
        gid = an.nonregular_groups()
        yield from _interval_witnesses(an.nonregular, an.nonregular_ell, gid, 2,
                                       lambda top: range(2, top + 1), True)
    if an.plain:
        gid, ells = an.plain_groups()
        yield from _interval_witnesses(an.plain, ells, gid, 2, lambda top: range(1, 2), False)
    for ty, tallest, r_star, extra in an.special_plan():
        for k in range(MIN_LAYER, MIN_LAYER + r_star):
            y = k * tallest.p + tallest.delta
            for u in range(ty.ov + 1):
                yield tallest.Fp.start + u - y, y
        for k in sorted(extra):
            seen = set()
            for lo, hi, py in extra[k]:
                y = py.max_layer.period
                for u in range(lo, hi + 1):
                    if u not in seen:
                        seen.add(u)
                        yield py.Fp.start + u - y, y


def report_squares(P, k: int, cfg: TauConfig | None = None, analysis: Analysis | None = None) -> list:
    an = analysis if analysis is not None else analyze(P, cfg)
    if k < 0:
        raise ValueError("k must be non-negative")
    total = count_distinct_squares(P, cfg, an).total
    if k > total:
        raise KTooLarge(total)
    out = []
    for sq in iter_squares(an):
        if len(out) >= k:
            break
        out.append(sq)
    return out
