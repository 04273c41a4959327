"""Stable LSD radix sort of integer tuples with base ceil(sqrt(N)) digits."""

import math

import numpy as np


SMALL = 64


def _digit_dtype(base):
    if base <= 1 << 8:
        return np.uint8
    if base <= 1 << 16:
        return np.uint16
    return np.uint32


def radix_argsort(columns, universe: int | None = None) -> np.ndarray:
    """Stable order of rows, compared lexicographically column by column.

    `columns` are equal-length integer arrays with values in [0..universe).
    Each column is split into two digits of base ceil(sqrt(universe)), and the
    digits are bucketed from least to most significant.
    """
    cols = [np.asarray(c, dtype=np.int64) for c in columns]
    if not cols:
        raise ValueError("need at least one key column")
    m = len(cols[0])
    order = np.arange(m, dtype=np.int64)
    if m <= 1:
        return order
    if universe is None:
        universe = max(int(c.max()) for c in cols) + 1 if m else 1
    for c in cols:
        if c.min() < 0 or c.max() >= universe:
            raise ValueError("key outside the declared universe")
    if m <= SMALL:
        # tiny inputs: one lexsort beats several digit passes
        return np.lexsort(cols[::-1])
    base = max(2, math.isqrt(max(universe - 1, 0)) + 1)
    dt = _digit_dtype(base)
    for c in reversed(cols):
        for digit in (c % base, c // base):
            keyed = digit[order].astype(dt)
            order = order[np.argsort(keyed, kind="stable")]
    return order


def radix_sort_tuples(rows, universe: int | None = None) -> list:
    """Sort a list of equal-width integer tuples."""
    if not rows:
        return []
    width = len(rows[0])
    arr = np.asarray(rows, dtype=np.int64).reshape(len(rows), width)
    order = radix_argsort([arr[:, j] for j in range(width)], universe)
    return [rows[i] for i in order]


def dedup_sorted(rows) -> list:
    out = []
    for r in rows:
        if not out or out[-1] != r:
            out.append(r)
    return out
