"""Canonical representations of pyramids of runs."""

from typing import NamedTuple

from .errors import NotNeighboring, PeriodMismatch, RootMismatch
from .structures import Pyramid, Run

MIN_LAYER = 4


class PyramidType(NamedTuple):
    root_group: int
    ov: int
    c_X: int
    c_Y: int


def pyramid_canonical(ix, F: Run, Fp: Run) -> Pyramid | None:
    if Fp.start < F.start:
        F, Fp = Fp, F
    p = F.period
    if Fp.period != p:
        raise PeriodMismatch(f"periods {p} and {Fp.period} differ")
    a, b = F.start, F.end
    a2, b2 = Fp.start, Fp.end
    if F == Fp or a2 > b + 1 or b2 <= b:
        raise NotNeighboring(f"{F} and {Fp} are not neighbouring")
    x = b - p + 1
    occ = ix.ipm(x, b + 1, a2, min(a2 + 2 * p - 1, ix.n))
    if not occ:
        raise RootMismatch(f"{F} and {Fp} have different roots")
    delta = (occ[0].first - x) % p
    A = a2 - a
    k_hi = (min(A, b2 - b) - 1 - delta) // p
    top = _boundary_layer(ix, a, b, a2, b2, p, delta)
    if top is None:
        if k_hi < MIN_LAYER:
            return None
        py = Pyramid(F, Fp, delta, MIN_LAYER, k_hi)
        py.max_layer = py.layer(k_hi)
        py.k_max = k_hi - 1
        return py
    return Pyramid(F, Fp, delta, MIN_LAYER, k_hi, top)


def _boundary_layer(ix, a, b, a2, b2, p, delta):
    """The only layer that may reach position a or position b2."""
    A = a2 - a
    # period y in [A .. |F|] with y = delta (mod p): the square T[a..a+2y) straddles F, Fp
    y = A + (delta - A) % p
    if y <= b - a + 1 and (y - delta) // p >= MIN_LAYER and a + 2 * y - 1 <= b2:
        if ix.lce(a, a + y) >= y:
            R = ix.gamma(a, y)
            if R is not None:
                return R
    B = b2 - b
    y = B + (delta - B) % p
    if y <= b2 - a2 + 1 and (y - delta) // p >= MIN_LAYER and b2 - 2 * y + 1 >= a:
        s = b2 - 2 * y + 1
        if ix.lce(s, s + y) >= y:
            R = ix.gamma(s, y)
            if R is not None:
                return R
    return None


def regular_layer_filter(ix, R: Run) -> Pyramid | None:
    """The pyramid having R as a regular layer, if there is one."""
    P = R.period
    a, b = R.start, R.end
    p1 = ix.two_period(a, a + P)
    if p1 is None or MIN_LAYER * p1 > P:
        return None
    p2 = ix.two_period(b - P + 1, b + 1)
    if p2 != p1:
        return None
    F = ix.gamma(a, p1)
    Fp = ix.gamma(b - P + 1, p1)
    if F is None or Fp is None or F == Fp:
        return None
    try:
        py = pyramid_canonical(ix, F, Fp)
    except (NotNeighboring, RootMismatch):
        return None
    if py is None or (P - py.delta) % p1:
        return None
    k = (P - py.delta) // p1
    if py.k_min <= k <= py.k_max and py.layer(k) == R:
        return py
    return None


def pyramid_type(py: Pyramid, root_group: int, root_F: int, root_Fp: int) -> PyramidType:
    """Type quadruple given the root group and root positions of F and Fp.

    root_F and root_Fp are positions of the same root string inside the first
    period of F and Fp (Lyndon or sparse-Lyndon, consistently chosen).
    """
    p = py.F.period
    c_X = (py.F.end - p + 1 - root_F) % p
    c_Y = (py.Fp.start - root_Fp) % p
    return PyramidType(root_group, py.overlap, c_X, c_Y)


def layer_special_window(py: Pyramid, R: Run) -> tuple:
    """Range [u_lo..u_hi] of offsets u such that the square with second half starting
    at Fp.start + u and half length per(R) lies in R, first half in F, second in Fp."""
    y = R.period
    A = py.Fp.start - py.F.start
    ov = py.overlap
    lo = max(0, y - A)
    hi = min(ov, py.Fp.length - y)
    # the square must also fit inside R itself
    lo = max(lo, R.start + y - py.Fp.start)
    hi = min(hi, R.end - y + 1 - py.Fp.start)
    return lo, hi
