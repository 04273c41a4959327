import pytest
from hypothesis import given, strategies as st

from helpers import all_strings, periodic_texts, texts
from packedsquares.errors import TauTooLarge
from packedsquares.oracle import validate_sync
from packedsquares.packed_text import encode
from packedsquares.pillar import QueryIndex
from packedsquares.sync import build_sync, sparse_rank_min


def make(t, tau):
    P = encode(t, max(t) + 1)
    ix = QueryIndex(P)
    return build_sync(P, ix, tau), ix


@pytest.mark.parametrize("tau", [1, 2, 3])
def test_exhaustive_binary_sync_valid(tau):
    for t in all_strings(2, 12, n_min=2 * tau):
        S, _ = make(t, tau)
        assert validate_sync(t, S.positions, tau) == [], t


@given(st.one_of(texts(4, 150), periodic_texts(3, 150)), st.integers(1, 6))
def test_random_sync_valid(t, tau):
    if len(t) < 2 * tau:
        return
    S, ix = make(t, tau)
    assert validate_sync(t, S.positions, tau) == []
    # ranks follow suffix order
    order = sorted(range(len(S)), key=lambda k: t[S.positions[k]:])
    assert [S.rank[k] for k in order] == list(range(len(S)))


@given(texts(3, 80), st.data())
def test_sparse_rank_min(t, data):
    if len(t) < 2:
        return
    S, _ = make(t, 1)
    lo = data.draw(st.integers(0, len(t) - 1))
    hi = data.draw(st.integers(lo, len(t) - 1))
    inside = [p for p in S.positions if lo <= p <= hi]
    got = sparse_rank_min(S, lo, hi)
    if not inside:
        assert got is None
    else:
        assert got[0] == min(inside, key=lambda p: t[p:])


def test_deleting_a_position_breaks_density():
    t = bytes([0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0])
    S, _ = make(t, 2)
    assert validate_sync(t, S.positions, 2) == []
    bad = validate_sync(t, S.positions[1:], 2)
    assert bad


def test_tau_too_large():
    with pytest.raises(TauTooLarge):
        make(b"\x00\x01\x00", 2)


def test_json_shape():
    S, _ = make(b"\x00\x01\x01\x00\x01", 1)
    d = S.to_json()
    assert set(d) == {"tau", "positions", "rank"} and len(d["positions"]) == len(d["rank"])
