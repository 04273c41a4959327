import itertools

from hypothesis import strategies as st


def all_strings(sigma, n_max, n_min=1):
    for n in range(n_min, n_max + 1):
        for tup in itertools.product(range(sigma), repeat=n):
            yield bytes(tup)


def texts(sigma_max=3, max_size=60):
    return st.integers(1, sigma_max).flatmap(
        lambda s: st.lists(st.integers(0, s - 1), min_size=1, max_size=max_size).map(bytes))


@st.composite
def periodic_texts(draw, sigma_max=3, max_size=120):
    """Strings built from repeated blocks, rich in runs and pyramids."""
    sigma = draw(st.integers(2, sigma_max))
    sym = st.integers(0, sigma - 1)
    out = b""
    for _ in range(draw(st.integers(1, 4))):
        u = bytes(draw(st.lists(sym, min_size=1, max_size=4)))
        v = bytes(draw(st.lists(sym, max_size=3)))
        blk = u * draw(st.integers(1, 7)) + v
        out += blk * draw(st.integers(1, 5))
    return out[:max_size] or b"\x00"


def fib(n):
    a, b = b"\x00", b"\x00\x01"
    while len(b) < n:
        a, b = b, b + a
    return b[:n]


def thue_morse(n):
    return bytes(bin(i).count("1") & 1 for i in range(n))


def abba(m):
    return b"\x00\x01" * m + b"\x01\x00" * m
