"""Bit-packed strings over an integer alphabet [0..sigma)."""

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import BlockTooLong, CharacterOutOfAlphabet, FormatError, OutOfBounds

WORD_BITS = 64
MAGIC = b"PKSQ"
VERSION = 1
_HEADER = struct.Struct("<4sBQI")


def bits_for(sigma: int) -> int:
    return max(1, math.ceil(math.log2(max(sigma, 2))))


class PackedText:
    """Characters stored `bits_per_char` bits each, little-endian inside uint64 words.

    Positions -1 and n are virtual sentinels with values sigma and sigma + 1.
    """

    __slots__ = ("n", "sigma", "bits_per_char", "words", "_mask")

    def __init__(self, n: int, sigma: int, words: np.ndarray):
        self.n = n
        self.sigma = sigma
        self.bits_per_char = bits_for(sigma)
        self.words = words
        self._mask = (1 << self.bits_per_char) - 1

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"PackedText(n={self.n}, sigma={self.sigma}, bits={self.bits_per_char})"

    def __eq__(self, other):
        return (isinstance(other, PackedText) and self.n == other.n and self.sigma == other.sigma
                and np.array_equal(self.words, other.words))

    def __hash__(self):
        return hash((self.n, self.sigma, self.words.tobytes()))

    def access(self, i: int) -> int:
        if i == -1:
            return self.sigma
        if i == self.n:
            return self.sigma + 1
        if not 0 <= i < self.n:
            raise OutOfBounds(f"position {i} outside [-1..{self.n}]")
        return self._field(i * self.bits_per_char, self.bits_per_char)

    def extract_block(self, i: int, length: int) -> int:
        """Pack T[i..i+length) into one integer; T[i] sits in the lowest bits."""
        nbits = length * self.bits_per_char
        if nbits > WORD_BITS:
            raise BlockTooLong(f"{length} characters need {nbits} bits")
        if i < 0 or length < 0 or i + length > self.n:
            raise OutOfBounds(f"block [{i}..{i + length}) outside [0..{self.n})")
        if length == 0:
            return 0
        return self._field(i * self.bits_per_char, nbits)

    def extract_blocks(self, starts, length: int) -> np.ndarray:
        """Vectorised extract_block for many starts at once."""
        nbits = length * self.bits_per_char
        if nbits > WORD_BITS:
            raise BlockTooLong(f"{length} characters need {nbits} bits")
        starts = np.asarray(starts, dtype=np.int64)
        if starts.size and (starts.min() < 0 or starts.max() + length > self.n):
            raise OutOfBounds("block outside the text")
        if length == 0:
            return np.zeros(starts.shape, dtype=np.uint64)
        words = np.concatenate([self.words, np.zeros(1, dtype=np.uint64)])
        pos = starts * self.bits_per_char
        w = pos >> 6
        off = (pos & 63).astype(np.uint64)
        lo = words[w] >> off
        # shifting a uint64 by 64 is undefined, so split it into two shifts
        spill = (words[w + 1] << (np.uint64(63) - off)) << np.uint64(1)
        val = lo | spill
        if nbits < 64:
            val &= np.uint64((1 << nbits) - 1)
        return val

    def _field(self, pos: int, nbits: int) -> int:
        w, off = divmod(pos, WORD_BITS)
        val = int(self.words[w]) >> off
        if off + nbits > WORD_BITS:
            val |= int(self.words[w + 1]) << (WORD_BITS - off)
        return val & ((1 << nbits) - 1)

    def decode(self) -> np.ndarray:
        """All characters as a uint16 array."""
        b = self.bits_per_char
        if self.n == 0:
            return np.zeros(0, dtype=np.uint16)
        bits = np.unpackbits(self.words.view(np.uint8), bitorder="little")[: self.n * b]
        weights = (1 << np.arange(b, dtype=np.uint16)).astype(np.uint16)
        return (bits.reshape(self.n, b).astype(np.uint16) * weights).sum(axis=1, dtype=np.uint16)

    def to_bytes(self) -> bytes:
        if self.sigma > 256:
            raise ValueError("alphabet does not fit in bytes")
        return self.decode().astype(np.uint8).tobytes()

    def payload(self) -> bytes:
        nbytes = (self.n * self.bits_per_char + 7) // 8
        return self.words.view(np.uint8)[:nbytes].tobytes()

    def with_sentinels(self) -> "PackedText":
        """The text sigma . T . (sigma+1) over an alphabet of size sigma + 2."""
        codes = np.empty(self.n + 2, dtype=np.int64)
        codes[0] = self.sigma
        codes[1:-1] = self.decode()
        codes[-1] = self.sigma + 1
        return encode(codes, self.sigma + 2)


def _pack_codes(codes: np.ndarray, b: int) -> np.ndarray:
    n = len(codes)
    nwords = (n * b + WORD_BITS - 1) // WORD_BITS
    if n == 0:
        return np.zeros(0, dtype=np.uint64)
    shifts = np.arange(b, dtype=np.uint64)
    bits = ((codes.astype(np.uint64)[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    raw = np.packbits(bits.ravel(), bitorder="little")
    buf = np.zeros(nwords * 8, dtype=np.uint8)
    buf[: len(raw)] = raw
    return buf.view("<u8").astype(np.uint64)


def encode(raw, sigma: int) -> PackedText:
    """Pack a byte string or integer sequence; every value must be < sigma."""
    if sigma < 1:
        raise ValueError("sigma must be at least 1")
    if isinstance(raw, str):
        raw = raw.encode("latin-1")
    if isinstance(raw, (bytes, bytearray, memoryview)):
        codes = np.frombuffer(bytes(raw), dtype=np.uint8).astype(np.int64)
    else:
        codes = np.asarray(raw, dtype=np.int64).ravel()
    if codes.size:
        bad = np.flatnonzero((codes >= sigma) | (codes < 0))
        if bad.size:
            i = int(bad[0])
            raise CharacterOutOfAlphabet(i, int(codes[i]))
    return PackedText(len(codes), sigma, _pack_codes(codes, bits_for(sigma)))


def decode(P: PackedText) -> np.ndarray:
    return P.decode()


def access(P: PackedText, i: int) -> int:
    return P.access(i)


def extract_block(P: PackedText, i: int, length: int) -> int:
    return P.extract_block(i, length)


def from_payload(n: int, sigma: int, payload: bytes) -> PackedText:
    b = bits_for(sigma)
    nbytes = (n * b + 7) // 8
    if len(payload) != nbytes:
        raise FormatError(f"expected {nbytes} payload bytes, got {len(payload)}")
    nwords = (n * b + WORD_BITS - 1) // WORD_BITS
    buf = np.zeros(nwords * 8, dtype=np.uint8)
    buf[:nbytes] = np.frombuffer(payload, dtype=np.uint8)
    P = PackedText(n, sigma, buf.view("<u8").astype(np.uint64))
    if n:
        tail = n * b
        if tail % WORD_BITS and int(P.words[-1]) >> (tail % WORD_BITS):
            raise FormatError("non-zero padding bits")
        if sigma < (1 << b):
            codes = P.decode()
            bad = np.flatnonzero(codes >= sigma)
            if bad.size:
                raise CharacterOutOfAlphabet(int(bad[0]), int(codes[bad[0]]))
    return P


def dumps(P: PackedText) -> bytes:
    return _HEADER.pack(MAGIC, VERSION, P.n, P.sigma) + P.payload()


def loads(data: bytes, sigma: int | None = None) -> PackedText:
    """Parse a packed file, or treat the bytes as raw characters if the magic is absent."""
    if data[:4] == MAGIC:
        if len(data) < _HEADER.size:
            raise FormatError("truncated header")
        magic, version, n, file_sigma = _HEADER.unpack_from(data)
        if version != VERSION:
            raise FormatError(f"unsupported version {version}")
        if file_sigma < 1:
            raise FormatError("sigma must be at least 1")
        P = from_payload(n, file_sigma, data[_HEADER.size:])
        if sigma is not None and sigma != file_sigma:
            if sigma < file_sigma and n and int(P.decode().max()) >= sigma:
                raise FormatError("sigma override smaller than the largest character")
            P = encode(P.decode(), sigma)
        return P
    inferred = (max(data) + 1) if data else 1
    if sigma is None:
        sigma = inferred
    elif sigma < inferred:
        raise FormatError(f"sigma override {sigma} smaller than max byte + 1 = {inferred}")
    return encode(data, sigma)


def read_file(path, sigma: int | None = None, fmt: str = "auto") -> PackedText:
    with open(path, "rb") as fh:
        data = fh.read()
    if fmt == "raw":
        if sigma is None:
            sigma = (max(data) + 1) if data else 1
        elif data and max(data) >= sigma:
            raise FormatError("sigma override smaller than max byte + 1")
        return encode(data, sigma)
    if fmt == "packed" and data[:4] != MAGIC:
        raise FormatError("missing PKSQ magic")
    return loads(data, sigma)


def write_file(path, P: PackedText) -> None:
    with open(path, "wb") as fh:
        fh.write(dumps(P))


@dataclass(frozen=True)
class TauConfig:
    tau_runs: int
    tau_sync: int
    q_long: int
    # runs with period in [q_long, scan_below) come from a vectorised equality scan
    scan_below: int = 0

    @classmethod
    def default(cls, n: int, sigma: int, tau_runs: int | None = None, tau_sync: int | None = None,
                scan_below: int = 32):
        logn = math.log(n) / math.log(max(sigma, 2)) if n > 1 else 0.0
        if tau_runs is None:
            tau_runs = max(1, int(logn / 9))
        if tau_sync is None:
            tau_sync = max(1, int(logn / 18))
        tau_runs = max(1, int(tau_runs))
        tau_sync = max(1, min(int(tau_sync), tau_runs))
        # keep the short-run table within 2^24 entries
        while tau_runs > 1 and int(3.5 * tau_runs) * math.log2(max(sigma, 2)) > 24:
            tau_runs -= 1
        tau_sync = min(tau_sync, tau_runs)
        return cls(tau_runs, tau_sync, tau_runs // 3 + 1, max(0, int(scan_below)))
