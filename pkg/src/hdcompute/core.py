"""Binary hypervectors and the four vector instructions.

Vectors are dense {0,1} arrays of a fixed width ``D``. Binding is XOR,
bundling is the coordinatewise majority with random tie-breaks, permutation
is a cyclic rotation, and similarity is the normalized Hamming agreement.
Unthresholded sums live in :class:`Accumulator`, which views every bit as
a bipolar component (1 -> +1, 0 -> -1).

All randomness comes from an explicit :class:`RandomSource`; nothing in this
module touches global RNG state.
"""

from __future__ import annotations

import struct
from typing import Iterable, Sequence

import numpy as np

DEFAULT_DIM = 10_000

INT32_MAX = 2**31 - 1

_HDV_MAGIC = b"HDV1"
_ACC_MAGIC = b"ACC1"


class DimensionMismatch(ValueError):
    """Raised when operands of one operation have different widths."""

    def __init__(self, a: int, b: int):
        super().__init__(f"dimension mismatch: {a} != {b}")
        self.dims = (a, b)


class FormatError(ValueError):
    """Raised when serialized bytes do not match the expected layout."""


def check_dim(d: int) -> int:
    d = int(d)
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return d


def _same_dim(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(a, b)


class RandomSource:
    """Seeded bit source backed by numpy's PCG64.

    The generator is ``numpy.random.Generator(PCG64(SeedSequence(seed, spawn_key)))``,
    so a (seed, key) pair replays the same stream on every platform.
    :meth:`derive` opens an independent child stream without advancing this one.
    """

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        self.seed = seed
        self.key = tuple(int(k) for k in key)
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(seed, spawn_key=self.key))
        )

    def derive(self, *key: int) -> RandomSource:
        return RandomSource(self.seed, self.key + tuple(key))

    def bits(self, n: int) -> np.ndarray:
        return self._gen.integers(0, 2, size=n, dtype=np.uint8)

    def bit_matrix(self, rows: int, cols: int) -> np.ndarray:
        return self._gen.integers(0, 2, size=(rows, cols), dtype=np.uint8)

    def integers(self, low: int, high: int, size=None) -> np.ndarray:
        return self._gen.integers(low, high, size=size)

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, key={self.key})"


class Hypervector:
    """Immutable D-bit binary vector."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] | np.ndarray):
        arr = np.array(bits, dtype=np.uint8, copy=True).reshape(-1)
        if arr.size < 2:
            raise ValueError(f"dimension must be >= 2, got {arr.size}")
        if arr.size and arr.max() > 1:
            raise ValueError("hypervector bits must be 0 or 1")
        arr.flags.writeable = False
        self._bits = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> Hypervector:
        # trusted constructor: arr is a fresh uint8 0/1 array
        hv = object.__new__(cls)
        arr.flags.writeable = False
        hv._bits = arr
        return hv

    @classmethod
    def from_string(cls, s: str) -> Hypervector:
        return cls([int(c) for c in s if c in "01"])

    @classmethod
    def zeros(cls, d: int) -> Hypervector:
        return cls._wrap(np.zeros(check_dim(d), dtype=np.uint8))

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def dim(self) -> int:
        return self._bits.size

    def complement(self) -> Hypervector:
        return Hypervector._wrap(self._bits ^ 1)

    def bipolar(self) -> np.ndarray:
        return self._bits.astype(np.int32) * 2 - 1

    def packed(self) -> bytes:
        return np.packbits(self._bits, bitorder="little").tobytes()

    @classmethod
    def from_packed(cls, data: bytes, d: int) -> Hypervector:
        d = check_dim(d)
        nbytes = (d + 7) // 8
        if len(data) != nbytes:
            raise FormatError(f"expected {nbytes} packed bytes for D={d}, got {len(data)}")
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), count=d, bitorder="little")
        return cls._wrap(bits.astype(np.uint8))

    def to_bytes(self) -> bytes:
        return _HDV_MAGIC + struct.pack("<I", self.dim) + self.packed()

    @classmethod
    def from_bytes(cls, data: bytes) -> Hypervector:
        if data[:4] != _HDV_MAGIC:
            raise FormatError("not a hypervector record (bad magic)")
        (d,) = struct.unpack_from("<I", data, 4)
        return cls.from_packed(data[8:], d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypervector):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash((self.dim, self._bits.tobytes()))

    def __len__(self) -> int:
        return self.dim

    def __str__(self) -> str:
        if self.dim <= 64:
            return "".join("1" if b else "0" for b in self._bits)
        return f"<Hypervector D={self.dim} ones={int(self._bits.sum())}>"

    def __repr__(self) -> str:
        return f"Hypervector({str(self)!r})" if self.dim <= 64 else str(self)


class Accumulator:
    """Integer sum of bipolar images of hypervectors.

    ``counts`` is an int32 array; ``n_added`` is how many (weighted) vectors
    went in. Since every contribution is +-1 per coordinate,
    ``|counts[i]| <= n_added`` always holds, so checking ``n_added`` against
    the int32 range is enough to rule out wraparound.
    """

    __slots__ = ("counts", "n_added")

    def __init__(self, d_or_counts: int | np.ndarray, n_added: int = 0):
        if isinstance(d_or_counts, (int, np.integer)):
            counts = np.zeros(check_dim(d_or_counts), dtype=np.int32)
            n_added = 0
        else:
            raw = np.asarray(d_or_counts).reshape(-1)
            check_dim(raw.size)
            if raw.size and int(np.abs(raw.astype(np.int64)).max()) > n_added:
                raise ValueError("counts exceed n_added; not a sum of +-1 vectors")
            if n_added > INT32_MAX:
                raise OverflowError("accumulator exceeds 32-bit counter range")
            counts = raw.astype(np.int32, copy=True)
        self.counts = counts
        self.n_added = int(n_added)

    @property
    def dim(self) -> int:
        return self.counts.size

    def copy(self) -> Accumulator:
        acc = Accumulator.__new__(Accumulator)
        acc.counts = self.counts.copy()
        acc.n_added = self.n_added
        return acc

    def add(self, v: Hypervector, times: int = 1) -> Accumulator:
        """Add ``times`` copies of ``v`` in place and return self."""
        _same_dim(self.dim, v.dim)
        if times < 0:
            raise ValueError("times must be nonnegative")
        if self.n_added + times > INT32_MAX:
            raise OverflowError("accumulator counter overflow")
        if times:
            self.counts += v.bipolar() * np.int32(times)
            self.n_added += times
        return self

    def __add__(self, other: Accumulator) -> Accumulator:
        if not isinstance(other, Accumulator):
            return NotImplemented
        _same_dim(self.dim, other.dim)
        n = self.n_added + other.n_added
        if n > INT32_MAX:
            raise OverflowError("accumulator counter overflow")
        return Accumulator(self.counts.astype(np.int64) + other.counts, n)

    def __neg__(self) -> Accumulator:
        acc = self.copy()
        acc.counts = -acc.counts
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, Accumulator):
            return NotImplemented
        return self.n_added == other.n_added and bool(np.array_equal(self.counts, other.counts))

    def norm(self) -> float:
        c = self.counts.astype(np.float64)
        return float(np.sqrt(c @ c))

    def to_bytes(self) -> bytes:
        head = _ACC_MAGIC + struct.pack("<IQ", self.dim, self.n_added)
        return head + self.counts.astype("<i4").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, offset: int = 0) -> tuple[Accumulator, int]:
        """Decode one record starting at ``offset``; returns it and the end offset."""
        if data[offset:offset + 4] != _ACC_MAGIC:
            raise FormatError("not an accumulator record (bad magic)")
        d, n = struct.unpack_from("<IQ", data, offset + 4)
        start = offset + 16
        end = start + 4 * d
        if len(data) < end:
            raise FormatError("truncated accumulator record")
        counts = np.frombuffer(data[start:end], dtype="<i4")
        return cls(counts, n), end

    def __repr__(self) -> str:
        return f"Accumulator(D={self.dim}, n_added={self.n_added})"


def random_hv(rng: RandomSource, d: int = DEFAULT_DIM) -> Hypervector:
    return Hypervector._wrap(rng.bits(check_dim(d)))


def bind(x: Hypervector, y: Hypervector) -> Hypervector:
    """Coordinatewise XOR. Commutative, associative, and its own inverse."""
    _same_dim(x.dim, y.dim)
    return Hypervector._wrap(x.bits ^ y.bits)


def _majority(ones: np.ndarray, n: int, rng: RandomSource) -> np.ndarray:
    # ones[i] = how many of n inputs have bit i set
    twice = 2 * ones.astype(np.int64)
    out = (twice > n).astype(np.uint8)
    ties = np.flatnonzero(twice == n)
    if ties.size:
        out[ties] = rng.bits(ties.size)
    return out


def bundle(vs: Sequence[Hypervector], rng: RandomSource) -> Hypervector:
    """Coordinatewise majority; tied coordinates get fresh bits from ``rng``.

    ``rng`` is only advanced when a tie occurs, one bit per tied coordinate
    in ascending coordinate order.
    """
    if len(vs) == 0:
        raise ValueError("cannot bundle an empty list")
    d = vs[0].dim
    for v in vs[1:]:
        _same_dim(d, v.dim)
    ones = np.sum([v.bits for v in vs], axis=0, dtype=np.int64)
    return Hypervector._wrap(_majority(ones, len(vs), rng))


def accumulate(acc: Accumulator, v: Hypervector) -> Accumulator:
    """Return a new accumulator with ``v`` added; ``acc`` is left untouched."""
    return acc.copy().add(v)


def threshold(acc: Accumulator, rng: RandomSource) -> Hypervector:
    """Sign of each counter; zero counters become random bits."""
    if acc.n_added < 1:
        raise ValueError("cannot threshold an empty accumulator")
    out = (acc.counts > 0).astype(np.uint8)
    ties = np.flatnonzero(acc.counts == 0)
    if ties.size:
        out[ties] = rng.bits(ties.size)
    return Hypervector._wrap(out)


def permute(v: Hypervector, k: int = 1) -> Hypervector:
    """Rotate right by ``k``: bit i moves to position (i + k) mod D."""
    return Hypervector._wrap(np.roll(v.bits, int(k)))


def hamming_distance(x: Hypervector, y: Hypervector) -> int:
    _same_dim(x.dim, y.dim)
    return int(np.count_nonzero(x.bits != y.bits))


def hamming_similarity(x: Hypervector, y: Hypervector) -> float:
    return 1.0 - hamming_distance(x, y) / x.dim


def cosine(a: Accumulator, b: Accumulator) -> float:
    _same_dim(a.dim, b.dim)
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine of a zero-norm accumulator is undefined")
    dot = float(a.counts.astype(np.float64) @ b.counts.astype(np.float64))
    return max(-1.0, min(1.0, dot / (na * nb)))
