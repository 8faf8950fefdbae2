"""Sparse Distributed Memory.

``m`` hard locations each own a fixed random D-bit address and a row of D
signed counters. A probe activates every location whose address lies within
``radius`` Hamming bits of it. Writes add the bipolar image of the datum to
all activated rows (saturating, never wrapping); reads sum the activated rows
column-wise and threshold at zero.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import (
    DimensionMismatch,
    FormatError,
    Hypervector,
    RandomSource,
    check_dim,
    hamming_similarity,
)

_MAGIC = b"SDM1"
_HEADER = struct.Struct("<IIIBQQQ")
_COUNTER_DTYPES = {8: "<i1", 16: "<i2", 32: "<i4"}


class NoActiveLocation(LookupError):
    """The probe activated no hard location."""


class EmptyRead(LookupError):
    """Every column sum was zero: the activated locations hold nothing."""


def binomial_cdf(r: int, d: int) -> Fraction:
    """Exact P[Binomial(d, 1/2) <= r]."""
    if r < 0:
        return Fraction(0)
    if r >= d:
        return Fraction(1)
    c, total = 1, 1
    for i in range(r):
        c = c * (d - i) // (i + 1)
        total += c
    return Fraction(total, 2**d)


def choose_radius(d: int, target_p: float) -> int:
    """Smallest radius r with P[Binomial(d, 1/2) <= r] >= target_p.

    Uses exact integer binomial sums, so the answer does not depend on
    floating-point rounding.
    """
    d = check_dim(d)
    if not 0.0 < target_p < 1.0:
        raise ValueError("target_p must lie strictly between 0 and 1")
    goal = Fraction(target_p) * 2**d
    c, total = 1, 1
    for r in range(d + 1):
        if total >= goal:
            return r
        c = c * (d - r) // (r + 1)
        total += c
    return d


@dataclass(frozen=True)
class SdmConfig:
    dim: int
    m: int
    radius: int
    counter_bits: int = 8

    def __post_init__(self):
        check_dim(self.dim)
        if self.m < 1:
            raise ValueError("an SDM needs at least one location")
        if not 0 <= self.radius <= self.dim:
            raise ValueError(f"radius {self.radius} outside [0, {self.dim}]")
        if self.counter_bits not in _COUNTER_DTYPES:
            raise ValueError("counter_bits must be 8, 16 or 32")
        if self.expected_active() < 1.0:
            warnings.warn(
                f"fewer than one location expected active per probe "
                f"({self.expected_active():.3g}); most reads will find nothing",
                stacklevel=3,
            )

    @classmethod
    def from_target_p(cls, dim: int, m: int, target_p: float = 0.001, counter_bits: int = 8) -> SdmConfig:
        return cls(dim, m, choose_radius(dim, target_p), counter_bits)

    @property
    def activation_p(self) -> float:
        return float(binomial_cdf(self.radius, self.dim))

    def expected_active(self) -> float:
        return self.activation_p * self.m

    @property
    def counter_limit(self) -> int:
        return 2 ** (self.counter_bits - 1) - 1


@dataclass
class WriteReport:
    n_active: int


@dataclass
class ReadResult:
    vector: Hypervector | None
    confidence: float
    n_active: int
    sums: np.ndarray = field(repr=False)

    @property
    def empty(self) -> bool:
        return self.vector is None


@dataclass
class IterativeResult:
    vector: Hypervector | None
    iterations: int
    converged: bool
    empty: bool = False


@dataclass
class SdmStats:
    writes: int
    mean_activation: float
    saturation_fraction: float
    nonzero_fraction: float
    counter_histogram: dict[int, int]

    def as_dict(self) -> dict:
        return {
            "writes": self.writes,
            "mean_activation": self.mean_activation,
            "saturation_fraction": self.saturation_fraction,
            "nonzero_fraction": self.nonzero_fraction,
            "counter_histogram": {str(k): v for k, v in self.counter_histogram.items()},
        }


def _pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack (n, D) 0/1 rows into (n, W) uint64 words for XOR/popcount distance."""
    packed = np.packbits(bits, axis=-1, bitorder="little")
    pad = (-packed.shape[-1]) % 8
    if pad:
        packed = np.pad(packed, [(0, 0)] * (packed.ndim - 1) + [(0, pad)])
    return np.ascontiguousarray(packed).view(np.uint64)


class Sdm:
    """The memory itself. Build with :meth:`random`."""

    def __init__(self, config: SdmConfig, address_bits: np.ndarray, seed: int = 0):
        if address_bits.shape != (config.m, config.dim):
            raise ValueError("address matrix shape does not match config")
        self.config = config
        self.seed = int(seed)
        self._address_bits = np.ascontiguousarray(address_bits, dtype=np.uint8)
        self._address_bits.flags.writeable = False
        self._addr_words = _pack_rows(self._address_bits)
        self.counters = np.zeros((config.m, config.dim), dtype=_COUNTER_DTYPES[config.counter_bits])
        self.write_count = 0
        self.activation_total = 0

    @classmethod
    def random(cls, config: SdmConfig, rng: RandomSource) -> Sdm:
        return cls(config, rng.bit_matrix(config.m, config.dim), seed=rng.seed)

    @property
    def dim(self) -> int:
        return self.config.dim

    @property
    def addresses(self) -> np.ndarray:
        return self._address_bits

    def address(self, i: int) -> Hypervector:
        return Hypervector(self._address_bits[i])

    def _check(self, v: Hypervector) -> None:
        if v.dim != self.dim:
            raise DimensionMismatch(self.dim, v.dim)

    def distances(self, probe: Hypervector) -> np.ndarray:
        self._check(probe)
        words = _pack_rows(probe.bits[None, :])[0]
        return np.bitwise_count(self._addr_words ^ words).sum(axis=1, dtype=np.int64)

    def activate(self, probe: Hypervector) -> np.ndarray:
        """Indices of locations within the radius, ascending."""
        return np.flatnonzero(self.distances(probe) <= self.config.radius)

    def write(self, addr: Hypervector, data: Hypervector) -> WriteReport:
        self._check(data)
        idx = self.activate(addr)
        if idx.size:
            lim = self.config.counter_limit
            rows = self.counters[idx].astype(np.int64) + data.bipolar()
            np.clip(rows, -lim, lim, out=rows)
            self.counters[idx] = rows
        self.write_count += 1
        self.activation_total += int(idx.size)
        return WriteReport(int(idx.size))

    def read(self, addr: Hypervector, rng: RandomSource) -> ReadResult:
        """Sum and threshold the activated rows.

        Raises :class:`NoActiveLocation` if nothing is activated. An all-zero
        sum is not raised: it comes back with ``vector=None`` (``empty`` set)
        so the caller can tell "nothing stored here" from a weak recall.
        """
        idx = self.activate(addr)
        if idx.size == 0:
            raise NoActiveLocation("probe activated no location")
        sums = self.counters[idx].sum(axis=0, dtype=np.int64)
        confidence = float(np.abs(sums).mean() / idx.size)
        if not sums.any():
            return ReadResult(None, 0.0, int(idx.size), sums)
        out = (sums > 0).astype(np.uint8)
        ties = np.flatnonzero(sums == 0)
        if ties.size:
            out[ties] = rng.bits(ties.size)
        return ReadResult(Hypervector._wrap(out), confidence, int(idx.size), sums)

    def read_iterative(self, probe: Hypervector, max_iters: int, rng: RandomSource) -> IterativeResult:
        """Feed each read back in as the next probe until it stops changing."""
        if max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        current = probe
        for it in range(1, max_iters + 1):
            res = self.read(current, rng)
            if res.empty:
                return IterativeResult(None, it, False, empty=True)
            if res.vector == current:
                return IterativeResult(res.vector, it, True)
            current = res.vector
        return IterativeResult(current, max_iters, False)

    def stats(self) -> SdmStats:
        c = self.counters
        lim = self.config.counter_limit
        values, counts = np.unique(c, return_counts=True)
        return SdmStats(
            writes=self.write_count,
            mean_activation=self.activation_total / self.write_count if self.write_count else 0.0,
            saturation_fraction=float(np.count_nonzero(np.abs(c.astype(np.int64)) >= lim) / c.size),
            nonzero_fraction=float(np.count_nonzero(c) / c.size),
            counter_histogram={int(v): int(n) for v, n in zip(values, counts)},
        )

    def to_bytes(self) -> bytes:
        cfg = self.config
        head = _MAGIC + _HEADER.pack(
            cfg.dim, cfg.m, cfg.radius, cfg.counter_bits, self.seed,
            self.write_count, self.activation_total,
        )
        addrs = np.packbits(self._address_bits, axis=1, bitorder="little").tobytes()
        return head + addrs + self.counters.astype(_COUNTER_DTYPES[cfg.counter_bits]).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> Sdm:
        if data[:4] != _MAGIC:
            raise FormatError("not an SDM file (bad magic)")
        try:
            d, m, radius, bits, seed, writes, acts = _HEADER.unpack_from(data, 4)
        except struct.error:
            raise FormatError("truncated SDM header") from None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cfg = SdmConfig(d, m, radius, bits)
        pos = 4 + _HEADER.size
        nbytes = (d + 7) // 8
        dtype = np.dtype(_COUNTER_DTYPES[bits])
        expected = pos + m * nbytes + m * d * dtype.itemsize
        if len(data) != expected:
            raise FormatError(f"SDM file size {len(data)} != expected {expected}")
        packed = np.frombuffer(data, dtype=np.uint8, count=m * nbytes, offset=pos).reshape(m, nbytes)
        addr = np.unpackbits(packed, axis=1, count=d, bitorder="little")
        mem = cls(cfg, addr, seed)
        pos += m * nbytes
        mem.counters = np.frombuffer(data, dtype=dtype, offset=pos).reshape(m, d).astype(dtype.newbyteorder("="))
        mem.write_count = writes
        mem.activation_total = acts
        return mem

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: str | Path) -> Sdm:
        return cls.from_bytes(Path(path).read_bytes())

    def __repr__(self) -> str:
        c = self.config
        return f"Sdm(D={c.dim}, m={c.m}, radius={c.radius}, writes={self.write_count})"


def degradation_curve(
    dim: int = 1000,
    m: int = 10_000,
    target_p: float = 0.001,
    loads: list[int] | tuple[int, ...] = (50, 100, 250, 500, 1000, 1500, 2000),
    seed: int = 0,
    counter_bits: int = 8,
) -> list[dict]:
    """Write random (address, data) pairs and read them all back at each load.

    Items are written incrementally; at every load point all items stored so
    far are re-read at their own address. A read that activates nothing
    counts as chance similarity (0.5).
    """
    loads = sorted(int(n) for n in loads if n > 0)
    if not loads:
        return []
    rng = RandomSource(seed)
    mem = Sdm.random(SdmConfig.from_target_p(dim, m, target_p, counter_bits), rng.derive(0))
    n_max = loads[-1]
    item_rng = rng.derive(1)
    addrs = [Hypervector._wrap(item_rng.bits(dim)) for _ in range(n_max)]
    datas = [Hypervector._wrap(item_rng.bits(dim)) for _ in range(n_max)]
    read_rng = rng.derive(2)
    curve = []
    written = 0
    for n in loads:
        while written < n:
            mem.write(addrs[written], datas[written])
            written += 1
        sims = []
        missed = 0
        for a, x in zip(addrs[:n], datas[:n]):
            try:
                res = mem.read(a, read_rng)
            except NoActiveLocation:
                missed += 1
                sims.append(0.5)
                continue
            sims.append(0.5 if res.empty else hamming_similarity(res.vector, x))
        st = mem.stats()
        curve.append({
            "items": n,
            "mean_similarity": float(np.mean(sims)),
            "min_similarity": float(np.min(sims)),
            "no_active_reads": missed,
            "mean_activation": st.mean_activation,
            "saturation_fraction": st.saturation_fraction,
        })
    return curve


def curve_trend(curve: list[dict]) -> dict:
    """Least-squares slope of mean similarity vs load, and the largest single-step drop."""
    if len(curve) < 2:
        return {"slope": 0.0, "max_drop": 0.0}
    x = np.array([p["items"] for p in curve], dtype=float)
    y = np.array([p["mean_similarity"] for p in curve])
    slope = float(np.polyfit(x, y, 1)[0])
    drops = -np.diff(y)
    return {"slope": slope, "max_drop": float(max(0.0, drops.max()))}
