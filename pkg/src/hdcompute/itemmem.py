"""Item memory: a codebook of random seed vectors with cleanup by exhaustive scan."""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Iterable

import numpy as np

from .core import (
    DEFAULT_DIM,
    DimensionMismatch,
    FormatError,
    Hypervector,
    RandomSource,
    check_dim,
)

_MAGIC = b"HDCB"


class Codebook:
    """Ordered symbol -> hypervector map.

    The i-th assigned symbol receives the vector drawn from the child stream
    ``RandomSource(seed).derive(i)``, so two codebooks with the same seed and
    insertion order hold identical entries.
    """

    def __init__(self, d: int = DEFAULT_DIM, seed: int = 0, symbols: Iterable[str] = ()):
        self.dim = check_dim(d)
        self.seed = int(seed)
        self._root = RandomSource(self.seed)
        self._index: dict[str, int] = {}
        self._symbols: list[str] = []
        self._rows = np.zeros((0, self.dim), dtype=np.uint8)
        for s in symbols:
            self.assign(s)

    def assign(self, symbol: str) -> Hypervector:
        if symbol in self._index:
            raise KeyError(f"symbol {symbol!r} already assigned")
        i = len(self._symbols)
        hv = Hypervector._wrap(self._root.derive(i).bits(self.dim))
        self._append(symbol, hv)
        return hv

    def _append(self, symbol: str, hv: Hypervector) -> None:
        self._index[symbol] = len(self._symbols)
        self._symbols.append(symbol)
        self._rows = np.vstack([self._rows, hv.bits[None, :]])

    def __getitem__(self, symbol: str) -> Hypervector:
        return Hypervector(self._rows[self._index[symbol]])

    def get(self, symbol: str) -> Hypervector | None:
        return self[symbol] if symbol in self._index else None

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index

    def __len__(self) -> int:
        return len(self._symbols)

    @property
    def symbols(self) -> list[str]:
        return list(self._symbols)

    @property
    def matrix(self) -> np.ndarray:
        """Entries stacked as a read-only (n, D) uint8 array, in insertion order."""
        view = self._rows.view()
        view.flags.writeable = False
        return view

    def similarities(self, query: Hypervector) -> np.ndarray:
        if not self._symbols:
            raise LookupError("codebook is empty")
        if query.dim != self.dim:
            raise DimensionMismatch(self.dim, query.dim)
        diff = np.count_nonzero(self._rows != query.bits[None, :], axis=1)
        return 1.0 - diff / self.dim

    def top_k(self, query: Hypervector, k: int) -> list[tuple[str, float]]:
        """Best ``k`` matches, by similarity and then by insertion order."""
        if k < 1:
            raise ValueError("k must be >= 1")
        sims = self.similarities(query)
        order = np.argsort(-sims, kind="stable")[:k]
        return [(self._symbols[i], float(sims[i])) for i in order]

    def cleanup(self, noisy: Hypervector) -> tuple[str, float]:
        return self.top_k(noisy, 1)[0]

    def to_bytes(self) -> bytes:
        out = [_MAGIC, struct.pack("<QII", self.seed, self.dim, len(self))]
        nbytes = (self.dim + 7) // 8
        packed = np.packbits(self._rows, axis=1, bitorder="little")
        for sym, row in zip(self._symbols, packed):
            raw = sym.encode("utf-8")
            out.append(struct.pack("<I", len(raw)))
            out.append(raw)
            out.append(row[:nbytes].tobytes())
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> Codebook:
        if data[:4] != _MAGIC:
            raise FormatError("not a codebook file (bad magic)")
        try:
            seed, d, count = struct.unpack_from("<QII", data, 4)
            cb = cls(d, seed)
            nbytes = (d + 7) // 8
            pos = 20
            for _ in range(count):
                (n,) = struct.unpack_from("<I", data, pos)
                pos += 4
                sym = data[pos:pos + n].decode("utf-8")
                pos += n
                hv = Hypervector.from_packed(data[pos:pos + nbytes], d)
                pos += nbytes
                cb._append(sym, hv)
        except struct.error as exc:
            raise FormatError(f"truncated codebook: {exc}") from None
        if pos != len(data):
            raise FormatError("trailing bytes after codebook records")
        return cb

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: str | Path) -> Codebook:
        return cls.from_bytes(Path(path).read_bytes())

    def __repr__(self) -> str:
        return f"Codebook(D={self.dim}, seed={self.seed}, n={len(self)})"


def cleanup(cb: Codebook, noisy: Hypervector) -> tuple[str, float]:
    return cb.cleanup(noisy)


def top_k(cb: Codebook, query: Hypervector, k: int) -> list[tuple[str, float]]:
    return cb.top_k(query, k)
