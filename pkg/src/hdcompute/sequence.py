"""Sequences over vectors: history as a linked list in SDM, prediction,
novelty detection by autoassociation, and short-sequence chunks.

n-grams bind position-tagged items (a quasi-orthogonal key); chunks bundle
them (a decodable set). In both, the item at position i of a length-n window
is rotated n-1-i times, so the oldest item is rotated most.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    Accumulator,
    DimensionMismatch,
    Hypervector,
    RandomSource,
    hamming_similarity,
    permute,
    threshold,
)
from .itemmem import Codebook
from .sdm import NoActiveLocation, Sdm, WriteReport

CHUNK_LIMIT = 10

NOVELTY_LOW = 0.6
NOVELTY_HIGH = 0.9


def _check_trace(trace: Sequence[Hypervector]) -> int:
    d = trace[0].dim
    for v in trace[1:]:
        if v.dim != d:
            raise DimensionMismatch(d, v.dim)
    return d


def record_history(sdm: Sdm, trace: Sequence[Hypervector]) -> int:
    """Store each moment's successor at the moment's own address."""
    if len(trace) < 2:
        raise ValueError("a history needs at least two moments")
    _check_trace(trace)
    for cur, nxt in zip(trace[:-1], trace[1:]):
        sdm.write(cur, nxt)
    return len(trace) - 1


@dataclass
class Prediction:
    vector: Hypervector
    confidence: float
    symbol: str | None = None
    symbol_similarity: float | None = None


def predict_next(
    sdm: Sdm,
    current: Hypervector,
    rng: RandomSource,
    codebook: Codebook | None = None,
) -> Prediction | None:
    """Read the memory at ``current``; ``None`` means no prediction is available."""
    try:
        res = sdm.read(current, rng)
    except NoActiveLocation:
        return None
    if res.empty:
        return None
    pred = Prediction(res.vector, res.confidence)
    if codebook is not None and len(codebook):
        pred.symbol, pred.symbol_similarity = codebook.cleanup(res.vector)
    return pred


def record_autoassociative(sdm: Sdm, moment: Hypervector) -> WriteReport:
    return sdm.write(moment, moment)


class Novelty(enum.Enum):
    NOVEL = "novel"
    KNOWN = "known"
    SIMILAR_WITH_DELTA = "similar_with_delta"


@dataclass
class NoveltyVerdict:
    kind: Novelty
    similarity: float
    recalled: Hypervector | None = None

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "similarity": self.similarity}


def classify_similarity(similarity: float, low: float = NOVELTY_LOW, high: float = NOVELTY_HIGH) -> Novelty:
    if similarity >= high:
        return Novelty.KNOWN
    if similarity <= low:
        return Novelty.NOVEL
    return Novelty.SIMILAR_WITH_DELTA


def detect_novelty(
    sdm: Sdm,
    moment: Hypervector,
    rng: RandomSource,
    low: float = NOVELTY_LOW,
    high: float = NOVELTY_HIGH,
) -> NoveltyVerdict:
    """Compare ``moment`` with what an autoassociative memory recalls for it."""
    if not 0.0 <= low < high <= 1.0:
        raise ValueError("need 0 <= low < high <= 1")
    if moment.dim != sdm.dim:
        raise DimensionMismatch(sdm.dim, moment.dim)
    try:
        res = sdm.read(moment, rng)
    except NoActiveLocation:
        return NoveltyVerdict(Novelty.NOVEL, 0.0)
    if res.empty:
        return NoveltyVerdict(Novelty.NOVEL, 0.0)
    sim = hamming_similarity(res.vector, moment)
    return NoveltyVerdict(classify_similarity(sim, low, high), sim, res.vector)


def _check_window(window: Sequence[Hypervector], limit: int = CHUNK_LIMIT) -> int:
    if len(window) == 0:
        raise ValueError("empty window")
    if len(window) > limit:
        raise ValueError(f"window of {len(window)} exceeds the chunk limit of {limit}")
    return _check_trace(window)


def encode_ngram(window: Sequence[Hypervector]) -> Hypervector:
    """XOR of the window's items, item i rotated n-1-i places.

    For three items this is rot2(a) ^ rot1(b) ^ c.
    """
    n = len(window)
    _check_window(window)
    bits = np.zeros(window[0].dim, dtype=np.uint8)
    for i, v in enumerate(window):
        bits ^= np.roll(v.bits, n - 1 - i)
    return Hypervector._wrap(bits)


def encode_chunk(items: Sequence[Hypervector], rng: RandomSource, limit: int = CHUNK_LIMIT) -> Hypervector:
    """Majority of the position-rotated items; ties (even k) take random bits.

    ``limit`` only exists so capacity probes can push past the working-memory
    bound; normal callers leave it alone.
    """
    k = len(items)
    d = _check_window(items, limit)
    acc = Accumulator(d)
    for i, v in enumerate(items):
        acc.add(permute(v, k - 1 - i))
    return threshold(acc, rng)


def decode_chunk(
    chunk: Hypervector, k: int, codebook: Codebook, limit: int = CHUNK_LIMIT
) -> list[tuple[str, float]]:
    """Undo each position's rotation and clean up against ``codebook``."""
    if not 1 <= k <= limit:
        raise ValueError(f"k must be in 1..{limit}")
    return [codebook.cleanup(permute(chunk, -(k - 1 - i))) for i in range(k)]
