"""The focus: one vector summarizing working memory, stepped through time.

Each tick the focus is recomposed from weighted channel vectors. The previous
focus only influences the next one through long-term memory: in record mode
the step old -> new is written as a link, and the new focus is stored
autoassociatively; in predict mode the memory is read at the new focus to
predict the following moment and to judge whether the new focus is familiar.

Links and autoassociations go to separate memories. Writing both into one SDM
would make every link read an even mix of "this moment" and "the next one".
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Literal, Sequence

from .core import Accumulator, DimensionMismatch, Hypervector, RandomSource, hamming_similarity, threshold
from .sdm import Sdm
from .sequence import (
    CHUNK_LIMIT,
    NOVELTY_HIGH,
    NOVELTY_LOW,
    Novelty,
    NoveltyVerdict,
    Prediction,
    detect_novelty,
    predict_next,
    record_autoassociative,
)

Mode = Literal["record", "predict", "both"]


@dataclass
class Channel:
    name: str
    weight: int
    current: Hypervector

    def __post_init__(self):
        if int(self.weight) != self.weight or self.weight < 0:
            raise ValueError(f"channel {self.name!r}: weight must be a nonnegative integer")
        self.weight = int(self.weight)


@dataclass(frozen=True)
class FocusState:
    vector: Hypervector | None = None
    tick: int = 0

    def digest(self) -> str:
        if self.vector is None:
            return ""
        return hashlib.sha256(self.vector.packed()).hexdigest()[:16]


def compose_focus(channels: Sequence[Channel], rng: RandomSource) -> Hypervector:
    """Integer-weighted majority: each channel is counted ``weight`` times."""
    if not channels:
        raise ValueError("no channels")
    if len(channels) > CHUNK_LIMIT:
        raise ValueError(f"at most {CHUNK_LIMIT} channels fit in the focus")
    if not any(c.weight > 0 for c in channels):
        raise ValueError("all channel weights are zero")
    d = channels[0].current.dim
    acc = Accumulator(d)
    for c in channels:
        if c.current.dim != d:
            raise DimensionMismatch(d, c.current.dim)
        acc.add(c.current, c.weight)
    return threshold(acc, rng)


@dataclass
class StepResult:
    state: FocusState
    prediction: Prediction | None = None
    verdict: NoveltyVerdict | None = None


def step(
    state: FocusState,
    channels: Sequence[Channel],
    sdm: Sdm,
    mode: Mode,
    rng: RandomSource,
    auto_sdm: Sdm | None = None,
    codebook=None,
    low: float = NOVELTY_LOW,
    high: float = NOVELTY_HIGH,
) -> StepResult:
    """Advance one tick.

    ``sdm`` holds the history links; ``auto_sdm`` (optional) holds the
    autoassociative copies used for novelty. Reads happen before writes, so a
    moment is judged against memory as it stood before this tick.
    """
    if mode not in ("record", "predict", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    new = compose_focus(channels, rng)
    if new.dim != sdm.dim:
        raise DimensionMismatch(sdm.dim, new.dim)
    result = StepResult(FocusState(new, state.tick + 1))
    if mode in ("predict", "both"):
        result.prediction = predict_next(sdm, new, rng, codebook)
        if auto_sdm is not None:
            result.verdict = detect_novelty(auto_sdm, new, rng, low, high)
    if mode in ("record", "both"):
        if state.vector is not None:
            sdm.write(state.vector, new)
        if auto_sdm is not None:
            record_autoassociative(auto_sdm, new)
    return result


@dataclass
class TickLog:
    tick: int
    digest: str
    predicted_symbol: str | None
    prediction_match: float | None
    novelty: str | None
    novelty_similarity: float | None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class FocusMachine:
    """Stateful wrapper around :func:`step`.

    Keeps the last prediction so that, one tick later, it can be scored
    against the focus that actually arrived (``prediction_match``).
    ``carry_weight`` > 0 adds the previous focus as an extra channel; it is
    off by default.
    """

    sdm: Sdm
    auto_sdm: Sdm | None
    rng: RandomSource
    codebook: object = None
    carry_weight: int = 0
    state: FocusState = field(default_factory=FocusState)
    pending: Prediction | None = None

    def step(self, channels: Sequence[Channel], mode: Mode = "both") -> tuple[StepResult, TickLog]:
        chans = list(channels)
        if self.carry_weight and self.state.vector is not None:
            chans.append(Channel("previous-focus", self.carry_weight, self.state.vector))
        res = step(self.state, chans, self.sdm, mode, self.rng, self.auto_sdm, self.codebook)
        match = None
        if self.pending is not None:
            match = hamming_similarity(self.pending.vector, res.state.vector)
        self.state = res.state
        self.pending = res.prediction
        log = TickLog(
            tick=res.state.tick,
            digest=res.state.digest(),
            predicted_symbol=res.prediction.symbol if res.prediction else None,
            prediction_match=match,
            novelty=res.verdict.kind.value if res.verdict else None,
            novelty_similarity=res.verdict.similarity if res.verdict else None,
        )
        return res, log

    def reset(self) -> None:
        """Forget the current focus (memories are kept)."""
        self.state = FocusState()
        self.pending = None


__all__ = [
    "Channel",
    "FocusMachine",
    "FocusState",
    "Novelty",
    "StepResult",
    "TickLog",
    "compose_focus",
    "step",
]
