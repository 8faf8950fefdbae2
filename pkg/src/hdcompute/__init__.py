"""Computing with binary hypervectors: a vector instruction set, item memory,
Sparse Distributed Memory, sequence memory with a focus, and trigram-profile
language identification."""

from .core import (
    DEFAULT_DIM,
    Accumulator,
    DimensionMismatch,
    FormatError,
    Hypervector,
    RandomSource,
    accumulate,
    bind,
    bundle,
    cosine,
    hamming_distance,
    hamming_similarity,
    permute,
    random_hv,
    threshold,
)
from .itemmem import Codebook
from .sdm import EmptyRead, NoActiveLocation, Sdm, SdmConfig, choose_radius

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_DIM",
    "Accumulator",
    "Codebook",
    "DimensionMismatch",
    "EmptyRead",
    "FormatError",
    "Hypervector",
    "NoActiveLocation",
    "RandomSource",
    "Sdm",
    "SdmConfig",
    "accumulate",
    "bind",
    "bundle",
    "choose_radius",
    "cosine",
    "hamming_distance",
    "hamming_similarity",
    "permute",
    "random_hv",
    "threshold",
]
