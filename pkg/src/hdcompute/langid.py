"""Language identification from letter-trigram profiles.

Text is reduced to 27 symbols (a-z and space). Each symbol gets a random
seed vector; a trigram (a, b, c) is ``rot2(a) ^ rot1(b) ^ c``; a profile is
the integer sum of the bipolar trigram vectors of a text. Sentences go to the
language whose profile has the highest cosine.

A profile is built in one pass: trigram occurrences are counted, then each
distinct trigram's vector is added with its multiplicity. That is the same
integer sum as adding the vectors one window at a time, in far fewer vector
operations.
"""

from __future__ import annotations

import bisect
import re
import struct
import time
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import Accumulator, DimensionMismatch, FormatError, RandomSource, cosine
from .itemmem import Codebook

ALPHABET = "abcdefghijklmnopqrstuvwxyz "
N_SYMBOLS = len(ALPHABET)
N_TRIGRAMS = N_SYMBOLS**3
SPACE = N_SYMBOLS - 1

_SYMBOL_ID = {ch: i for i, ch in enumerate(ALPHABET)}
_LUT = np.full(256, 255, dtype=np.uint8)
for _ch, _i in _SYMBOL_ID.items():
    _LUT[ord(_ch)] = _i

_NON_ALPHA = re.compile(r"[^a-z]+")
_PROFILE_MAGIC = b"LPRF"
_BLOCK = 512


def normalize(raw: str | bytes, fold_diacritics: bool = False) -> str:
    """Lowercase, map everything outside a-z to a space, collapse and trim spaces.

    With ``fold_diacritics`` accented letters lose their marks first
    (``"é" -> "e"``); by default they become spaces like any other
    non-Latin character.
    """
    if isinstance(raw, (bytes, bytearray)):
        raw = raw.decode("utf-8", errors="replace")
    text = raw.lower()
    if fold_diacritics:
        text = "".join(ch for ch in unicodedata.normalize("NFKD", text) if not unicodedata.combining(ch))
    return _NON_ALPHA.sub(" ", text).strip()


def encode_symbols(text: str) -> np.ndarray:
    """Map normalized text to symbol ids 0..26."""
    try:
        raw = text.encode("ascii")
    except UnicodeEncodeError:
        raise ValueError("text contains symbols outside the 27-letter alphabet") from None
    ids = _LUT[np.frombuffer(raw, dtype=np.uint8)]
    if ids.size and ids.max() == 255:
        bad = text[int(np.argmax(ids == 255))]
        raise ValueError(f"symbol {bad!r} is outside the 27-letter alphabet")
    return ids


def alphabet_codebook(d: int, seed: int) -> Codebook:
    return Codebook(d, seed, ALPHABET)


def _check_alphabet(cb: Codebook) -> np.ndarray:
    if cb.symbols != list(ALPHABET):
        raise ValueError("codebook must hold exactly the 27 alphabet symbols in order")
    return cb.matrix


def trigram_ids(symbols: np.ndarray) -> np.ndarray:
    s = symbols.astype(np.int64)
    return s[:-2] * N_SYMBOLS * N_SYMBOLS + s[1:-1] * N_SYMBOLS + s[2:]


def trigram_bits(cb: Codebook, ids: np.ndarray) -> np.ndarray:
    """(len(ids), D) 0/1 array of trigram vectors for the given trigram ids."""
    letters = _check_alphabet(cb)
    a, rest = np.divmod(ids, N_SYMBOLS * N_SYMBOLS)
    b, c = np.divmod(rest, N_SYMBOLS)
    return np.roll(letters, 2, axis=1)[a] ^ np.roll(letters, 1, axis=1)[b] ^ letters[c]


class ProfileBuilder:
    """Streaming profile construction over normalized text.

    ``feed`` may be called with consecutive pieces of one normalized text;
    the last two symbols carry over so windows spanning a boundary count.
    """

    def __init__(self, cb: Codebook):
        _check_alphabet(cb)
        self.codebook = cb
        self.counts = np.zeros(N_TRIGRAMS, dtype=np.int64)
        self._tail = np.zeros(0, dtype=np.uint8)
        self.n_symbols = 0

    def feed(self, text: str) -> ProfileBuilder:
        ids = encode_symbols(text)
        self.n_symbols += ids.size
        joined = np.concatenate([self._tail, ids])
        if joined.size >= 3:
            self.counts += np.bincount(trigram_ids(joined), minlength=N_TRIGRAMS)
        self._tail = joined[-2:]
        return self

    @property
    def n_trigrams(self) -> int:
        return int(self.counts.sum())

    def result(self) -> Accumulator:
        return counts_to_profile(self.codebook, self.counts)


def counts_to_profile(cb: Codebook, counts: np.ndarray) -> Accumulator:
    """Sum of bipolar trigram vectors, each weighted by its count."""
    present = np.flatnonzero(counts)
    total = np.zeros(cb.dim, dtype=np.float64)
    for start in range(0, present.size, _BLOCK):
        ids = present[start:start + _BLOCK]
        bits = trigram_bits(cb, ids).astype(np.float64)
        total += counts[ids].astype(np.float64) @ bits
    n = int(counts.sum())
    # bipolar sum = 2 * (sum of bits) - n; float64 is exact well past 2**31
    acc_counts = np.rint(2.0 * total - n).astype(np.int64)
    return Accumulator(acc_counts, n)


def profile_text(text: str, cb: Codebook) -> Accumulator:
    """Profile of one normalized text; shorter than 3 symbols gives an empty profile."""
    return ProfileBuilder(cb).feed(text).result()


@dataclass
class LanguageProfile:
    label: str
    profile: Accumulator
    source_bytes: int = 0


def train_profiles(
    texts: dict[str, str | bytes],
    cb: Codebook,
    fold_diacritics: bool = False,
    threads: int = 1,
) -> list[LanguageProfile]:
    """One profile per label, returned in label order."""

    def build(label: str) -> LanguageProfile:
        raw = texts[label]
        nbytes = len(raw.encode("utf-8")) if isinstance(raw, str) else len(raw)
        return LanguageProfile(label, profile_text(normalize(raw, fold_diacritics), cb), nbytes)

    labels = sorted(texts)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(build, labels))
    return [build(label) for label in labels]


def classify(
    sentence_profile: Accumulator, profiles: Sequence[LanguageProfile]
) -> tuple[str, float, list[tuple[str, float]]]:
    """Best label by cosine, plus the full ranking (ties go to the smaller label)."""
    if not profiles:
        raise ValueError("no language profiles")
    if sentence_profile.norm() == 0.0:
        raise ValueError("sentence profile has zero norm (fewer than 3 symbols?)")
    ranked = sorted(
        ((p.label, cosine(sentence_profile, p.profile)) for p in profiles),
        key=lambda lc: (-lc[1], lc[0]),
    )
    return ranked[0][0], ranked[0][1], ranked


@dataclass
class ClassificationReport:
    labels: list[str]
    predictions: list[tuple[str, str, float]]
    confusion: np.ndarray
    n_skipped: int = 0
    wall_clock_seconds: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def n_test(self) -> int:
        return int(self.confusion.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.confusion) / self.confusion.sum())

    def per_language(self) -> dict[str, dict]:
        out = {}
        for i, label in enumerate(self.labels):
            row = self.confusion[i]
            n = int(row.sum())
            out[label] = {"n": n, "correct": int(row[i]), "accuracy": float(row[i] / n) if n else None}
        return out

    def top_confusions(self, n: int = 10) -> list[tuple[str, str, int]]:
        off = [
            (self.labels[i], self.labels[j], int(self.confusion[i, j]))
            for i in range(len(self.labels))
            for j in range(len(self.labels))
            if i != j and self.confusion[i, j]
        ]
        return sorted(off, key=lambda t: (-t[2], t[0], t[1]))[:n]

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "n_test": self.n_test,
            "n_skipped": self.n_skipped,
            "labels": self.labels,
            "per_language": self.per_language(),
            "confusion": self.confusion.tolist(),
            "wall_clock_seconds": self.wall_clock_seconds,
            **self.meta,
        }


def evaluate(
    test: Iterable[tuple[str, str]],
    profiles: Sequence[LanguageProfile],
    cb: Codebook,
    fold_diacritics: bool = False,
) -> ClassificationReport:
    """Classify every (true label, raw sentence) pair.

    Sentences that normalize to fewer than 3 symbols have no trigrams and
    are counted in ``n_skipped`` rather than classified.
    """
    t0 = time.perf_counter()
    labels = sorted(p.label for p in profiles)
    index = {label: i for i, label in enumerate(labels)}
    confusion = np.zeros((len(labels), len(labels)), dtype=np.int64)
    predictions = []
    skipped = 0
    seen = 0
    for true, sentence in test:
        seen += 1
        if true not in index:
            raise KeyError(f"test label {true!r} has no trained profile")
        prof = profile_text(normalize(sentence, fold_diacritics), cb)
        if prof.n_added == 0:
            skipped += 1
            continue
        best, cos, _ = classify(prof, profiles)
        confusion[index[true], index[best]] += 1
        predictions.append((true, best, cos))
    if seen == 0:
        raise ValueError("empty test set")
    if not predictions:
        raise ValueError("no test sentence had a trigram")
    return ClassificationReport(labels, predictions, confusion, skipped, time.perf_counter() - t0)


def similarity_matrix(profiles: Sequence[LanguageProfile]) -> tuple[list[str], np.ndarray]:
    """Pairwise cosines, rows/columns in label order."""
    if len(profiles) < 2:
        raise ValueError("need at least two profiles")
    ps = sorted(profiles, key=lambda p: p.label)
    n = len(ps)
    sim = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            sim[i, j] = sim[j, i] = cosine(ps[i].profile, ps[j].profile)
    return [p.label for p in ps], sim


@dataclass
class Clustering:
    labels: list[str]
    linkage: np.ndarray
    assignments: dict[str, int]
    leaf_order: list[str]

    def clusters(self) -> list[list[str]]:
        groups: dict[int, list[str]] = {}
        for label in self.labels:
            groups.setdefault(self.assignments[label], []).append(label)
        return [groups[k] for k in sorted(groups)]


def cluster_profiles(
    profiles: Sequence[LanguageProfile],
    k: int | None = None,
    threshold: float | None = None,
) -> Clustering:
    """Average-linkage clustering on cosine distance ``1 - cos``.

    Cut into ``k`` clusters, or at distance ``threshold``; with neither, every
    merge below the largest one is kept (two top-level clusters). Cluster ids
    are numbered by first appearance in label order, so the result does not
    depend on the order profiles were passed in.
    """
    from scipy.cluster.hierarchy import dendrogram, fcluster, linkage
    from scipy.spatial.distance import squareform

    labels, sim = similarity_matrix(profiles)
    dist = np.clip(1.0 - sim, 0.0, None)
    np.fill_diagonal(dist, 0.0)
    z = linkage(squareform(dist, checks=False), method="average")
    if k is not None:
        raw = fcluster(z, t=k, criterion="maxclust")
    elif threshold is not None:
        raw = fcluster(z, t=threshold, criterion="distance")
    else:
        raw = fcluster(z, t=2, criterion="maxclust")
    renumber: dict[int, int] = {}
    for r in raw:
        renumber.setdefault(int(r), len(renumber))
    assignments = {label: renumber[int(r)] for label, r in zip(labels, raw)}
    order = dendrogram(z, labels=labels, no_plot=True)["ivl"]
    return Clustering(labels, z, assignments, list(order))


def save_profiles(path: str | Path, profiles: Sequence[LanguageProfile], d: int, seed: int) -> None:
    out = [_PROFILE_MAGIC, struct.pack("<IQI", d, seed, len(profiles))]
    for p in profiles:
        if p.profile.dim != d:
            raise DimensionMismatch(d, p.profile.dim)
        raw = p.label.encode("utf-8")
        out += [struct.pack("<I", len(raw)), raw, p.profile.to_bytes()]
    Path(path).write_bytes(b"".join(out))


def load_profiles(path: str | Path) -> tuple[list[LanguageProfile], int, int]:
    """Returns (profiles, D, seed)."""
    data = Path(path).read_bytes()
    if data[:4] != _PROFILE_MAGIC:
        raise FormatError(f"{path}: not a profile store (bad magic)")
    try:
        d, seed, count = struct.unpack_from("<IQI", data, 4)
        pos = 20
        profiles = []
        for _ in range(count):
            (n,) = struct.unpack_from("<I", data, pos)
            label = data[pos + 4:pos + 4 + n].decode("utf-8")
            acc, pos = Accumulator.from_bytes(data, pos + 4 + n)
            if acc.dim != d:
                raise FormatError(f"{path}: profile {label!r} has D={acc.dim}, header says {d}")
            profiles.append(LanguageProfile(label, acc))
    except struct.error:
        raise FormatError(f"{path}: truncated profile store") from None
    return profiles, d, seed


def read_training_dir(path: str | Path) -> dict[str, str]:
    """``<label>.txt`` files -> {label: text}."""
    files = sorted(Path(path).glob("*.txt"))
    if not files:
        raise FileNotFoundError(f"no .txt files in {path}")
    return {f.stem: f.read_text(encoding="utf-8") for f in files}


def read_test_dir(path: str | Path) -> list[tuple[str, str]]:
    """``<label>.txt`` files with one sentence per line -> [(label, sentence)]."""
    out = []
    for label, text in read_training_dir(path).items():
        out += [(label, line) for line in text.splitlines() if line.strip()]
    return out


def minicorpus_dir() -> Path:
    """Bundled real-language corpus: ``train/`` and ``test/`` subdirectories."""
    return Path(str(resources.files("hdcompute") / "data" / "minicorpus"))


MINICORPUS_FAMILIES = {
    "de": "germanic",
    "nl": "germanic",
    "es": "romance",
    "fr": "romance",
    "it": "romance",
    "cs": "slavic",
    "pl": "slavic",
    "sk": "slavic",
}


# -- synthetic languages ---------------------------------------------------


class MarkovLanguage:
    """Second-order Markov source over the 27 symbols.

    ``successors[a, b]`` lists the symbols that may follow the bigram (a, b)
    and ``weights[a, b]`` their probabilities. Space never follows space, so
    sampled text is already normalized.
    """

    def __init__(self, label: str, successors: list[list[np.ndarray]], weights: list[list[np.ndarray]]):
        self.label = label
        self.successors = successors
        self.weights = weights
        self._succ = [[[int(c) for c in successors[a][b]] for b in range(N_SYMBOLS)] for a in range(N_SYMBOLS)]
        self._cum = [[list(np.cumsum(weights[a][b])) for b in range(N_SYMBOLS)] for a in range(N_SYMBOLS)]

    def trigrams(self) -> set[str]:
        return {
            ALPHABET[a] + ALPHABET[b] + ALPHABET[c]
            for a in range(N_SYMBOLS)
            for b in range(N_SYMBOLS)
            for c in self.successors[a][b]
            if not (a == SPACE and b == SPACE)
        }

    def sample(self, n: int, rng: RandomSource) -> str:
        """A normalized string of about ``n`` symbols (trailing space trimmed)."""
        gen = rng.generator
        a, b = (int(x) for x in gen.integers(0, SPACE, size=2))
        out = [a, b]
        for u in gen.random(max(0, n - 2)).tolist():
            succ, cum = self._succ[a][b], self._cum[a][b]
            c = succ[min(bisect.bisect_right(cum, u), len(succ) - 1)]
            out.append(c)
            a, b = b, c
        return "".join([ALPHABET[i] for i in out]).strip()


def synthetic_languages(
    n_families: int,
    per_family: int = 1,
    seed: int = 0,
    concentration: float = 0.5,
) -> list[MarkovLanguage]:
    """Languages whose trigram inventories are disjoint across families.

    For every bigram state the possible next symbols are dealt out among
    families, so no trigram belongs to two families. Languages inside one
    family share that inventory but draw their own transition weights
    (Dirichlet with ``concentration``).
    """
    if n_families < 1 or per_family < 1:
        raise ValueError("need at least one family and one language per family")
    gen = RandomSource(seed).generator
    fam_succ = [[[None] * N_SYMBOLS for _ in range(N_SYMBOLS)] for _ in range(n_families)]
    for a in range(N_SYMBOLS):
        for b in range(N_SYMBOLS):
            pool = np.arange(N_SYMBOLS if b != SPACE else SPACE)
            pool = gen.permutation(pool)
            for f in range(n_families):
                fam_succ[f][a][b] = np.sort(pool[f::n_families])
    langs = []
    for f in range(n_families):
        for j in range(per_family):
            weights = [
                [gen.dirichlet(np.full(len(fam_succ[f][a][b]), concentration)) for b in range(N_SYMBOLS)]
                for a in range(N_SYMBOLS)
            ]
            label = f"syn{f}" if per_family == 1 else f"syn{f}{chr(ord('a') + j)}"
            langs.append(MarkovLanguage(label, fam_succ[f], weights))
    return langs


def synthetic_corpus(
    langs: Sequence[MarkovLanguage],
    train_chars: int,
    n_test: int,
    seed: int = 0,
    min_len: int = 40,
    max_len: int = 120,
) -> tuple[dict[str, str], list[tuple[str, str]]]:
    """Training text per language and ``n_test`` test sentences per language."""
    root = RandomSource(seed)
    train, test = {}, []
    for i, lang in enumerate(langs):
        rng = root.derive(i)
        train[lang.label] = lang.sample(train_chars, rng)
        lengths = rng.integers(min_len, max_len + 1, size=n_test)
        test += [(lang.label, lang.sample(int(n), rng)) for n in lengths]
    return train, test
