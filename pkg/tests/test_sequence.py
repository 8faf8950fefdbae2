import numpy as np
import pytest

from hdcompute.core import DimensionMismatch, Hypervector, RandomSource, hamming_similarity, permute, random_hv
from hdcompute.itemmem import Codebook
from hdcompute.sdm import Sdm, SdmConfig
from hdcompute.sequence import (
    Novelty,
    classify_similarity,
    decode_chunk,
    detect_novelty,
    encode_chunk,
    encode_ngram,
    predict_next,
    record_autoassociative,
    record_history,
)

from conftest import flip, rotate_right, xor_lists

HV = Hypervector.from_string
LETTERS = list("abcdefghijklmnopqrstuvwxyz ")


def light_sdm(seed=0, p=0.001, bits=8):
    return Sdm.random(SdmConfig.from_target_p(1000, 10_000, p, counter_bits=bits), RandomSource(seed))


# -- history -------------------------------------------------------------------


def test_record_history_counts_writes():
    mem = light_sdm()
    rng = RandomSource(1)
    assert record_history(mem, [random_hv(rng, 1000), random_hv(rng, 1000)]) == 1
    assert mem.write_count == 1
    with pytest.raises(ValueError):
        record_history(mem, [random_hv(rng, 1000)])
    with pytest.raises(DimensionMismatch):
        record_history(mem, [random_hv(rng, 1000), random_hv(rng, 999)])


def test_long_trace_is_recalled_link_by_link():
    mem = light_sdm(2)
    rng = RandomSource(3)
    trace = [random_hv(rng, 1000) for _ in range(100)]
    record_history(mem, trace)
    for cur, nxt in zip(trace[:-1], trace[1:]):
        assert hamming_similarity(predict_next(mem, cur, rng).vector, nxt) >= 0.95


def test_recording_twice_doubles_counters():
    rng = RandomSource(4)
    trace = [random_hv(rng, 1000) for _ in range(20)]
    once, twice = light_sdm(5, bits=32), light_sdm(5, bits=32)
    record_history(once, trace)
    record_history(twice, trace)
    record_history(twice, trace)
    assert np.array_equal(twice.counters, 2 * once.counters)


def test_predict_single_link_with_symbol():
    cb = Codebook(1000, 6, ["A", "B"])
    mem = light_sdm(7)
    record_history(mem, [cb["A"], cb["B"]])
    pred = predict_next(mem, cb["A"], RandomSource(0), cb)
    assert pred.vector == cb["B"]
    assert pred.symbol == "B" and pred.symbol_similarity == 1.0
    assert pred.confidence == pytest.approx(1.0)


def test_predict_on_untrained_memory():
    mem = light_sdm(8)
    assert predict_next(mem, random_hv(RandomSource(9), 1000), RandomSource(0)) is None


def test_predict_walks_a_cycle():
    cb = Codebook(1000, 10, ["A", "B", "C"])
    mem = light_sdm(11)
    record_history(mem, [cb["A"], cb["B"], cb["C"], cb["A"]])
    rng = RandomSource(12)
    cur, walked = cb["A"], []
    for _ in range(6):
        pred = predict_next(mem, cur, rng, cb)
        walked.append(pred.symbol)
        cur = cb[pred.symbol]
    assert walked == list("BCABCA")


# -- autoassociation and novelty -------------------------------------------------


def test_autoassociative_recall():
    mem = light_sdm(13)
    v = random_hv(RandomSource(14), 1000)
    rep = record_autoassociative(mem, v)
    assert rep.n_active > 0
    assert mem.read(v, RandomSource(0)).vector == v


def test_frequent_beats_rare():
    # moderate load: 200 background items at p=0.01
    rng = RandomSource(15)
    mem = light_sdm(16, p=0.01)
    for _ in range(200):
        record_autoassociative(mem, random_hv(rng, 1000))
    frequent, rare = random_hv(rng, 1000), random_hv(rng, 1000)
    for _ in range(10):
        record_autoassociative(mem, frequent)
    record_autoassociative(mem, rare)
    sim_f = hamming_similarity(mem.read(frequent, rng).vector, frequent)
    sim_r = hamming_similarity(mem.read(rare, rng).vector, rare)
    assert sim_f >= sim_r
    assert sim_f == 1.0


def test_corrupted_probe_converges_to_stored():
    rng = RandomSource(17)
    mem = light_sdm(18, p=0.01)
    v = random_hv(rng, 1000)
    record_autoassociative(mem, v)
    res = mem.read_iterative(flip(v, 0.10, rng), 10, rng)
    assert res.converged and res.vector == v


@pytest.fixture(scope="module")
def novelty_memory():
    rng = RandomSource(19)
    mem = light_sdm(20, p=0.01)
    stored = [random_hv(rng, 1000) for _ in range(20)]
    for v in stored:
        record_autoassociative(mem, v)
    return mem, stored


def test_novelty_known(novelty_memory):
    mem, stored = novelty_memory
    verdict = detect_novelty(mem, stored[0], RandomSource(0), 0.6, 0.9)
    assert verdict.kind is Novelty.KNOWN and verdict.similarity == 1.0


def test_novelty_novel(novelty_memory):
    mem, _ = novelty_memory
    rng = RandomSource(21)
    for _ in range(10):
        assert detect_novelty(mem, random_hv(rng, 1000), rng).kind is Novelty.NOVEL


def test_novelty_novel_on_empty_memory():
    verdict = detect_novelty(light_sdm(22), random_hv(RandomSource(0), 1000), RandomSource(0))
    assert verdict.kind is Novelty.NOVEL and verdict.recalled is None


def test_novelty_similar_with_delta(novelty_memory):
    mem, stored = novelty_memory
    rng = RandomSource(23)
    moment = flip(stored[3], 0.20, rng)
    verdict = detect_novelty(mem, moment, rng)
    assert verdict.kind is Novelty.SIMILAR_WITH_DELTA
    assert hamming_similarity(verdict.recalled, stored[3]) >= 0.95


def test_novelty_similarity_falls_with_corruption(novelty_memory):
    mem, stored = novelty_memory
    rng = RandomSource(24)
    sims = [detect_novelty(mem, flip(stored[5], f, rng), rng).similarity for f in (0.0, 0.05, 0.1, 0.2, 0.3, 0.5)]
    assert sims[0] == 1.0
    assert all(a >= b - 0.02 for a, b in zip(sims, sims[1:]))


def test_novelty_thresholds():
    assert classify_similarity(0.9) is Novelty.KNOWN
    assert classify_similarity(0.6) is Novelty.NOVEL
    assert classify_similarity(0.75) is Novelty.SIMILAR_WITH_DELTA
    mem = light_sdm(25)
    with pytest.raises(ValueError):
        detect_novelty(mem, random_hv(RandomSource(0), 1000), RandomSource(0), 0.9, 0.6)
    with pytest.raises(DimensionMismatch):
        detect_novelty(mem, random_hv(RandomSource(0), 10), RandomSource(0))


# -- n-grams -------------------------------------------------------------------------


def test_ngram_of_one_is_identity():
    v = random_hv(RandomSource(26), 300)
    assert encode_ngram([v]) == v


def test_ngram_d8_example():
    a, b, c = "10110010", "01101010", "11100001"
    expected = xor_lists(rotate_right([int(x) for x in a], 2), rotate_right([int(x) for x in b], 1), [int(x) for x in c])
    got = encode_ngram([HV(a), HV(b), HV(c)])
    assert got.bits.tolist() == expected
    assert str(got) == "01111000"


def test_ngram_is_order_sensitive():
    rng = RandomSource(27)
    a, b, c = (random_hv(rng, 10_000) for _ in range(3))
    fwd, rev = encode_ngram([a, b, c]), encode_ngram([c, b, a])
    assert fwd != rev
    assert abs(hamming_similarity(fwd, rev) - 0.5) <= 0.025


def test_ngram_window_limits():
    v = random_hv(RandomSource(28), 64)
    with pytest.raises(ValueError):
        encode_ngram([])
    with pytest.raises(ValueError):
        encode_ngram([v] * 11)
    with pytest.raises(DimensionMismatch):
        encode_ngram([v, random_hv(RandomSource(0), 65)])


# -- chunks --------------------------------------------------------------------------


@pytest.fixture(scope="module")
def letters():
    return Codebook(10_000, 29, LETTERS)


def test_chunk_of_one(letters):
    assert encode_chunk([letters["k"]], RandomSource(0)) == letters["k"]
    assert decode_chunk(letters["k"], 1, letters) == [letters.cleanup(letters["k"])]


@pytest.mark.slow
def test_chunk_of_seven_decodes_in_order(letters):
    rng = RandomSource(30)
    for _ in range(100):
        picks = [LETTERS[int(i)] for i in rng.integers(0, 27, size=7)]
        chunk = encode_chunk([letters[p] for p in picks], rng)
        assert [s for s, _ in decode_chunk(chunk, 7, letters)] == picks


def test_chunk_of_two_survives_ties(letters):
    rng = RandomSource(31)
    for _ in range(100):
        picks = [LETTERS[int(i)] for i in rng.integers(0, 27, size=2)]
        chunk = encode_chunk([letters[p] for p in picks], rng)
        decoded = decode_chunk(chunk, 2, letters)
        assert [s for s, _ in decoded] == picks
        assert all(sim > 0.7 for _, sim in decoded)


def test_chunk_decoded_with_wrong_k_is_chance(letters):
    rng = RandomSource(32)
    picks = ["c", "h", "u", "n", "k"]
    chunk = encode_chunk([letters[p] for p in picks], rng)
    for wrong in (4, 6):
        for i in range(min(wrong, 5)):
            aligned = permute(chunk, -(wrong - 1 - i))
            assert abs(hamming_similarity(aligned, letters[picks[i]]) - 0.5) <= 0.03


def test_chunk_limits(letters):
    with pytest.raises(ValueError):
        encode_chunk([letters["a"]] * 11, RandomSource(0))
    with pytest.raises(ValueError):
        decode_chunk(letters["a"], 0, letters)
    with pytest.raises(ValueError):
        decode_chunk(letters["a"], 11, letters)
    # capacity probes may raise the limit explicitly
    encode_chunk([letters["a"]] * 11, RandomSource(0), limit=20)
