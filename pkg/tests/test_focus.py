import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdcompute.core import DimensionMismatch, RandomSource, hamming_similarity, random_hv
from hdcompute.focus import Channel, FocusMachine, FocusState, compose_focus, step
from hdcompute.itemmem import Codebook
from hdcompute.sdm import Sdm, SdmConfig
from hdcompute.sequence import Novelty


def memories(seed=0, d=1000):
    cfg = SdmConfig.from_target_p(d, 10_000, 0.001)
    return Sdm.random(cfg, RandomSource(seed)), Sdm.random(cfg, RandomSource(seed + 1))


def test_single_channel_passes_through():
    v = random_hv(RandomSource(1), 500)
    assert compose_focus([Channel("only", 1, v)], RandomSource(0)) == v


def test_heavier_channel_wins_two_against_one():
    rng = RandomSource(2)
    a, b = random_hv(rng, 1000), random_hv(rng, 1000)
    assert compose_focus([Channel("a", 2, a), Channel("b", 1, b)], rng) == a


def test_three_equal_channels_share_the_focus():
    rng = RandomSource(3)
    vs = [random_hv(rng, 10_000) for _ in range(3)]
    f = compose_focus([Channel(str(i), 1, v) for i, v in enumerate(vs)], rng)
    # majority of three agrees with each input at 3/4 of coordinates
    sigma = math.sqrt(0.75 * 0.25 / 10_000)
    for v in vs:
        assert abs(hamming_similarity(f, v) - 0.75) <= 5 * sigma


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=2, max_size=6), st.integers(0, 2**32))
def test_weight_above_half_the_total_dominates(weights, seed):
    rng = RandomSource(seed)
    vs = [random_hv(rng, 128) for _ in weights]
    heavy = sum(weights) + 1
    chans = [Channel(f"c{i}", w, v) for i, (w, v) in enumerate(zip(weights, vs))]
    chans.append(Channel("heavy", heavy, random_hv(rng, 128)))
    assert compose_focus(chans, rng) == chans[-1].current


def test_compose_errors():
    v = random_hv(RandomSource(4), 64)
    with pytest.raises(ValueError):
        compose_focus([], RandomSource(0))
    with pytest.raises(ValueError):
        compose_focus([Channel("a", 0, v), Channel("b", 0, v)], RandomSource(0))
    with pytest.raises(ValueError):
        compose_focus([Channel(str(i), 1, v) for i in range(11)], RandomSource(0))
    with pytest.raises(ValueError):
        Channel("neg", -1, v)
    with pytest.raises(DimensionMismatch):
        compose_focus([Channel("a", 1, v), Channel("b", 1, random_hv(RandomSource(0), 65))], RandomSource(0))


def test_zero_weight_channel_is_ignored():
    rng = RandomSource(5)
    a, b = random_hv(rng, 300), random_hv(rng, 300)
    assert compose_focus([Channel("a", 1, a), Channel("b", 0, b)], rng) == a


@pytest.fixture
def cycle():
    cb = Codebook(1000, 6, ["sight", "sound", "red", "green", "blue", "hum", "click", "hiss"])
    ticks = [("red", "hum"), ("green", "click"), ("blue", "hiss")]
    return cb, [[Channel("sight", 2, cb[s]), Channel("sound", 1, cb[t])] for s, t in ticks]


def test_record_then_predict_follows_the_cycle(cycle):
    _, ticks = cycle
    links, auto = memories(7)
    rng = RandomSource(8)
    state = FocusState()
    focuses = []
    for chans in ticks + ticks[:1]:
        res = step(state, chans, links, "record", rng, auto)
        assert res.prediction is None and res.verdict is None
        focuses.append(res.state.vector)
        state = res.state
    assert links.write_count == 3
    state = FocusState()
    for i in range(6):
        res = step(state, ticks[i % 3], links, "predict", rng, auto)
        assert res.prediction.vector == focuses[(i + 1) % 3]
        assert res.verdict.kind is Novelty.KNOWN
        state = res.state
    assert links.write_count == 3


def test_fresh_memory_gives_nothing_and_novel(cycle):
    _, ticks = cycle
    links, auto = memories(9)
    res = step(FocusState(), ticks[0], links, "predict", RandomSource(0), auto)
    assert res.prediction is None
    assert res.verdict.kind is Novelty.NOVEL
    assert res.state.tick == 1


def test_both_mode_scores_prediction_one_tick_later(cycle):
    cb, ticks = cycle
    links, auto = memories(10)
    fm = FocusMachine(links, auto, RandomSource(11), codebook=cb)
    first_pass = [fm.step(ticks[i % 3], "both")[1] for i in range(4)]
    assert all(log.prediction_match is None for log in first_pass)
    assert [log.novelty for log in first_pass] == ["novel", "novel", "novel", "known"]
    second_pass = [fm.step(ticks[i % 3], "both")[1] for i in range(1, 7)]
    assert all(log.prediction_match == 1.0 for log in second_pass)
    assert [log.tick for log in second_pass] == list(range(5, 11))


def test_focus_runs_are_deterministic(cycle):
    _, ticks = cycle

    def run():
        links, auto = memories(12)
        fm = FocusMachine(links, auto, RandomSource(13))
        return [fm.step(ticks[i % 3], "both")[1].as_dict() for i in range(7)], links.to_bytes()

    assert run() == run()


def test_step_rejects_unknown_mode_and_dim(cycle):
    _, ticks = cycle
    links, _ = memories(14)
    with pytest.raises(ValueError):
        step(FocusState(), ticks[0], links, "dream", RandomSource(0))
    small, _ = memories(15, d=64)
    with pytest.raises(DimensionMismatch):
        step(FocusState(), ticks[0], small, "record", RandomSource(0))


def test_carry_weight_and_reset(cycle):
    _, ticks = cycle
    links, auto = memories(16)
    fm = FocusMachine(links, auto, RandomSource(17), carry_weight=1)
    fm.step(ticks[0], "record")
    res, _ = fm.step(ticks[1], "record")
    assert res.state.tick == 2
    fm.reset()
    assert fm.state.vector is None and fm.pending is None
    assert FocusState().digest() == ""
