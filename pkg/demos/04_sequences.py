"""
Sequences in associative memory
===============================

A history is a linked list: each moment is written at the address of the
moment before it. Reading at a moment predicts the next one. A second,
autoassociative memory tells familiar moments from new ones.
"""

from hdcompute import Codebook, Hypervector, RandomSource, Sdm, SdmConfig
from hdcompute.sequence import detect_novelty, predict_next, record_autoassociative, record_history

rng = RandomSource(3)
cb = Codebook(1000, seed=3, symbols=["wake", "coffee", "commute", "work", "lunch", "home", "sleep"])
day = ["wake", "coffee", "commute", "work", "lunch", "work", "home", "sleep", "wake"]

links = Sdm.random(SdmConfig.from_target_p(1000, 10_000, 0.001), rng.derive(1))
record_history(links, [cb[s] for s in day])

# replay from "wake"; "work" has two recorded successors, so its read is a blend
state = "wake"
walk = [state]
for _ in range(8):
    pred = predict_next(links, cb[state], rng, cb)
    if pred is None:
        break
    state = pred.symbol
    walk.append(f"{state}({pred.symbol_similarity:.2f})")
print(" -> ".join(walk))

# novelty against an autoassociative memory
auto = Sdm.random(SdmConfig.from_target_p(1000, 10_000, 0.01), rng.derive(2))
for s in day:
    record_autoassociative(auto, cb[s])
stranger = Codebook(1000, seed=99, symbols=["holiday"])["holiday"]
print("coffee  ", detect_novelty(auto, cb["coffee"], rng).as_dict())
print("holiday ", detect_novelty(auto, stranger, rng).as_dict())
bits = cb["lunch"].bits.copy()
bits[rng.generator.choice(1000, 200, replace=False)] ^= 1
print("lunch~  ", detect_novelty(auto, Hypervector(bits), rng).as_dict())
