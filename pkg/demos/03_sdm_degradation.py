"""
Sparse Distributed Memory under load
====================================

10,000 hard locations of 1,000 bits, radius chosen so that about 10
locations fire per address. Stored items are read back as the memory
fills up; recall fades slowly instead of collapsing.
"""

from hdcompute import RandomSource, Sdm, SdmConfig, hamming_similarity, random_hv
from hdcompute.sdm import curve_trend, degradation_curve

cfg = SdmConfig.from_target_p(dim=1000, m=10_000, target_p=0.001)
print(cfg, "expected active per address:", round(cfg.expected_active(), 2))

mem = Sdm.random(cfg, RandomSource(0))
rng = RandomSource(1)
pairs = [(random_hv(rng, 1000), random_hv(rng, 1000)) for _ in range(50)]
for addr, data in pairs:
    mem.write(addr, data)
sims = [hamming_similarity(mem.read(addr, rng).vector, data) for addr, data in pairs]
print(f"50 pairs: min similarity {min(sims):.3f}")
print(mem.stats())

# similarity vs number of stored items (takes a few seconds)
curve = degradation_curve(dim=1000, m=10_000, target_p=0.001, seed=0)
for point in curve:
    bar = "#" * int(round(100 * (point["mean_similarity"] - 0.9)))
    print(f"{point['items']:>5} items  {point['mean_similarity']:.4f}  {bar}")
print("trend", curve_trend(curve))
