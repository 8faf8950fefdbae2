"""
A focus stepping through time
=============================

Each tick the senses are combined into one vector by weighted majority.
After one recorded pass through a cycle, the memory predicts every next
focus exactly.
"""

from hdcompute import Codebook, RandomSource, Sdm, SdmConfig
from hdcompute.focus import Channel, FocusMachine

cb = Codebook(1000, seed=5, symbols=["red", "green", "blue", "hum", "click", "hiss", "cold", "warm", "soft"])
ticks = [("red", "hum", "cold"), ("green", "click", "warm"), ("blue", "hiss", "soft")]


def channels(sight, sound, touch):
    return [Channel("sight", 2, cb[sight]), Channel("sound", 2, cb[sound]), Channel("touch", 1, cb[touch])]


root = RandomSource(5)
cfg = SdmConfig.from_target_p(1000, 10_000, 0.001)
machine = FocusMachine(Sdm.random(cfg, root.derive(1)), Sdm.random(cfg, root.derive(2)), root.derive(3))

print("tick mode    digest            match  novelty")
for mode, seq in [("record", ticks + ticks[:1]), ("predict", ticks * 2)]:
    for t in seq:
        _, log = machine.step(channels(*t), mode)
        match = "  -  " if log.prediction_match is None else f"{log.prediction_match:.3f}"
        print(f"{log.tick:>4} {mode:<7} {log.digest}  {match}  {log.novelty or '-'}")
