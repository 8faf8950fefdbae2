"""
Binary hypervectors and their three operations
==============================================

Random 10,000-bit vectors, XOR binding, majority bundling and rotation.
"""

import numpy as np

from hdcompute import RandomSource, bind, bundle, hamming_similarity, permute, random_hv

rng = RandomSource(2024)
D = 10_000

# two random vectors agree on about half of their bits
x, a, b = random_hv(rng, D), random_hv(rng, D), random_hv(rng, D)
print("sim(x, a)             ", hamming_similarity(x, a))

# binding is XOR: it hides both inputs and undoes itself
xa = bind(x, a)
print("sim(x*a, a)           ", hamming_similarity(xa, a))
print("x*(x*a) == a          ", bind(x, xa) == a)

# binding preserves distances: a and b stay exactly as far apart after binding with x
print("d(a,b) == d(x*a,x*b)  ", hamming_similarity(a, b) == hamming_similarity(bind(x, a), bind(x, b)))

# a bundle stays close to everything that went into it
s = bundle([x, a, b], rng)
print("sim(bundle, inputs)   ", [round(hamming_similarity(s, v), 3) for v in (x, a, b)])

# rotation gives an unrelated-looking vector that is still exactly invertible
rx = permute(x, 1)
print("sim(x, rot1 x)        ", hamming_similarity(x, rx))
print("rot-1(rot1 x) == x    ", permute(rx, -1) == x)

# a record {name: ada, year: 1815} as a bundle of bound pairs
name, year, ada, y1815 = (random_hv(rng, D) for _ in range(4))
record = bundle([bind(name, ada), bind(year, y1815), random_hv(rng, D)], rng)
query = bind(record, name)
print("record[name] ~ ada    ", round(hamming_similarity(query, ada), 3), "vs noise",
      round(hamming_similarity(query, y1815), 3))

# the similarity distribution of random pairs is very narrow
sims = np.array([hamming_similarity(random_hv(rng, D), random_hv(rng, D)) for _ in range(500)])
print(f"random pairs: mean {sims.mean():.4f}, std {sims.std():.4f} (0.5/sqrt(D) = {0.5 / np.sqrt(D):.4f})")
