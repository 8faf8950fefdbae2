"""
Item memory and cleanup
=======================

A codebook maps symbols to random vectors and finds the nearest stored
symbol for a noisy query.
"""

from hdcompute import Codebook, Hypervector, RandomSource, bind, bundle
from hdcompute.sequence import decode_chunk, encode_chunk

cb = Codebook(10_000, seed=7, symbols="abcdefghijklmnopqrstuvwxyz ")
rng = RandomSource(1)

# flip 30% of the bits of "q" and it still cleans up to "q"
noisy = cb["q"].bits.copy()
idx = rng.generator.choice(cb.dim, 3000, replace=False)
noisy[idx] ^= 1
print("cleanup(30% noisy q)  ", cb.cleanup(Hypervector(noisy)))

# unbinding a key from a pair gives back the exact partner
print("cleanup(x*(x*a))      ", cb.cleanup(bind(cb["x"], bind(cb["x"], cb["a"]))))

# top-k lists the members of a bundle
s = bundle([cb["c"], cb["a"], cb["t"]], rng)
print("top 5 of bundle(c,a,t)", [(sym, round(sim, 3)) for sym, sim in cb.top_k(s, 5)])

# a chunk keeps order by rotating each item according to its position
word = "chunked"
chunk = encode_chunk([cb[ch] for ch in word], rng)
print("decode chunk          ", "".join(sym for sym, _ in decode_chunk(chunk, len(word), cb)))
