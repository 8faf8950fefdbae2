"""
Language identification with trigram profiles
=============================================

Each language gets one 10,000-dimensional profile: the sum of the vectors
of all letter trigrams in its training text. A sentence is assigned to the
language whose profile has the highest cosine with its own profile.
"""

import time

import numpy as np

from hdcompute.langid import (
    alphabet_codebook,
    cluster_profiles,
    evaluate,
    minicorpus_dir,
    read_test_dir,
    read_training_dir,
    similarity_matrix,
    train_profiles,
)

cb = alphabet_codebook(10_000, seed=0)
t0 = time.perf_counter()
profiles = train_profiles(read_training_dir(minicorpus_dir() / "train"), cb)
print(f"trained {len(profiles)} profiles in {time.perf_counter() - t0:.1f}s")

report = evaluate(read_test_dir(minicorpus_dir() / "test"), profiles, cb)
print(f"accuracy {report.accuracy:.3f} on {report.n_test} sentences")
for label, row in report.per_language().items():
    print(f"  {label}  {row['accuracy']:.3f}")
print("most frequent confusions", report.top_confusions(5))

labels, sim = similarity_matrix(profiles)
np.set_printoptions(precision=2, suppress=True)
print("     " + "     ".join(labels))
print(sim)

clusters = cluster_profiles(profiles, k=3)
print("three families:", clusters.clusters())
