"""Randomized property checks over the vector algebra and item memory.

Each suite returns a :class:`CheckResult`; :func:`run_all` bundles them into
a JSON-ready report.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import (
    RandomSource,
    bind,
    hamming_distance,
    hamming_similarity,
    permute,
    random_hv,
)
from .itemmem import Codebook
from .sequence import decode_chunk, encode_chunk


@dataclass
class CheckResult:
    name: str
    cases: int
    failures: int
    detail: dict
    skipped: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        out = {"name": self.name, "cases": self.cases, "failures": self.failures, "passed": self.passed}
        if self.skipped:
            out["skipped"] = self.skipped
        out.update(self.detail)
        return out


def algebra_suite(d: int, cases: int, rng: RandomSource) -> CheckResult:
    """Bind self-inverse, bind distance preservation, rotation group laws,
    and rotation distributing over bind, on ``cases`` random triples."""
    failures = {"bind_inverse": 0, "bind_distance": 0, "permute_laws": 0, "permute_over_bind": 0}
    zero = np.zeros(d, dtype=np.uint8)
    for _ in range(cases):
        x, a, b = random_hv(rng, d), random_hv(rng, d), random_hv(rng, d)
        s, t = (int(v) for v in rng.integers(-2 * d, 2 * d, size=2))
        if np.any(bind(x, x).bits != zero) or bind(x, bind(x, a)) != a:
            failures["bind_inverse"] += 1
        if hamming_distance(bind(x, a), bind(x, b)) != hamming_distance(a, b):
            failures["bind_distance"] += 1
        ok = (
            permute(a, 0) == a
            and permute(permute(a, s), t) == permute(a, s + t)
            and permute(a, s + d) == permute(a, s)
            and hamming_distance(permute(a, s), permute(b, s)) == hamming_distance(a, b)
        )
        if not ok:
            failures["permute_laws"] += 1
        if permute(bind(x, a), s) != bind(permute(x, s), permute(a, s)):
            failures["permute_over_bind"] += 1
    return CheckResult(f"algebra_D{d}", cases, sum(failures.values()), {"by_property": failures})


def orthogonality_suite(d: int, pairs: int, rng: RandomSource) -> CheckResult:
    """Random pairs: mean similarity within 0.5 +- 3 sigma/sqrt(n), every pair within 5 sigma."""
    sims = np.array([hamming_similarity(random_hv(rng, d), random_hv(rng, d)) for _ in range(pairs)])
    sigma = 0.5 / math.sqrt(d)
    mean_tol = 3 * sigma / math.sqrt(pairs)
    bad = int(np.count_nonzero(np.abs(sims - 0.5) > 5 * sigma))
    mean_ok = abs(sims.mean() - 0.5) <= mean_tol
    return CheckResult(
        f"orthogonality_D{d}",
        pairs,
        bad + (0 if mean_ok else 1),
        {"mean": float(sims.mean()), "min": float(sims.min()), "max": float(sims.max()), "sigma": sigma},
    )


def bound_pair_suite(d: int, cases: int, rng: RandomSource) -> CheckResult:
    cb = Codebook(d, rng.seed, [f"s{i}" for i in range(27)])
    fails = 0
    for _ in range(cases):
        i, j = (int(v) for v in rng.integers(0, 27, size=2))
        x, a = cb[f"s{i}"], cb[f"s{j}"]
        sym, sim = cb.cleanup(bind(x, bind(x, a)))
        fails += sym != f"s{j}" or sim != 1.0
    return CheckResult(f"bound_pair_D{d}", cases, fails, {})


def chunk_suite(d: int, max_k: int, trials: int, rng: RandomSource) -> CheckResult:
    """Encode/decode k random items from a 27-entry codebook, for k = 1..max_k."""
    cb = Codebook(d, rng.seed, [f"s{i}" for i in range(27)])
    per_k = {}
    for k in range(1, max_k + 1):
        ok = 0
        for _ in range(trials):
            picks = [f"s{int(i)}" for i in rng.integers(0, 27, size=k)]
            chunk = encode_chunk([cb[p] for p in picks], rng)
            ok += [s for s, _ in decode_chunk(chunk, k, cb)] == picks
        per_k[str(k)] = ok
    fails = sum(trials - v for v in per_k.values())
    return CheckResult(f"chunk_roundtrip_D{d}", max_k * trials, fails, {"successes_by_k": per_k, "trials": trials})


def run_all(d: int = 10_000, seed: int = 0, cases: int = 1000) -> dict:
    t0 = time.perf_counter()
    root = RandomSource(seed)
    results = [algebra_suite(d, cases, root.derive(1))]
    if d >= 64:
        results.append(orthogonality_suite(d, max(cases, 1000), root.derive(2)))
        results.append(bound_pair_suite(d, min(cases, 200), root.derive(3)))
    else:
        skip = f"D={d} is too small for concentration and cleanup checks"
        results += [
            CheckResult(f"orthogonality_D{d}", 0, 0, {}, skipped=skip),
            CheckResult(f"bound_pair_D{d}", 0, 0, {}, skipped=skip),
        ]
    if d >= 1000:
        results.append(chunk_suite(d, 7, 20, root.derive(4)))
    else:
        results.append(CheckResult(f"chunk_roundtrip_D{d}", 0, 0, {}, skipped=f"D={d} is below chunk capacity range"))
    return {
        "config": {"dim": d, "seed": seed, "cases": cases},
        "checks": [r.as_dict() for r in results],
        "passed": sum(r.passed and not r.skipped for r in results),
        "failed": sum(not r.passed for r in results),
        "skipped": sum(bool(r.skipped) for r in results),
        "ok": all(r.passed for r in results),
        "elapsed_seconds": time.perf_counter() - t0,
    }
