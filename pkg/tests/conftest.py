import numpy as np
import pytest

from hdcompute.core import Hypervector, RandomSource


def flip(v: Hypervector, frac: float, rng: RandomSource) -> Hypervector:
    """Copy of ``v`` with exactly round(frac * D) distinct bits inverted."""
    bits = v.bits.copy()
    idx = rng.generator.choice(v.dim, int(round(frac * v.dim)), replace=False)
    bits[idx] ^= 1
    return Hypervector(bits)


def rotate_right(bits: list[int], k: int) -> list[int]:
    """Plain-list rotation used as an independent oracle: bit i goes to (i + k) % D."""
    d = len(bits)
    out = [0] * d
    for i, b in enumerate(bits):
        out[(i + k) % d] = b
    return out


def xor_lists(*rows: list[int]) -> list[int]:
    out = [0] * len(rows[0])
    for row in rows:
        out = [x ^ y for x, y in zip(out, row)]
    return out


@pytest.fixture
def rng():
    return RandomSource(12345)


# acceptance verdicts, filled in by test_acceptance.py and echoed after the run
ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        status, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{status} criterion {key}: {detail}")
