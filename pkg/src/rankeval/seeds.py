"""Deterministic random streams derived from a single integer seed.

Every source of randomness in the package (log generation, half-sample
slicing, oracle-ranker noise, interleave tie coins) draws from a stream
keyed by the global seed plus context tokens. Two runs with the same seed
are therefore bit-identical, regardless of processing order or platform.
"""

from __future__ import annotations

import hashlib
import math
import random

DEFAULT_SEED = 42

_SEP = b"\x1f"


def _digest(seed: int, tokens: tuple[object, ...], size: int) -> bytes:
    key = _SEP.join(str(t).encode("utf-8") for t in (seed, *tokens))
    return hashlib.blake2b(key, digest_size=size).digest()


def substream(seed: int, *tokens: object) -> random.Random:
    """A fresh RNG whose state is a pure function of (seed, *tokens)."""
    return random.Random(int.from_bytes(_digest(seed, tokens, 8), "big"))


def unit_normal(seed: int, *tokens: object) -> float:
    """One standard normal draw that is a pure function of (seed, *tokens)."""
    raw = _digest(seed, tokens, 16)
    # Box-Muller on two uniforms carved out of the digest; u1 kept off 0.
    u1 = (int.from_bytes(raw[:8], "big") + 1) / (2**64 + 1)
    u2 = int.from_bytes(raw[8:], "big") / 2**64
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
