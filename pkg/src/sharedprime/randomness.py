"""Random sources: a bit-exact SplitMix64 generator and a low-entropy pool.

Every consumer in the package takes a ``RandomSource``, i.e. any object with
a ``next_bits(b)`` method returning a uniform integer in ``[0, 2**b)``.
Poor randomness is modelled by ``PoolSource``, which can only ever emit one
of ``S`` fixed values, so two independent draws collide with probability 1/S.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass
from typing import Protocol, Sequence

from .errors import ConfigError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class RandomSource(Protocol):
    def next_bits(self, b: int) -> int: ...


def splitmix_next(state: int) -> tuple[int, int]:
    """One SplitMix64 step. Returns ``(new_state, output)``."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


class SplitMix64:
    """Deterministic 64-bit generator. Not for real keys."""

    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state, out = splitmix_next(self.state)
        return out

    def next_bits(self, b: int) -> int:
        if b < 0:
            raise ValueError("bit count must be non-negative")
        if b == 0:
            return 0
        words = -(-b // 64)
        acc = 0
        for _ in range(words):
            acc = (acc << 64) | self.next_u64()
        return acc & ((1 << b) - 1)

    def __repr__(self) -> str:
        return f"SplitMix64(state={self.state:#018x})"


class OsSource:
    """Operating-system entropy. Quality is the OS's business, not ours."""

    def next_bits(self, b: int) -> int:
        if b < 0:
            raise ValueError("bit count must be non-negative")
        return secrets.randbits(b) if b else 0


@dataclass(frozen=True)
class SplitSeed:
    master_seed: int
    stream_index: int = 0


def split(seed: SplitSeed | int, stream_index: int | None = None) -> SplitMix64:
    """Deterministic substream for one logical device or trial.

    The initial state is the SplitMix64 *output* for the input
    ``master_seed XOR stream_index``. Accepts either a ``SplitSeed`` or a
    bare ``(master, index)`` pair.
    """
    if not isinstance(seed, SplitSeed):
        seed = SplitSeed(seed, stream_index or 0)
    _, init = splitmix_next((seed.master_seed ^ seed.stream_index) & MASK64)
    return SplitMix64(init)


def uniform_int(src: RandomSource, lo: int, hi: int) -> int:
    """Uniform integer in ``[lo, hi]`` by rejection on ``bitlen(hi - lo)`` bits."""
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    span = hi - lo
    bits = span.bit_length()
    while True:
        r = src.next_bits(bits)
        if r <= span:
            return lo + r


class PoolSource:
    """Low-entropy source: every draw is one of ``len(pool)`` fixed values."""

    def __init__(self, pool: Sequence[int], selector: RandomSource):
        if not pool:
            raise ConfigError("entropy pool is empty")
        self.pool = list(pool)
        self.selector = selector

    def __len__(self) -> int:
        return len(self.pool)

    def draw(self) -> int:
        return self.pool[uniform_int(self.selector, 0, len(self.pool) - 1)]


def pool_draw(ps: PoolSource) -> int:
    return ps.draw()


def parse_seed(text: str) -> int:
    """Parse a decimal or ``0x``-prefixed hex 64-bit seed."""
    text = text.strip()
    try:
        value = int(text, 16) if text.lower().startswith("0x") else int(text, 10)
    except ValueError:
        raise ValueError(f"invalid seed {text!r}") from None
    if not 0 <= value <= MASK64:
        raise ValueError(f"seed {text!r} does not fit in 64 bits")
    return value
