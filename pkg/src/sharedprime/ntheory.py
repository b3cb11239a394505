"""gcd, modular arithmetic, primality, and the two prime-search strategies.

``random_prime_in`` is the fresh-retry search (draw, test, discard on
failure); ``next_prime_search`` is the incremental one (p, p+2, p+4, ...),
which favours primes that follow long composite runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, ExhaustionError, NotInvertibleError
from .randomness import RandomSource, uniform_int


@dataclass(frozen=True)
class PrimalityConfig:
    trial_division_bound: int = 1000
    mr_rounds: int = 40

    def __post_init__(self):
        if self.trial_division_bound < 2:
            raise ValueError("trial_division_bound must be >= 2")
        if self.mr_rounds < 1:
            raise ValueError("mr_rounds must be >= 1")


DEFAULT_CONFIG = PrimalityConfig()


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def mod_pow(base: int, exp: int, m: int) -> int:
    if m < 1:
        raise DomainError("modulus must be >= 1")
    return pow(base, exp, m)


def mod_inverse(a: int, m: int) -> int:
    """x in [1, m) with a*x = 1 (mod m), by the extended Euclidean algorithm."""
    if m < 2:
        raise DomainError("modulus must be >= 2")
    old_r, r = a % m, m
    old_s, s = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
    if old_r != 1:
        raise NotInvertibleError(a, m, old_r)
    return old_s % m


def sieve(limit: int) -> bytearray:
    """``flags[i] == 1`` iff i is prime, for 0 <= i < limit."""
    if limit < 2:
        return bytearray(max(limit, 0))
    flags = bytearray([1]) * limit
    flags[0] = flags[1] = 0
    for i in range(2, math.isqrt(limit - 1) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit, i)))
    return flags


def primes_below(limit: int) -> list[int]:
    return [i for i, f in enumerate(sieve(limit)) if f]


@lru_cache(maxsize=8)
def _small_primes(bound: int) -> tuple[frozenset[int], int]:
    odd = [p for p in primes_below(bound) if p != 2]
    return frozenset(odd), math.prod(odd)


def _miller_rabin_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(
    n: int, cfg: PrimalityConfig = DEFAULT_CONFIG, src: RandomSource | None = None
) -> bool:
    """Trial division by odd primes below the bound, then Miller-Rabin.

    Bases are drawn uniformly from [2, n-2] via ``src``. When n is below the
    square of the trial-division bound, surviving trial division already
    proves primality and no random bases are consumed.
    """
    if n < 2:
        return False
    if n == 2:
        return True
    if n % 2 == 0:
        return False
    if n <= 4:
        return True
    small, product = _small_primes(cfg.trial_division_bound)
    if n in small:
        return True
    if math.gcd(n, product) != 1:
        return False
    if n < cfg.trial_division_bound**2:
        return True
    if src is None:
        raise ValueError("a random source is required above the trial-division range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(cfg.mr_rounds):
        a = uniform_int(src, 2, n - 2)
        if not _miller_rabin_round(n, d, s, a):
            return False
    return True


def _odd_candidate(src: RandomSource, lo: int, hi: int) -> int:
    while True:
        c = uniform_int(src, lo, hi) | 1
        if c <= hi:
            return c


def draw_prime(
    lo: int,
    hi: int,
    cfg: PrimalityConfig,
    src: RandomSource,
    max_attempts: int = 10_000,
) -> tuple[int, int]:
    """Fresh-retry prime search. Returns ``(prime, attempts)``.

    Each attempt is one odd candidate in [lo, hi]; composites are discarded,
    never incremented.
    """
    if lo > hi:
        raise DomainError(f"empty interval [{lo}, {hi}]")
    if lo == hi and lo % 2 == 0:
        raise DomainError(f"interval [{lo}, {hi}] contains no odd number")
    for attempt in range(1, max_attempts + 1):
        c = _odd_candidate(src, lo, hi)
        if is_probable_prime(c, cfg, src):
            return c, attempt
    raise ExhaustionError(f"no prime found in [{lo}, {hi}]", max_attempts)


def random_prime_in(
    lo: int,
    hi: int,
    cfg: PrimalityConfig = DEFAULT_CONFIG,
    src: RandomSource | None = None,
    max_attempts: int = 10_000,
) -> int:
    if src is None:
        raise ValueError("random_prime_in needs a random source")
    return draw_prime(lo, hi, cfg, src, max_attempts)[0]


def next_prime_search(
    start: int, cfg: PrimalityConfig = DEFAULT_CONFIG, src: RandomSource | None = None
) -> int:
    """Smallest probable prime >= start, stepping by 2 from an odd start."""
    if start < 3 or start % 2 == 0:
        raise DomainError("start must be odd and >= 3")
    c = start
    while not is_probable_prime(c, cfg, src):
        c += 2
    return c
