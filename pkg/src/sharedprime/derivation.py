"""The complement map q = f(p, k) = 1 + floor(2^(2k) / p) and its variants.

For odd p the quotient 2^(2k)/p is never an integer, so f(p, k) is also
ceil(2^(2k)/p). Over the domain 2^k + 1 < p < 2^(k+1) the image lands in
(2^(k-1), 2^k), which keeps every q below every p.

The auditors enumerate the whole domain at small k. The range bounds hold
without exception. Injectivity does not: f(29, 4) = f(31, 4) = 9, and in
general two primes above sqrt(2)*2^k that differ by 2 can share an image.
Restricting p to at most isqrt(2^(2k+1)) (``strict_upper``) restores it.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .errors import AuditCapError, DomainError
from .ntheory import DEFAULT_CONFIG, PrimalityConfig, next_prime_search, sieve
from .randomness import RandomSource

AUDIT_MAX_K = 20


@dataclass(frozen=True)
class DerivationParams:
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise DomainError("k must be >= 2")

    @property
    def p_lo(self) -> int:
        """Exclusive lower bound on p."""
        return (1 << self.k) + 1

    @property
    def p_hi(self) -> int:
        """Exclusive upper bound on p."""
        return 1 << (self.k + 1)

    def contains(self, p: int) -> bool:
        return self.p_lo < p < self.p_hi


def domain_bounds(k: int) -> tuple[int, int]:
    """Inclusive ``(lo, hi)`` for p: 2^k + 2 .. 2^(k+1) - 1."""
    return (1 << k) + 2, (1 << (k + 1)) - 1


def strict_upper(k: int) -> int:
    """Largest p allowed in strict mode: floor(sqrt(2) * 2^k)."""
    return math.isqrt(1 << (2 * k + 1))


def _check_domain(p: int, k: int) -> None:
    if k < 2:
        raise DomainError(f"k={k} is too small (need k >= 2)")
    if not DerivationParams(k).contains(p):
        raise DomainError(
            f"p={p} outside the open interval (2^{k}+1, 2^{k + 1}) = "
            f"({(1 << k) + 1}, {1 << (k + 1)})"
        )
    if p % 2 == 0:
        raise DomainError(f"p={p} is even")


def complement(p: int, k: int) -> int:
    _check_domain(p, k)
    return 1 + (1 << (2 * k)) // p


def complement_divfree(p: int, k: int) -> int:
    """Same value as ``complement`` from one reduction and one exact division.

    The numerator is 2^(2k) + p - (2^(2k) mod p). Using ``+ 1`` in place of
    ``+ p`` leaves a numerator congruent to 1 mod p, which is not divisible.
    """
    _check_domain(p, k)
    top = 1 << (2 * k)
    num = top + p - top % p
    q, rem = divmod(num, p)
    assert rem == 0
    return q


def literal_plus_one_numerator(p: int, k: int) -> tuple[int, int]:
    """``(numerator, numerator mod p)`` for the 2^(2k) + 1 - (2^(2k) mod p) form."""
    top = 1 << (2 * k)
    num = top + 1 - top % p
    return num, num % p


def complement_lenstra98(p: int, k: int) -> int:
    """ceil(2^(2k-1) / p), the half-size variant. Comparison only."""
    _check_domain(p, k)
    top = 1 << (2 * k - 1)
    return (top + p - top % p) // p


def complement_offset(p: int, k: int, offset: int) -> int:
    """offset + floor(2^(2k)/p); offset 1 gives ``complement``."""
    if offset < 1:
        raise DomainError("offset must be >= 1")
    _check_domain(p, k)
    return offset + (1 << (2 * k)) // p


def complement_forward_search(
    p: int,
    k: int,
    cfg: PrimalityConfig = DEFAULT_CONFIG,
    src: RandomSource | None = None,
) -> int:
    """First prime at or after f(p, k), stepping over odd numbers.

    An even f(p, k) starts the walk at f(p, k) + 1. Many p share one result,
    see ``forward_search_collisions``.
    """
    f = complement(p, k)
    return next_prime_search(f | 1, cfg, src)


# Exhaustive auditors


def _require_cap(k: int, max_k: int) -> None:
    if k < 2:
        raise DomainError("k must be >= 2")
    if k > max_k:
        raise AuditCapError(f"k={k} exceeds the exhaustive-enumeration cap {max_k}")


def domain_primes(k: int, max_k: int = AUDIT_MAX_K, strict: bool = False) -> list[int]:
    """Every prime p with 2^k + 1 < p < 2^(k+1), by sieve.

    ``strict`` additionally caps p at ``strict_upper(k)``.
    """
    _require_cap(k, max_k)
    lo, hi = domain_bounds(k)
    if strict:
        hi = strict_upper(k)
    flags = sieve(hi + 1)
    return [p for p in range(lo | 1, hi + 1, 2) if flags[p]]


@dataclass
class BoundsReport:
    k: int
    checked: int
    violations: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_bounds(
    k: int, max_k: int = AUDIT_MAX_K, strict: bool = False
) -> BoundsReport:
    """Check 2^(k-1) < f(p,k) < 2^k for every domain prime."""
    primes = domain_primes(k, max_k, strict)
    lo, hi = 1 << (k - 1), 1 << k
    bad = []
    for p in primes:
        q = complement(p, k)
        if not lo < q < hi:
            bad.append((p, q))
    return BoundsReport(k, len(primes), bad)


@dataclass(frozen=True)
class CollisionRecord:
    p1: int
    p2: int
    image: int
    image_is_prime: bool


def _collisions(images: dict[int, list[int]], prime_flags) -> list[CollisionRecord]:
    out = []
    for image, ps in images.items():
        if len(ps) < 2:
            continue
        for a, b in combinations(sorted(ps), 2):
            out.append(CollisionRecord(a, b, image, bool(prime_flags[image])))
    out.sort(key=lambda c: (c.p1, c.p2))
    return out


def audit_injectivity(
    k: int, max_k: int = AUDIT_MAX_K, strict: bool = False
) -> list[CollisionRecord]:
    """All pairs of distinct domain primes with the same image."""
    primes = domain_primes(k, max_k, strict)
    images: dict[int, list[int]] = defaultdict(list)
    for p in primes:
        images[complement(p, k)].append(p)
    return _collisions(images, sieve(1 << k))


def forward_search_collisions(
    k: int, max_k: int = AUDIT_MAX_K, strict: bool = False
) -> list[CollisionRecord]:
    """Collisions of the next-prime-after-f map; every record has a prime image."""
    primes = domain_primes(k, max_k, strict)
    flags = sieve(1 << (k + 1))
    images: dict[int, list[int]] = defaultdict(list)
    for p in primes:
        c = complement(p, k) | 1
        while not flags[c]:
            c += 2
        images[c].append(p)
    return _collisions(images, flags)


@dataclass
class PairwiseReport:
    k: int
    valid_pairs: list[tuple[int, int, int]]
    unsafe_pairs: list[tuple[tuple[int, int, int], tuple[int, int, int], int]]

    @property
    def ok(self) -> bool:
        return not self.unsafe_pairs


def audit_pairwise_safety(
    k: int, max_k: int = AUDIT_MAX_K, strict: bool = False
) -> PairwiseReport:
    """Every fixed-policy modulus at k, and every distinct pair sharing a factor.

    An unsafe pair is ``((p, q, n), (p', q', n'), gcd)``.
    """
    primes = domain_primes(k, max_k, strict)
    flags = sieve(1 << k)
    valid = []
    for p in primes:
        q = complement(p, k)
        if flags[q]:
            valid.append((p, q, p * q))
    unsafe = []
    for a, b in combinations(valid, 2):
        if a[2] == b[2]:
            continue
        g = math.gcd(a[2], b[2])
        if g != 1:
            unsafe.append((a, b, g))
    return PairwiseReport(k, valid, unsafe)


def separation_gap(
    k: int, max_k: int = AUDIT_MAX_K, strict: bool = False
) -> tuple[int, int]:
    """``(max image, min domain prime)``; the first must be smaller."""
    primes = domain_primes(k, max_k, strict)
    return max(complement(p, k) for p in primes), min(primes)
