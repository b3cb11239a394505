"""Key generation policies.

``fixed``        draw a prime p in (2^k+1, 2^(k+1)), set q = f(p, k), retry
                 with a fresh p until q is prime.
``fixed_strict`` as ``fixed`` with p <= isqrt(2^(2k+1)), so f is injective.
``offset:B``     as ``fixed`` with q = B + floor(2^(2k)/p).
``independent``  p and q drawn independently, p in (2^k, 2^(k+1)) and
                 q in (2^(k-1), 2^k); the baseline most deployed RSA uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .derivation import complement, complement_offset, domain_bounds, strict_upper
from .errors import DomainError, ExhaustionError, NotInvertibleError
from .ntheory import DEFAULT_CONFIG, PrimalityConfig, draw_prime, is_probable_prime, mod_inverse
from .randomness import RandomSource

DEFAULT_E = 65537


def default_max_outer(k: int) -> int:
    return 64 * k


@dataclass(frozen=True)
class Policy:
    name: str
    offset: int = 1

    def __post_init__(self):
        if self.name not in ("fixed", "fixed_strict", "independent", "offset"):
            raise DomainError(f"unknown policy {self.name!r}")
        if self.offset < 1:
            raise DomainError("offset must be >= 1")

    @classmethod
    def parse(cls, text: str) -> Policy:
        if text.startswith("offset:"):
            try:
                return cls("offset", int(text.split(":", 1)[1], 0))
            except ValueError:
                raise DomainError(f"bad offset in policy {text!r}") from None
        return cls(text)

    def __str__(self) -> str:
        return f"offset:{self.offset}" if self.name == "offset" else self.name


FIXED = Policy("fixed")
FIXED_STRICT = Policy("fixed_strict")
INDEPENDENT = Policy("independent")


@dataclass(frozen=True)
class KeyPair:
    k: int
    p: int
    q: int
    n: int
    policy: Policy
    outer_attempts: int
    candidate_tests: int


@dataclass(frozen=True)
class PrivateKey:
    key: KeyPair
    e: int
    d: int
    carmichael_lambda: int


def _check_k(k: int) -> None:
    # k = 4 is accepted so the empty search surfaces as exhaustion
    if k < 2:
        raise DomainError(f"k={k} is too small")


def _keygen_derived(
    k: int,
    derive,
    policy: Policy,
    cfg: PrimalityConfig,
    src: RandomSource,
    max_outer: int | None,
    strict: bool,
) -> KeyPair:
    _check_k(k)
    if max_outer is None:
        max_outer = default_max_outer(k)
    lo, hi = domain_bounds(k)
    if strict:
        hi = strict_upper(k)
    tests = 0
    for outer in range(1, max_outer + 1):
        p, attempts = draw_prime(lo, hi, cfg, src)
        tests += attempts
        q = derive(p)
        tests += 1
        if is_probable_prime(q, cfg, src):
            return KeyPair(k, p, q, p * q, policy, outer, tests)
    raise ExhaustionError(
        f"no prime image found at k={k}", max_outer, outer_attempts=max_outer, candidate_tests=tests
    )


def keygen_fixed(
    k: int,
    cfg: PrimalityConfig = DEFAULT_CONFIG,
    src: RandomSource | None = None,
    max_outer: int | None = None,
    strict: bool = False,
) -> KeyPair:
    """Draw p, derive q = f(p, k), repeat until q is prime.

    ``outer_attempts`` is the number of p values tried (one q test each);
    ``candidate_tests`` also counts every composite p candidate.
    """
    policy = FIXED_STRICT if strict else FIXED
    return _keygen_derived(k, lambda p: complement(p, k), policy, cfg, src, max_outer, strict)


def keygen_offset(
    k: int,
    offset: int,
    cfg: PrimalityConfig = DEFAULT_CONFIG,
    src: RandomSource | None = None,
    max_outer: int | None = None,
) -> KeyPair:
    policy = Policy("offset", offset)
    return _keygen_derived(
        k, lambda p: complement_offset(p, k, offset), policy, cfg, src, max_outer, False
    )


def keygen_independent(
    k: int, cfg: PrimalityConfig = DEFAULT_CONFIG, src: RandomSource | None = None
) -> KeyPair:
    _check_k(k)
    p, a1 = draw_prime((1 << k) + 1, (1 << (k + 1)) - 1, cfg, src)
    q, a2 = draw_prime((1 << (k - 1)) + 1, (1 << k) - 1, cfg, src)
    return KeyPair(k, p, q, p * q, INDEPENDENT, 1, a1 + a2)


def keygen(
    k: int,
    policy: Policy | str,
    cfg: PrimalityConfig = DEFAULT_CONFIG,
    src: RandomSource | None = None,
    max_outer: int | None = None,
) -> KeyPair:
    if isinstance(policy, str):
        policy = Policy.parse(policy)
    if policy.name == "independent":
        return keygen_independent(k, cfg, src)
    if policy.name == "offset":
        return keygen_offset(k, policy.offset, cfg, src, max_outer)
    return keygen_fixed(k, cfg, src, max_outer, strict=policy.name == "fixed_strict")


def extend_to_private_key(kp: KeyPair, e: int = DEFAULT_E) -> PrivateKey:
    if e < 3 or e % 2 == 0:
        raise DomainError("e must be odd and >= 3")
    lam = math.lcm(kp.p - 1, kp.q - 1)
    d = mod_inverse(e % lam, lam)
    return PrivateKey(kp, e, d, lam)


def generate_private_key(
    k: int,
    policy: Policy | str,
    cfg: PrimalityConfig = DEFAULT_CONFIG,
    src: RandomSource | None = None,
    e: int = DEFAULT_E,
    max_keys: int = 100,
) -> PrivateKey:
    """Generate keys until e is invertible mod lambda.

    q is a function of p under the derived policies, so a bad key is thrown
    away whole.
    """
    for _ in range(max_keys):
        kp = keygen(k, policy, cfg, src)
        try:
            return extend_to_private_key(kp, e)
        except NotInvertibleError:
            continue
    raise ExhaustionError(f"e={e} not invertible for any generated key", max_keys)
