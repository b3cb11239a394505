"""Monte-Carlo experiments on low-entropy key fleets and prime searches.

Poor randomness is a pool of S equally likely primes; two devices pick the
same prime with probability P = 1/S. A fleet mixes ``fixed`` devices
(q = f(p, k)) and ``independent`` devices (p and q from separate pools).
The only ways two moduli can share a factor are p = p' or q = q', because
every p exceeds 2^k and every q is below it. The analytic model per policy
pair is computed exactly from the pools in use:

    identical = Pr[p = p' and q = q']
    factored  = Pr[p = p'] + Pr[q = q'] - 2 * identical

For two independent devices with S_p = S_q this is P^2 and 2P(1 - P). For
two fixed devices it is P and 0, unless the pool holds two primes with the
same prime image.
"""

from __future__ import annotations

import math
import time
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations

from .attack import ModulusRecord, batch_gcd
from .derivation import complement, domain_bounds
from .errors import ConfigError, DomainError
from .keygen import keygen_fixed
from .ntheory import (
    DEFAULT_CONFIG,
    PrimalityConfig,
    is_probable_prime,
    next_prime_search,
    random_prime_in,
    sieve,
)
from .randomness import PoolSource, RandomSource, parse_seed, split, uniform_int

FLEET_POLICIES = ("fixed", "independent")
POOL_P_STREAM = 0xFFFF_FFFF_0000_0001
POOL_Q_STREAM = 0xFFFF_FFFF_0000_0002
ENUMERATE_MAX_K = 20


@dataclass(frozen=True)
class FleetConfig:
    k: int
    devices: int
    pool_size_p: int
    pool_size_q: int
    policy_mix: tuple[tuple[str, int], ...]
    master_seed: int = 0
    trials: int = 1

    def __post_init__(self):
        object.__setattr__(
            self, "policy_mix", tuple((str(p), int(c)) for p, c in self.policy_mix)
        )
        if self.k < 5:
            raise ConfigError("k must be >= 5")
        if self.pool_size_p < 1 or self.pool_size_q < 1:
            raise ConfigError("pool sizes must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        for policy, count in self.policy_mix:
            if policy not in FLEET_POLICIES:
                raise ConfigError(f"unsupported fleet policy {policy!r}")
            if count < 0:
                raise ConfigError("policy counts must be non-negative")
        if sum(c for _, c in self.policy_mix) != self.devices:
            raise ConfigError("policy_mix counts must add up to devices")

    def device_policies(self) -> list[str]:
        return [p for p, c in self.policy_mix for _ in range(c)]

    @classmethod
    def from_json(cls, obj: dict) -> FleetConfig:
        try:
            mix = obj["policy_mix"]
            if isinstance(mix, dict):
                mix = list(mix.items())
            seed = obj.get("master_seed", 0)
            if isinstance(seed, str):
                seed = parse_seed(seed)
            return cls(
                k=int(obj["k"]),
                devices=int(obj["devices"]),
                pool_size_p=int(obj["pool_size_p"]),
                pool_size_q=int(obj.get("pool_size_q", obj["pool_size_p"])),
                policy_mix=tuple(tuple(x) for x in mix),
                master_seed=seed,
                trials=int(obj.get("trials", 1)),
            )
        except KeyError as exc:
            raise ConfigError(f"missing config field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    def to_json(self) -> dict:
        d = asdict(self)
        d["policy_mix"] = [list(x) for x in self.policy_mix]
        d["master_seed"] = f"{self.master_seed:#x}"
        return d


# Pools


def _sample_distinct(
    candidates: list[int] | None,
    draw,
    size: int,
    src: RandomSource,
    what: str,
) -> list[int]:
    if candidates is not None:
        if len(candidates) < size:
            raise ConfigError(f"{what}: only {len(candidates)} candidates for a pool of {size}")
        pool = list(candidates)
        for i in range(size):
            j = uniform_int(src, i, len(pool) - 1)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:size]
    chosen: dict[int, None] = {}
    misses = 0
    while len(chosen) < size:
        x = draw()
        if x in chosen:
            misses += 1
            if misses > 1000 + 10 * size:
                raise ConfigError(f"{what}: range too small for {size} distinct primes")
            continue
        chosen[x] = None
    return list(chosen)


def build_pools(
    cfg: FleetConfig, pcfg: PrimalityConfig = DEFAULT_CONFIG
) -> tuple[list[int], list[int]]:
    """``(p_pool, q_pool)``: distinct primes, drawn from dedicated streams.

    Every p in the pool has a prime image, so fixed devices never retry and
    each pool member is equally likely.
    """
    k = cfg.k
    p_lo, p_hi = domain_bounds(k)
    q_lo, q_hi = (1 << (k - 1)) + 1, (1 << k) - 1
    psrc = split(cfg.master_seed, POOL_P_STREAM)
    qsrc = split(cfg.master_seed, POOL_Q_STREAM)

    if k <= ENUMERATE_MAX_K:
        flags = sieve(p_hi + 1)
        p_cands = [p for p in range(p_lo | 1, p_hi + 1, 2) if flags[p] and flags[complement(p, k)]]
        q_cands = [q for q in range(q_lo | 1, q_hi + 1, 2) if flags[q]]
    else:
        p_cands = q_cands = None

    def draw_p():
        while True:
            p = random_prime_in(p_lo, p_hi, pcfg, psrc)
            if is_probable_prime(complement(p, k), pcfg, psrc):
                return p

    def draw_q():
        return random_prime_in(q_lo, q_hi, pcfg, qsrc)

    p_pool = _sample_distinct(p_cands, draw_p, cfg.pool_size_p, psrc, "p pool")
    q_pool = _sample_distinct(q_cands, draw_q, cfg.pool_size_q, qsrc, "q pool")
    return p_pool, q_pool


def pool_image_collisions(p_pool: list[int], k: int) -> list[tuple[int, int, int]]:
    """Pool members sharing an image (the image is prime by construction)."""
    by_image = defaultdict(list)
    for p in p_pool:
        by_image[complement(p, k)].append(p)
    return [
        (a, b, img)
        for img, ps in sorted(by_image.items())
        for a, b in combinations(sorted(ps), 2)
    ]


# Analytic model


@dataclass(frozen=True)
class ChannelModel:
    p_equal: float
    q_equal: float
    identical: float

    @property
    def factored(self) -> float:
        return self.p_equal + self.q_equal - 2 * self.identical


def pair_model(a: str, b: str, p_pool: list[int], q_pool: list[int], k: int) -> ChannelModel:
    sp, sq = len(p_pool), len(q_pool)
    qset = set(q_pool)
    images = Counter(complement(p, k) for p in p_pool)
    p_eq = Fraction(1, sp)
    kind = tuple(sorted((a, b)))
    if kind == ("independent", "independent"):
        q_eq = Fraction(1, sq)
        both = Fraction(1, sp * sq)
    elif kind == ("fixed", "fixed"):
        q_eq = sum(Fraction(c, sp) ** 2 for c in images.values())
        both = Fraction(1, sp)
    else:
        hits = sum(c for img, c in images.items() if img in qset)
        q_eq = Fraction(hits, sp * sq)
        both = Fraction(hits, sp * sp * sq)
    return ChannelModel(float(p_eq), float(q_eq), float(both))


# Fleet runs


@dataclass
class PairStats:
    pairs: int = 0
    identical: int = 0
    factored: int = 0
    expected_identical: float = 0.0
    expected_factored: float = 0.0
    sigma_identical: float = 0.0
    sigma_factored: float = 0.0
    p_channel: float = 0.0
    q_channel: float = 0.0


@dataclass
class FleetReport:
    config: dict
    pairs_total: int
    pairs_identical: int
    pairs_factored: int
    expected_identical: float
    expected_factored: float
    sigma_identical: float
    sigma_factored: float
    ground_truth_factored: int
    breakdown: dict[str, PairStats]
    pool_image_collisions: list[tuple[int, int, int]]
    attack_seconds: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        """Serializable form; wall-clock is left out so reruns are byte-identical."""
        d = asdict(self)
        d.pop("attack_seconds")
        d["pool_image_collisions"] = [list(x) for x in self.pool_image_collisions]
        return d


def _pair_class(a: str, b: str) -> str:
    x, y = sorted((a, b))
    return f"{x}-{y}"


def _binom_sigma(n: int, prob: float) -> float:
    return math.sqrt(n * prob * (1 - prob))


def generate_fleet(
    cfg: FleetConfig, trial: int, p_pool: list[int], q_pool: list[int]
) -> tuple[list[ModulusRecord], list[tuple[int, int]]]:
    """One trial's corpus and the secret ``(p, q)`` behind each modulus."""
    records, secrets = [], []
    for i, policy in enumerate(cfg.device_policies()):
        stream = 1 + trial * cfg.devices + i
        src = split(cfg.master_seed, stream)
        p = PoolSource(p_pool, src).draw()
        if policy == "fixed":
            q = complement(p, cfg.k)
        else:
            q = PoolSource(q_pool, src).draw()
        prov = {"policy": policy, "device": i, "trial": trial, "stream": stream}
        records.append(ModulusRecord(f"t{trial:04d}-dev-{i:05d}", p * q, prov))
        secrets.append((p, q))
    return records, secrets


def _count_from_attack(report, policies: list[str], stats: dict[str, PairStats]) -> None:
    groups = defaultdict(list)
    for i, e in enumerate(report.entries):
        groups[e.n].append(i)
    for idx in groups.values():
        for a, b in combinations(idx, 2):
            stats[_pair_class(policies[a], policies[b])].identical += 1
    by_prime = defaultdict(list)
    for i, e in enumerate(report.entries):
        if e.factors is not None:
            for r in e.factors:
                by_prime[r].append(i)
    for idx in by_prime.values():
        for a, b in combinations(idx, 2):
            if report.entries[a].n != report.entries[b].n:
                stats[_pair_class(policies[a], policies[b])].factored += 1


def _truth_factored(secrets: list[tuple[int, int]]) -> int:
    count = 0
    for (p1, q1), (p2, q2) in combinations(secrets, 2):
        if (p1 == p2) != (q1 == q2):
            count += 1
    return count


def run_fleet(
    cfg: FleetConfig, pcfg: PrimalityConfig = DEFAULT_CONFIG, keep_corpora: bool = False
):
    """Generate, attack, and tally ``cfg.trials`` fleets.

    Returns the report, plus the per-trial corpora when ``keep_corpora``.
    """
    p_pool, q_pool = build_pools(cfg, pcfg)
    policies = cfg.device_policies()
    counts = Counter(policies)
    stats: dict[str, PairStats] = {}
    for a, b in combinations(sorted(counts), 2):
        stats[_pair_class(a, b)] = PairStats(pairs=counts[a] * counts[b])
    for a in counts:
        stats[_pair_class(a, a)] = PairStats(pairs=math.comb(counts[a], 2))
    for cls, s in stats.items():
        a, b = cls.split("-")
        m = pair_model(a, b, p_pool, q_pool, cfg.k)
        s.pairs *= cfg.trials
        s.p_channel, s.q_channel = m.p_equal, m.q_equal
        s.expected_identical = s.pairs * m.identical
        s.expected_factored = s.pairs * m.factored
        s.sigma_identical = _binom_sigma(s.pairs, m.identical)
        s.sigma_factored = _binom_sigma(s.pairs, m.factored)
    stats = {c: stats[c] for c in sorted(stats)}

    corpora = []
    truth = 0
    elapsed = 0.0
    for t in range(cfg.trials):
        records, secrets = generate_fleet(cfg, t, p_pool, q_pool)
        start = time.perf_counter()
        report = batch_gcd(records)
        elapsed += time.perf_counter() - start
        _count_from_attack(report, policies, stats)
        truth += _truth_factored(secrets)
        if keep_corpora:
            corpora.append(records)

    total = sum(s.pairs for s in stats.values())
    exp_i = sum(s.expected_identical for s in stats.values())
    exp_f = sum(s.expected_factored for s in stats.values())
    rep = FleetReport(
        config=cfg.to_json(),
        pairs_total=total,
        pairs_identical=sum(s.identical for s in stats.values()),
        pairs_factored=sum(s.factored for s in stats.values()),
        expected_identical=exp_i,
        expected_factored=exp_f,
        sigma_identical=math.sqrt(sum(s.sigma_identical**2 for s in stats.values())),
        sigma_factored=math.sqrt(sum(s.sigma_factored**2 for s in stats.values())),
        ground_truth_factored=truth,
        breakdown=stats,
        pool_image_collisions=pool_image_collisions(p_pool, cfg.k),
        attack_seconds=elapsed,
    )
    return (rep, corpora) if keep_corpora else rep


def run_mixed_population(
    k: int,
    devices_a: int,
    devices_b: int,
    pool_size_p: int,
    pool_size_q: int,
    master_seed: int,
    trials: int = 1,
    pcfg: PrimalityConfig = DEFAULT_CONFIG,
) -> FleetReport:
    """Company A runs the fixed policy, company B the independent one."""
    mix = tuple((p, c) for p, c in (("fixed", devices_a), ("independent", devices_b)) if c)
    cfg = FleetConfig(k, devices_a + devices_b, pool_size_p, pool_size_q, mix, master_seed, trials)
    return run_fleet(cfg, pcfg)


# Prime-search bias


@dataclass
class GapBiasReport:
    lo: int
    hi: int
    trials: int
    primes: list[int]
    exact_incremental: list[Fraction]
    uniform: Fraction
    counts_fresh: list[int]
    counts_incremental: list[int]

    def sigma_violations(self, which: str, z: float = 3.0) -> list[int]:
        """Primes whose empirical frequency is more than z sigma off the model."""
        if which == "fresh":
            counts, probs = self.counts_fresh, [self.uniform] * len(self.primes)
        else:
            counts, probs = self.counts_incremental, self.exact_incremental
        bad = []
        for p, c, pr in zip(self.primes, counts, probs):
            pr = float(pr)
            sigma = math.sqrt(self.trials * pr * (1 - pr))
            if abs(c - self.trials * pr) > z * sigma + 1e-12:
                bad.append(p)
        return bad


def exact_incremental_distribution(
    lo: int, hi: int, cfg: PrimalityConfig = DEFAULT_CONFIG, src: RandomSource | None = None
) -> tuple[list[int], list[Fraction]]:
    """Selection probabilities of the p, p+2, ... search from a uniform odd start.

    Starts with no prime at or after them inside [lo, hi] are excluded.
    """
    if lo % 2 == 0 or hi % 2 == 0 or lo > hi:
        raise DomainError("lo and hi must be odd with lo <= hi")
    odds = range(lo, hi + 1, 2)
    flags = [is_probable_prime(x, cfg, src) for x in odds]
    primes = [x for x, f in zip(odds, flags) if f]
    if not primes:
        raise DomainError(f"no primes in [{lo}, {hi}]")
    weight = Counter()
    run = 0
    for x, f in zip(odds, flags):
        run += 1
        if f:
            weight[x] = run
            run = 0
    valid = sum(weight.values())
    return primes, [Fraction(weight[p], valid) for p in primes]


def gap_bias_experiment(
    lo: int,
    hi: int,
    trials: int,
    src: RandomSource,
    cfg: PrimalityConfig = DEFAULT_CONFIG,
) -> GapBiasReport:
    """Compare fresh-retry and incremental prime search on one window.

    Candidates are drawn from [lo - 1, hi] and made odd, which is uniform
    over the odd numbers of [lo, hi]. Incremental searches that run past hi
    are redrawn.
    """
    primes, exact = exact_incremental_distribution(lo, hi, cfg, src)
    index = {p: i for i, p in enumerate(primes)}
    fresh = [0] * len(primes)
    incr = [0] * len(primes)
    for _ in range(trials):
        fresh[index[random_prime_in(lo - 1, hi, cfg, src)]] += 1
    for _ in range(trials):
        while True:
            start = uniform_int(src, lo - 1, hi) | 1
            if start <= primes[-1]:
                break
        incr[index[next_prime_search(start, cfg, src)]] += 1
    return GapBiasReport(lo, hi, trials, primes, exact, Fraction(1, len(primes)), fresh, incr)


# Key-generation cost


@dataclass(frozen=True)
class ScalingRow:
    k: int
    trials: int
    mean_outer_attempts: float
    mean_candidate_tests: float

    @property
    def model_outer_attempts(self) -> float:
        return self.k * math.log(2)


def iteration_scaling(
    ks: list[int],
    trials_per_k: int,
    master_seed: int,
    cfg: PrimalityConfig = DEFAULT_CONFIG,
) -> dict[int, ScalingRow]:
    """Mean outer attempts and primality tests of fixed-policy keygen per k."""
    if trials_per_k < 1:
        raise DomainError("trials_per_k must be >= 1")
    table = {}
    for k in ks:
        if k < 8:
            raise DomainError("iteration scaling needs k >= 8")
        outer = tests = 0
        for t in range(trials_per_k):
            kp = keygen_fixed(k, cfg, split(master_seed, (k << 32) + t))
            outer += kp.outer_attempts
            tests += kp.candidate_tests
        table[k] = ScalingRow(k, trials_per_k, outer / trials_per_k, tests / trials_per_k)
    return table
