import json
import math
from fractions import Fraction
from itertools import product

import pytest

from sharedprime.derivation import complement, domain_primes
from sharedprime.errors import ConfigError, DomainError
from sharedprime.randomness import SplitMix64
from sharedprime.simulation import (
    FleetConfig,
    build_pools,
    exact_incremental_distribution,
    gap_bias_experiment,
    iteration_scaling,
    pair_model,
    run_fleet,
    run_mixed_population,
)


def within(measured, expected, sigma, z=3.0):
    return abs(measured - expected) <= z * sigma


def fleet(k, n, sp, sq, mix, seed=1, trials=1):
    return FleetConfig(k, n, sp, sq, tuple(mix), seed, trials)


def test_all_fixed_small():
    r = run_fleet(fleet(32, 20, 10, 10, [("fixed", 20)], seed=11))
    assert r.pairs_total == 190
    assert r.pairs_factored == 0
    assert r.expected_identical == pytest.approx(19.0)
    assert within(r.pairs_identical, 19.0, math.sqrt(190 * 0.1 * 0.9))


def test_all_independent_small():
    r = run_fleet(fleet(32, 20, 10, 10, [("independent", 20)], seed=11))
    exp = 190 * 2 * 0.1 * 0.9
    assert r.expected_factored == pytest.approx(exp)
    assert within(r.pairs_factored, exp, math.sqrt(190 * 0.18 * 0.82))


def test_single_value_pool_gives_identical_moduli():
    r = run_fleet(fleet(32, 2, 1, 1, [("fixed", 2)]))
    assert (r.pairs_identical, r.pairs_factored) == (1, 0)


def test_measured_matches_ground_truth():
    for mix in ([("independent", 40)], [("fixed", 20), ("independent", 20)]):
        r = run_fleet(fleet(24, 40, 8, 8, mix, seed=5, trials=3))
        assert r.pairs_factored == r.ground_truth_factored


def test_degenerate_mixes_reduce_exactly():
    a = run_mixed_population(32, 30, 0, 20, 20, master_seed=9)
    b = run_fleet(fleet(32, 30, 20, 20, [("fixed", 30)], seed=9))
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    a = run_mixed_population(32, 0, 30, 20, 20, master_seed=9)
    b = run_fleet(fleet(32, 30, 20, 20, [("independent", 30)], seed=9))
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())


def test_mixed_population():
    r = run_mixed_population(32, 50, 50, 50, 50, master_seed=2012)
    aa = r.breakdown["fixed-fixed"]
    bb = r.breakdown["independent-independent"]
    ab = r.breakdown["fixed-independent"]
    assert aa.factored == 0
    assert aa.pairs == 1225 and bb.pairs == 1225 and ab.pairs == 2500
    p = 1 / 50
    assert bb.expected_factored == pytest.approx(1225 * 2 * p * (1 - p))
    assert within(bb.factored, bb.expected_factored, bb.sigma_factored)
    assert within(ab.factored, ab.expected_factored, ab.sigma_factored)


def test_reports_are_reproducible():
    cfg = fleet(32, 30, 10, 10, [("fixed", 15), ("independent", 15)], seed=3, trials=2)
    assert json.dumps(run_fleet(cfg).to_json()) == json.dumps(run_fleet(cfg).to_json())
    assert run_fleet(cfg).config["master_seed"] == "0x3"


def test_pools_are_distinct_and_valid():
    cfg = fleet(32, 2, 40, 40, [("fixed", 2)])
    p_pool, q_pool = build_pools(cfg)
    assert len(set(p_pool)) == 40 and len(set(q_pool)) == 40
    assert all(2**32 + 1 < p < 2**33 for p in p_pool)
    assert all(2**31 < q < 2**32 for q in q_pool)


def test_pool_too_large_for_range():
    # only p = 61 has a prime image at k = 5
    with pytest.raises(ConfigError):
        run_fleet(fleet(5, 2, 2, 1, [("fixed", 2)]))


def test_config_validation():
    with pytest.raises(ConfigError):
        fleet(32, 10, 5, 5, [("fixed", 9)])
    with pytest.raises(ConfigError):
        fleet(32, 10, 5, 5, [("offset", 10)])
    with pytest.raises(ConfigError):
        fleet(32, 10, 0, 5, [("fixed", 10)])
    with pytest.raises(ConfigError):
        FleetConfig.from_json({"k": 32})


def test_config_from_json():
    cfg = FleetConfig.from_json(
        {
            "k": 32,
            "devices": 4,
            "pool_size_p": 5,
            "pool_size_q": 6,
            "policy_mix": {"fixed": 2, "independent": 2},
            "master_seed": "0x10",
            "trials": 2,
        }
    )
    assert cfg.master_seed == 16 and cfg.policy_mix == (("fixed", 2), ("independent", 2))
    assert FleetConfig.from_json(cfg.to_json()) == cfg


def enumerate_pair_model(a, b, p_pool, q_pool, k):
    """Exact pair probabilities by listing every joint outcome."""

    def outcomes(policy):
        if policy == "fixed":
            return [((p, complement(p, k)), Fraction(1, len(p_pool))) for p in p_pool]
        w = Fraction(1, len(p_pool) * len(q_pool))
        return [((p, q), w) for p, q in product(p_pool, q_pool)]

    ident = fact = Fraction(0)
    for (x, wx), (y, wy) in product(outcomes(a), outcomes(b)):
        if x == y:
            ident += wx * wy
        elif x[0] == y[0] or x[1] == y[1]:
            fact += wx * wy
    return ident, fact


@pytest.mark.parametrize("a,b", [("fixed", "fixed"), ("fixed", "independent"), ("independent", "independent")])
def test_pair_model_against_enumeration(a, b):
    k = 9
    # the pool includes 827 and 829, which share the prime image 317
    p_pool = [p for p in domain_primes(k) if p in (827, 829, 521, 523, 541, 547)]
    q_pool = [317, 257, 263, 269]
    m = pair_model(a, b, p_pool, q_pool, k)
    ident, fact = enumerate_pair_model(a, b, p_pool, q_pool, k)
    assert m.identical == pytest.approx(float(ident))
    assert m.factored == pytest.approx(float(fact))


def test_fixed_fleet_with_colliding_pool_member_factors():
    p_pool = [827, 829]
    m = pair_model("fixed", "fixed", p_pool, [317], 9)
    assert m.factored == pytest.approx(0.5)


def test_exact_incremental_distribution():
    primes, weights = exact_incremental_distribution(101, 149)
    assert primes == [101, 103, 107, 109, 113, 127, 131, 137, 139, 149]
    assert [w * 25 for w in weights] == [1, 1, 2, 1, 2, 7, 2, 3, 1, 5]
    assert sum(weights) == 1


def test_incremental_weight_tracks_gap():
    primes, weights = exact_incremental_distribution(1001, 1999)
    prev = 999
    for p, w in zip(primes, weights):
        assert w * sum(1 for _ in range(1001, primes[-1] + 1, 2)) == (p - prev) // 2
        prev = p


def test_single_prime_range():
    r = gap_bias_experiment(113, 113, 50, SplitMix64(1))
    assert r.primes == [113] and r.counts_fresh == [50] and r.counts_incremental == [50]


def test_no_prime_range():
    with pytest.raises(DomainError):
        gap_bias_experiment(115, 125, 10, SplitMix64(1))
    with pytest.raises(DomainError):
        gap_bias_experiment(100, 149, 10, SplitMix64(1))


def test_gap_bias_small_run():
    r = gap_bias_experiment(101, 149, 20_000, SplitMix64(8))
    assert sum(r.counts_fresh) == sum(r.counts_incremental) == 20_000
    assert r.sigma_violations("fresh") == []
    assert r.sigma_violations("incremental") == []
    # 127 follows the longest run and wins far more than its fair share
    assert r.counts_incremental[5] > 2 * r.counts_fresh[5]


def test_iteration_scaling_reproducible():
    a = iteration_scaling([16], 1, master_seed=4)
    b = iteration_scaling([16], 1, master_seed=4)
    assert a == b
    assert a[16].mean_candidate_tests >= a[16].mean_outer_attempts >= 1


def test_iteration_scaling_rejects_small_k():
    with pytest.raises(DomainError):
        iteration_scaling([5], 10, 0)
