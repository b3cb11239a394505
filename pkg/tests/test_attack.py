import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import collision_corpus, prime_list
from sharedprime.attack import (
    CLEAN,
    FACTORED,
    IDENTICAL,
    ModulusRecord,
    attack,
    batch_gcd,
    batch_gcd_values,
    pairwise_gcd_scan,
    product_tree,
    remainder_tree,
)
from sharedprime.errors import DomainError

PRIMES = prime_list(200, 33)


def corpus(*ns):
    return [ModulusRecord(f"n{i}", n) for i, n in enumerate(ns)]


def statuses(report):
    return [(e.status, e.factors) for e in report.entries]


@pytest.mark.parametrize("scan", [pairwise_gcd_scan, batch_gcd])
def test_shared_prime_pair(scan):
    r = scan(corpus(1037, 2623))
    assert statuses(r) == [(FACTORED, (61, 17)), (FACTORED, (61, 43))]
    assert r.factored == 2


@pytest.mark.parametrize("scan", [pairwise_gcd_scan, batch_gcd])
def test_fixed_policy_moduli_clean(scan):
    r = scan(corpus(4183, 4171, 4141))
    assert all(e.status == CLEAN for e in r.entries)


@pytest.mark.parametrize("scan", [pairwise_gcd_scan, batch_gcd])
def test_duplicates(scan):
    r = scan(corpus(4183, 4183))
    assert [e.status for e in r.entries] == [IDENTICAL, IDENTICAL]
    assert [e.duplicates for e in r.entries] == [["n1"], ["n0"]]
    assert r.factored == 0 and r.identical_pairs == 1


def test_batch_mixed():
    # 2623 = 61 * 43 also shares 43 with 4171 = 97 * 43, so nothing stays clean
    c = corpus(1037, 2623, 4171)
    r = batch_gcd(c)
    assert statuses(r) == [(FACTORED, (61, 17)), (FACTORED, (61, 43)), (FACTORED, (97, 43))]
    assert r.same_findings(pairwise_gcd_scan(c))
    c = corpus(1037, 2623, 4183)
    assert statuses(batch_gcd(c))[2] == (CLEAN, None)
    assert batch_gcd(c).same_findings(pairwise_gcd_scan(c))


def test_triangle_uses_fallback():
    c = corpus(61 * 17, 61 * 43, 17 * 43)
    assert batch_gcd_values([x.n for x in c]) == [1037, 2623, 731]
    r = batch_gcd(c)
    assert statuses(r) == [(FACTORED, (61, 17)), (FACTORED, (61, 43)), (FACTORED, (43, 17))]
    assert r.same_findings(pairwise_gcd_scan(c))


def test_duplicate_that_also_shares():
    c = corpus(1037, 1037, 2623)
    for r in (batch_gcd(c), pairwise_gcd_scan(c)):
        assert [e.status for e in r.entries] == [FACTORED] * 3
        assert r.entries[0].duplicates == ["n1"]
    assert batch_gcd(c).same_findings(pairwise_gcd_scan(c))


def test_product_tree():
    t = product_tree([3, 5, 7, 11])
    assert t[-1] == [1155]
    assert product_tree([4183])[-1] == [4183]
    t = product_tree([2, 3])
    assert t == [[2, 3], [6]]
    t = product_tree([2, 3, 5])
    assert t[-1] == [30] and t[0] == [2, 3, 5]
    with pytest.raises(DomainError):
        product_tree([])


@given(st.lists(st.integers(2, 10**12), min_size=1, max_size=40))
def test_remainder_tree(values):
    root = math.prod(values)
    assert remainder_tree(product_tree(values)) == [root % (v * v) for v in values]


@given(st.lists(st.integers(2, 10**9), min_size=1, max_size=30))
def test_batch_values_match_definition(values):
    for i, g in enumerate(batch_gcd_values(values)):
        others = math.prod(values[:i] + values[i + 1 :])
        assert g == math.gcd(values[i], others)


def test_rejects_small_moduli():
    with pytest.raises(DomainError):
        batch_gcd(corpus(1))
    with pytest.raises(DomainError):
        pairwise_gcd_scan(corpus(0))


def test_empty_and_single():
    assert batch_gcd([]).entries == []
    assert statuses(batch_gcd(corpus(4183))) == [(CLEAN, None)]


def test_attack_dispatch():
    c = corpus(1037, 2623)
    assert attack(c, "pairwise").method == "pairwise"
    assert attack(c).method == "batch"
    with pytest.raises(DomainError):
        attack(c, "ecm")


@given(st.integers(0, 2**64 - 1), st.integers(2, 120))
@settings(max_examples=60, deadline=None)
def test_batch_equals_pairwise(seed, size):
    c = collision_corpus(seed, size, PRIMES)
    b, p = batch_gcd(c), pairwise_gcd_scan(c)
    assert b.same_findings(p)
    for e in b.entries:
        if e.status == FACTORED:
            x, y = e.factors
            assert x * y == e.n and 1 < y <= x < e.n
