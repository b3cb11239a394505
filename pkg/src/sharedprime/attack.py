"""Shared-factor attack over a corpus of public moduli.

``pairwise_gcd_scan`` is the quadratic reference. ``batch_gcd`` computes the
same report in quasilinear time: multiply everything up a product tree,
reduce the root modulo n_i^2 down a remainder tree, and take
gcd(n_i, (P mod n_i^2) / n_i). A modulus whose gcd comes out as n_i itself
(duplicated, or sharing both primes with different peers) is resolved by a
local pairwise pass, so the two reports agree exactly.
"""

from __future__ import annotations

import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError

CLEAN = "clean"
FACTORED = "factored"
IDENTICAL = "identical_duplicate"


@dataclass(frozen=True)
class ModulusRecord:
    id: str
    n: int
    provenance: dict | None = None
    extra: dict = field(default_factory=dict, compare=False)


@dataclass
class AttackEntry:
    id: str
    n: int
    status: str = CLEAN
    factors: tuple[int, int] | None = None
    duplicates: list[str] = field(default_factory=list)


@dataclass
class AttackReport:
    entries: list[AttackEntry]
    method: str = ""
    elapsed: float = field(default=0.0, compare=False)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def factored(self) -> int:
        return sum(e.status == FACTORED for e in self.entries)

    @property
    def identical_pairs(self) -> int:
        groups: dict[int, int] = defaultdict(int)
        for e in self.entries:
            groups[e.n] += 1
        return sum(c * (c - 1) // 2 for c in groups.values())

    def findings(self) -> list[tuple]:
        """Method-independent content, for comparing two reports."""
        return [(e.id, e.n, e.status, e.factors, tuple(e.duplicates)) for e in self.entries]

    def same_findings(self, other: AttackReport) -> bool:
        return self.findings() == other.findings()


def _split(n: int, g: int) -> tuple[int, int]:
    a, b = g, n // g
    return (a, b) if a >= b else (b, a)


def _check(corpus: Sequence[ModulusRecord]) -> None:
    for r in corpus:
        if r.n < 2:
            raise DomainError(f"modulus {r.id!r} is < 2")


def _finalize(entries: list[AttackEntry]) -> None:
    for e in entries:
        if e.factors is not None:
            e.status = FACTORED
        elif e.duplicates:
            e.status = IDENTICAL


def pairwise_gcd_scan(corpus: Sequence[ModulusRecord]) -> AttackReport:
    start = time.perf_counter()
    _check(corpus)
    entries = [AttackEntry(r.id, r.n) for r in corpus]
    for i, a in enumerate(entries):
        for b in entries[i + 1 :]:
            g = math.gcd(a.n, b.n)
            if g == 1:
                continue
            if a.n == b.n:
                a.duplicates.append(b.id)
                b.duplicates.append(a.id)
                continue
            for x in (a, b):
                if x.factors is None and 1 < g < x.n:
                    x.factors = _split(x.n, g)
    _finalize(entries)
    return AttackReport(entries, "pairwise", time.perf_counter() - start)


def product_tree(values: Sequence[int]) -> list[list[int]]:
    """Levels from leaves (``tree[0]``) to root (``tree[-1] == [prod]``)."""
    if not values:
        raise DomainError("product tree of an empty list")
    level = list(values)
    tree = [level]
    while len(level) > 1:
        level = [
            level[i] * level[i + 1] if i + 1 < len(level) else level[i]
            for i in range(0, len(level), 2)
        ]
        tree.append(level)
    return tree


def remainder_tree(tree: list[list[int]]) -> list[int]:
    """root mod leaf^2 for every leaf, reducing modulo node^2 on the way down."""
    rems = tree[-1]
    for level in reversed(tree[:-1]):
        rems = [rems[i // 2] % (v * v) for i, v in enumerate(level)]
    return rems


def batch_gcd_values(values: Sequence[int]) -> list[int]:
    """gcd(n_i, product of all other n_j) for each i."""
    tree = product_tree(values)
    return [math.gcd(n, z // n) for n, z in zip(values, remainder_tree(tree))]


def batch_gcd(corpus: Sequence[ModulusRecord]) -> AttackReport:
    start = time.perf_counter()
    _check(corpus)
    entries = [AttackEntry(r.id, r.n) for r in corpus]
    if not entries:
        return AttackReport(entries, "batch", time.perf_counter() - start)
    gs = batch_gcd_values([e.n for e in entries])
    by_n: dict[int, list[int]] = defaultdict(list)
    for i, e in enumerate(entries):
        by_n[e.n].append(i)
    for i, (e, g) in enumerate(zip(entries, gs)):
        if g == 1:
            continue
        if g < e.n:
            e.factors = _split(e.n, g)
            continue
        e.duplicates = [entries[j].id for j in by_n[e.n] if j != i]
        for other in entries:
            if other.n == e.n:
                continue
            h = math.gcd(e.n, other.n)
            if 1 < h < e.n:
                e.factors = _split(e.n, h)
                break
    _finalize(entries)
    return AttackReport(entries, "batch", time.perf_counter() - start)


def attack(corpus: Sequence[ModulusRecord], method: str = "batch") -> AttackReport:
    if method == "batch":
        return batch_gcd(corpus)
    if method == "pairwise":
        return pairwise_gcd_scan(corpus)
    raise DomainError(f"unknown attack method {method!r}")
