import pytest

from sharedprime.randomness import SplitMix64


class ScriptedSource:
    """Replays fixed ``next_bits`` results; fails loudly when it runs dry."""

    def __init__(self, values):
        self.values = list(values)
        self.calls = []

    def next_bits(self, b):
        self.calls.append(b)
        if not self.values:
            raise AssertionError("scripted source exhausted")
        v = self.values.pop(0)
        assert 0 <= v < (1 << b) or (b == 0 and v == 0), (v, b)
        return v


def offsets(lo, values):
    """Raw draws that make ``uniform_int(src, lo, hi)`` land on ``values``."""
    return [v - lo for v in values]


@pytest.fixture
def src():
    return SplitMix64(0x5EED)


def brute_force_sieve(limit):
    """Independent oracle: plain Eratosthenes over a Python list."""
    is_p = [True] * limit
    is_p[0:2] = [False, False]
    i = 2
    while i * i < limit:
        if is_p[i]:
            is_p[i * i :: i] = [False] * len(range(i * i, limit, i))
        i += 1
    return is_p


def collision_corpus(seed, size, primes):
    """Random corpus with forced shared primes, duplicates and triangles.

    ``primes`` is a list of distinct primes to build moduli from; a small
    random slice of it plays the role of a low-entropy pool.
    """
    from sharedprime.attack import ModulusRecord
    from sharedprime.randomness import SplitMix64, uniform_int

    rng = SplitMix64(seed)
    pool = [primes[uniform_int(rng, 0, len(primes) - 1)] for _ in range(max(3, size // 3))]
    pool = list(dict.fromkeys(pool))
    ns = []
    while len(ns) < size:
        kind = uniform_int(rng, 0, 9)
        if kind == 0 and ns:
            ns.append(ns[uniform_int(rng, 0, len(ns) - 1)])
        elif kind == 1 and len(pool) >= 3 and len(ns) + 3 <= size:
            a, b, c = (pool[uniform_int(rng, 0, len(pool) - 1)] for _ in range(3))
            if len({a, b, c}) == 3:
                ns += [a * b, a * c, b * c]
        else:
            a = pool[uniform_int(rng, 0, len(pool) - 1)]
            b = primes[uniform_int(rng, 0, len(primes) - 1)]
            if a != b:
                ns.append(a * b)
    return [ModulusRecord(f"m{i:04d}", n) for i, n in enumerate(ns)]


def prime_list(count, bits, seed=1):
    from sharedprime.ntheory import random_prime_in
    from sharedprime.randomness import SplitMix64

    rng = SplitMix64(seed)
    out = {}
    while len(out) < count:
        out[random_prime_in(2 ** (bits - 1) + 1, 2**bits - 1, src=rng)] = None
    return list(out)


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _ACCEPTANCE.get(label, True)
        _ACCEPTANCE[label] = prev and rep.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: (int(s.split()[0].rstrip(".")), s)):
        status = "PASS" if _ACCEPTANCE[label] else "FAIL"
        terminalreporter.write_line(f"{status}  {label}")
