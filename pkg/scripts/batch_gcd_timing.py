"""Wall-clock of batch GCD vs the pairwise scan on seeded low-entropy corpora."""

import argparse
import time

from sharedprime.attack import batch_gcd, pairwise_gcd_scan
from sharedprime.simulation import FleetConfig, build_pools, generate_fleet


def corpus(size, k, pool, seed):
    cfg = FleetConfig(k, size, pool, pool, (("independent", size),), seed)
    return generate_fleet(cfg, 0, *build_pools(cfg))[0]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=128)
    ap.add_argument("--pool", type=int, default=200, help="distinct primes per pool")
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024])
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=7)
    args = ap.parse_args()

    for size in args.sizes:
        c = corpus(size, args.k, args.pool, args.seed)
        t0 = time.perf_counter()
        b = batch_gcd(c)
        tb = time.perf_counter() - t0
        t0 = time.perf_counter()
        p = pairwise_gcd_scan(c)
        tp = time.perf_counter() - t0
        print(f"size {size:>5}  factored {b.factored:>4}  batch {tb:7.3f}s  pairwise {tp:7.3f}s  "
              f"agree {b.same_findings(p)}")


if __name__ == "__main__":
    main()
