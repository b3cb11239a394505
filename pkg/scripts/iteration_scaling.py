"""Mean outer attempts and primality tests of fixed-policy keygen against k ln 2."""

import argparse
import math
import time

from sharedprime.simulation import iteration_scaling


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", type=int, nargs="+", default=[32, 64, 128, 256])
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=0x5CA1E)
    args = ap.parse_args()

    print(f"{'k':>5} {'trials':>6} {'outer':>8} {'k ln2':>8} {'ratio':>6} {'tests':>9} {'secs':>7}")
    prev = None
    for k in args.ks:
        t0 = time.perf_counter()
        row = iteration_scaling([k], args.trials, args.seed)[k]
        secs = time.perf_counter() - t0
        model = k * math.log(2)
        print(f"{k:>5} {row.trials:>6} {row.mean_outer_attempts:>8.2f} {model:>8.2f} "
              f"{row.mean_outer_attempts / model:>6.3f} {row.mean_candidate_tests:>9.1f} {secs:>7.1f}")
        if prev is not None:
            print(f"      doubling ratio {row.mean_outer_attempts / prev.mean_outer_attempts:.3f}")
        prev = row


if __name__ == "__main__":
    main()
