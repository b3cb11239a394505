"""Exhaustive audits of the complement map for a range of k."""

import argparse

from sharedprime.derivation import audit_bounds, audit_injectivity, audit_pairwise_safety


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmin", type=int, default=4)
    ap.add_argument("--kmax", type=int, default=16)
    ap.add_argument("--pairwise-max", type=int, default=12, help="largest k for the pairwise audit")
    ap.add_argument("--strict", action="store_true")
    args = ap.parse_args()

    print(f"{'k':>3} {'primes':>7} {'bound viol':>10} {'collisions':>10} {'prime-img':>9} {'valid':>6} {'unsafe':>6}")
    for k in range(args.kmin, args.kmax + 1):
        b = audit_bounds(k, strict=args.strict)
        coll = audit_injectivity(k, strict=args.strict)
        valid = unsafe = "-"
        if k <= args.pairwise_max:
            pw = audit_pairwise_safety(k, strict=args.strict)
            valid, unsafe = len(pw.valid_pairs), len(pw.unsafe_pairs)
            for a, c, g in pw.unsafe_pairs:
                print(f"    unsafe: {a[0]}*{a[1]} and {c[0]}*{c[1]} share {g}")
        print(f"{k:>3} {b.checked:>7} {len(b.violations):>10} {len(coll):>10} "
              f"{sum(c.image_is_prime for c in coll):>9} {valid:>6} {unsafe:>6}")


if __name__ == "__main__":
    main()
