"""Run fleet simulations and print measured vs modeled pair collision counts.

With no arguments runs the all-fixed, all-independent and 50/50 mixed fleets
at k=32 with 100 devices and pools of 100 primes.
"""

import argparse
import json

from sharedprime.simulation import FleetConfig, run_fleet, run_mixed_population


def show(name, rep):
    print(f"== {name}")
    print(f"  pairs {rep.pairs_total}  identical {rep.pairs_identical} "
          f"(model {rep.expected_identical:.2f} +- {rep.sigma_identical:.2f})  "
          f"factored {rep.pairs_factored} (model {rep.expected_factored:.2f} +- {rep.sigma_factored:.2f})")
    for cls, s in rep.breakdown.items():
        print(f"  {cls:<24} pairs {s.pairs:>5} identical {s.identical:>4} factored {s.factored:>4}"
              f"  model {s.expected_factored:8.2f}  p-channel {s.p_channel:.5f} q-channel {s.q_channel:.5f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", help="fleet config JSON; overrides the default sweep")
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=0xF1EE7)
    ap.add_argument("--trials", type=int, default=1)
    args = ap.parse_args()

    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = FleetConfig.from_json(json.load(fh))
        show(args.config, run_fleet(cfg))
        return
    for policy in ("independent", "fixed"):
        cfg = FleetConfig(32, 100, 100, 100, ((policy, 100),), args.seed, args.trials)
        show(f"all {policy}", run_fleet(cfg))
    show("50 fixed / 50 independent", run_mixed_population(32, 50, 50, 100, 100, args.seed, args.trials))


if __name__ == "__main__":
    main()
