"""Command-line entry point.

Exit codes: 0 success, 1 domain or validation error, 2 usage error,
3 the run succeeded and found something (collision, unsafe pair, factored
or duplicated modulus).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .attack import ModulusRecord, attack
from .corpus_io import (
    dumps_key_record,
    dumps_report,
    encode_hex,
    read_corpus,
    write_corpus,
    write_report,
)
from .derivation import (
    audit_bounds,
    audit_injectivity,
    audit_pairwise_safety,
    complement,
    complement_divfree,
    complement_forward_search,
    complement_lenstra98,
    complement_offset,
)
from .errors import NotInvertibleError, SharedPrimeError
from .keygen import Policy, extend_to_private_key, keygen
from .randomness import OsSource, parse_seed, split
from .simulation import FleetConfig, run_fleet

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_FINDING = 3


def _hex_arg(text: str) -> int:
    t = text.lower()
    if t.startswith("0x"):
        t = t[2:]
    try:
        return int(t, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex integer: {text!r}") from None


def _seed_arg(text: str) -> int:
    try:
        return parse_seed(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_derive(args) -> int:
    p, k, v = args.p, args.k, args.variant
    if v == "floor":
        q = complement(p, k)
    elif v == "divfree":
        q = complement_divfree(p, k)
    elif v == "lenstra98":
        q = complement_lenstra98(p, k)
    elif v == "forward":
        q = complement_forward_search(p, k, src=split(0))
    elif v.startswith("offset:"):
        q = complement_offset(p, k, int(v.split(":", 1)[1], 0))
    else:
        raise SharedPrimeError(f"unknown variant {v!r}")
    print(encode_hex(q))
    return EXIT_OK


def cmd_keygen(args) -> int:
    policy = Policy.parse(args.policy)
    if args.strict:
        if policy.name != "fixed":
            raise SharedPrimeError("--strict applies to the fixed policy only")
        policy = Policy("fixed_strict")
    if args.seed is None and args.entropy != "os":
        raise SharedPrimeError("--seed is required (or pass --entropy os)")
    lines, records = [], []
    for i in range(args.count):
        if args.entropy == "os":
            src, prov = OsSource(), {"entropy": "os"}
        else:
            src, prov = split(args.seed, i), {"seed": f"{args.seed:#x}", "stream": i}
        for _ in range(100):
            kp = keygen(args.k, policy, src=src, max_outer=args.max_outer)
            try:
                pk = extend_to_private_key(kp, args.e)
                break
            except NotInvertibleError:
                continue
        else:
            raise SharedPrimeError(f"e={args.e} not invertible for 100 consecutive keys")
        kid = f"key-{i:04d}"
        lines.append(dumps_key_record(pk, prov))
        records.append(ModulusRecord(kid, kp.n, {"policy": str(policy), **prov}))
        summary = f"{kid} n={encode_hex(kp.n)} outer_attempts={kp.outer_attempts}"
        if args.out:
            print(summary)
        else:
            _log(summary)
    if args.out:
        Path(args.out).write_text("".join(lines), encoding="utf-8", newline="\n")
    else:
        sys.stdout.write("".join(lines))
    if args.corpus:
        write_corpus(records, args.corpus)
    return EXIT_OK


def cmd_audit(args) -> int:
    kw = {"max_k": args.max_k, "strict": args.strict}
    if args.check == "bounds":
        r = audit_bounds(args.k, **kw)
        print(f"k={r.k} checked={r.checked} violations={len(r.violations)}")
        for p, q in r.violations:
            print(f"  violation p={p} f={q}")
        return EXIT_FINDING if r.violations else EXIT_OK
    if args.check == "injectivity":
        cols = audit_injectivity(args.k, **kw)
        print(f"k={args.k} collisions={len(cols)}")
        for c in cols:
            tag = "prime" if c.image_is_prime else "composite"
            print(f"  ({c.p1}, {c.p2}) -> {c.image} [{tag} image]")
        return EXIT_FINDING if cols else EXIT_OK
    r = audit_pairwise_safety(args.k, **kw)
    print(f"k={r.k} valid_pairs={len(r.valid_pairs)} unsafe_pairs={len(r.unsafe_pairs)}")
    for p, q, n in r.valid_pairs:
        print(f"  valid p={p} q={q} n={n}")
    for a, b, g in r.unsafe_pairs:
        print(f"  unsafe n={a[2]} n'={b[2]} gcd={g}")
    return EXIT_FINDING if r.unsafe_pairs else EXIT_OK


def cmd_attack(args) -> int:
    corpus = read_corpus(args.corpus)
    report = attack(corpus, args.method)
    text = dumps_report(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    _log(
        f"{report.method}: {report.size} moduli, {report.factored} factored, "
        f"{report.identical_pairs} identical pairs ({report.elapsed:.3f}s)"
    )
    clean = all(e.status == "clean" for e in report.entries)
    return EXIT_OK if clean else EXIT_FINDING


def cmd_simulate(args) -> int:
    try:
        obj = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SharedPrimeError(f"cannot read config: {exc}") from None
    cfg = FleetConfig.from_json(obj)
    report, corpora = run_fleet(cfg, keep_corpora=True)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_report(report.to_json(), out / "report.json")
    for t, records in enumerate(corpora):
        write_corpus(records, out / f"corpus-{t:04d}.jsonl")
    print(
        f"pairs={report.pairs_total} identical={report.pairs_identical} "
        f"(expected {report.expected_identical:.2f}) factored={report.pairs_factored} "
        f"(expected {report.expected_factored:.2f})"
    )
    _log(f"attack time {report.attack_seconds:.3f}s")
    return EXIT_OK


def cmd_version(args) -> int:
    print(__version__)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sharedprime", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("derive", help="compute q from p")
    d.add_argument("--p", type=_hex_arg, required=True, help="p in hex")
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--variant", default="floor", help="floor|divfree|lenstra98|offset:B|forward")
    d.set_defaults(func=cmd_derive)

    g = sub.add_parser("keygen", help="generate key records")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--policy", default="fixed", help="fixed|independent|offset:B")
    g.add_argument("--strict", action="store_true", help="cap p at isqrt(2^(2k+1))")
    g.add_argument("--seed", type=_seed_arg)
    g.add_argument("--entropy", choices=("seed", "os"), default="seed")
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--e", type=int, default=65537)
    g.add_argument("--max-outer", type=int, default=None)
    g.add_argument("--out", help="key records (JSON lines); stdout if omitted")
    g.add_argument("--corpus", help="also write the public moduli as a corpus")
    g.set_defaults(func=cmd_keygen)

    a = sub.add_parser("audit", help="exhaustive checks at small k")
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--check", choices=("bounds", "injectivity", "pairwise"), required=True)
    a.add_argument("--strict", action="store_true")
    a.add_argument("--max-k", type=int, default=20)
    a.set_defaults(func=cmd_audit)

    t = sub.add_parser("attack", help="shared-factor attack on a corpus")
    t.add_argument("--corpus", required=True)
    t.add_argument("--method", choices=("pairwise", "batch"), default="batch")
    t.add_argument("--out")
    t.set_defaults(func=cmd_attack)

    s = sub.add_parser("simulate", help="run a fleet simulation")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("version")
    v.set_defaults(func=cmd_version)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SharedPrimeError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
