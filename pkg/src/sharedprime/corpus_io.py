"""File formats.

Corpus files are JSON lines, one ``{"id": ..., "n": "<hex>"}`` object per
line, with an optional ``provenance`` object. Big integers are lowercase
minimal hex without a ``0x`` prefix. Unknown fields survive a round trip.
Key records carry the secret values and are never mixed into corpora.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .attack import AttackReport, ModulusRecord
from .errors import FormatError, ValidationError
from .keygen import KeyPair, Policy, PrivateKey

_HEX = re.compile(r"^(0|[1-9a-f][0-9a-f]*)$")

KEY_FIELDS = (
    "k",
    "policy",
    "p",
    "q",
    "n",
    "e",
    "d",
    "lambda",
    "outer_attempts",
    "candidate_tests",
    "provenance",
)


def encode_hex(n: int) -> str:
    if n < 0:
        raise ValueError("negative integers have no encoding")
    return format(n, "x")


def decode_hex(text, line: int | None = None, name: str = "value") -> int:
    if not isinstance(text, str) or not _HEX.match(text):
        raise FormatError(f"{name}: {text!r} is not minimal lowercase hex", line)
    return int(text, 16)


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _open_text(dest, mode: str):
    if isinstance(dest, (str, Path)):
        return open(dest, mode, encoding="utf-8", newline="\n")
    return None


# Corpora


def record_to_json(r: ModulusRecord) -> dict:
    obj = {"id": r.id, "n": encode_hex(r.n)}
    if r.provenance is not None:
        obj["provenance"] = r.provenance
    obj.update(r.extra)
    return obj


def _check_unique(corpus: Iterable[ModulusRecord]) -> None:
    seen = set()
    for r in corpus:
        if r.id in seen:
            raise ValidationError(f"duplicate id {r.id!r}")
        seen.add(r.id)


def dumps_corpus(corpus: Sequence[ModulusRecord]) -> str:
    _check_unique(corpus)
    for r in corpus:
        if r.n < 4:
            raise ValidationError(f"modulus {r.id!r} is < 4")
    return "".join(_dumps(record_to_json(r)) + "\n" for r in corpus)


def write_corpus(corpus: Sequence[ModulusRecord], dest: str | Path | IO[str]) -> None:
    text = dumps_corpus(corpus)
    f = _open_text(dest, "w")
    if f is None:
        dest.write(text)
        return
    with f:
        f.write(text)


def loads_corpus(text: str) -> list[ModulusRecord]:
    out = []
    seen = set()
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON ({exc.msg})", lineno) from None
        if not isinstance(obj, dict):
            raise FormatError("record is not a JSON object", lineno)
        for key in ("id", "n"):
            if key not in obj:
                raise FormatError(f"missing field {key!r}", lineno)
        rid = obj["id"]
        if not isinstance(rid, str):
            raise FormatError("id must be a string", lineno)
        n = decode_hex(obj["n"], lineno, "n")
        if n < 4:
            raise FormatError(f"modulus {n} is < 4", lineno)
        if rid in seen:
            raise ValidationError(f"line {lineno}: duplicate id {rid!r}")
        seen.add(rid)
        prov = obj.get("provenance")
        if prov is not None and not isinstance(prov, dict):
            raise FormatError("provenance must be an object", lineno)
        extra = {k: v for k, v in obj.items() if k not in ("id", "n", "provenance")}
        out.append(ModulusRecord(rid, n, prov, extra))
    return out


def read_corpus(source: str | Path | IO[str]) -> list[ModulusRecord]:
    f = _open_text(source, "r")
    if f is None:
        return loads_corpus(source.read())
    with f:
        return loads_corpus(f.read())


# Key records


def key_to_json(pk: PrivateKey, provenance: dict | None = None) -> dict:
    kp = pk.key
    return {
        "k": kp.k,
        "policy": str(kp.policy),
        "p": encode_hex(kp.p),
        "q": encode_hex(kp.q),
        "n": encode_hex(kp.n),
        "e": encode_hex(pk.e),
        "d": encode_hex(pk.d),
        "lambda": encode_hex(pk.carmichael_lambda),
        "outer_attempts": kp.outer_attempts,
        "candidate_tests": kp.candidate_tests,
        "provenance": provenance,
    }


def dumps_key_record(pk: PrivateKey, provenance: dict | None = None) -> str:
    return _dumps(key_to_json(pk, provenance)) + "\n"


def write_key_record(
    pk: PrivateKey, dest: str | Path | IO[str], provenance: dict | None = None
) -> None:
    text = dumps_key_record(pk, provenance)
    f = _open_text(dest, "w")
    if f is None:
        dest.write(text)
        return
    with f:
        f.write(text)


def key_from_json(obj, line: int | None = None) -> tuple[PrivateKey, dict | None]:
    if not isinstance(obj, dict):
        raise FormatError("key record is not a JSON object", line)
    for name in KEY_FIELDS:
        if name not in obj:
            raise FormatError(f"missing field {name!r}", line)
    for name in ("k", "outer_attempts", "candidate_tests"):
        if not isinstance(obj[name], int) or isinstance(obj[name], bool) or obj[name] < 0:
            raise FormatError(f"{name} must be a non-negative integer", line)
    ints = {name: decode_hex(obj[name], line, name) for name in ("p", "q", "n", "e", "d", "lambda")}
    try:
        policy = Policy.parse(obj["policy"])
    except (ValueError, AttributeError):
        raise FormatError(f"unknown policy {obj['policy']!r}", line) from None
    kp = KeyPair(
        obj["k"],
        ints["p"],
        ints["q"],
        ints["n"],
        policy,
        obj["outer_attempts"],
        obj["candidate_tests"],
    )
    prov = obj["provenance"]
    if prov is not None and not isinstance(prov, dict):
        raise FormatError("provenance must be an object or null", line)
    return PrivateKey(kp, ints["e"], ints["d"], ints["lambda"]), prov


def loads_key_records(text: str) -> list[tuple[PrivateKey, dict | None]]:
    out = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON ({exc.msg})", lineno) from None
        out.append(key_from_json(obj, lineno))
    return out


def read_key_record(source: str | Path | IO[str]) -> tuple[PrivateKey, dict | None]:
    f = _open_text(source, "r")
    text = source.read() if f is None else f.read()
    if f is not None:
        f.close()
    records = loads_key_records(text)
    if len(records) != 1:
        raise FormatError(f"expected exactly one key record, found {len(records)}")
    return records[0]


def read_key_records(source: str | Path) -> list[tuple[PrivateKey, dict | None]]:
    with open(source, encoding="utf-8") as f:
        return loads_key_records(f.read())


# Reports


def attack_report_to_json(report: AttackReport) -> dict:
    entries = []
    for e in report.entries:
        obj = {"id": e.id, "n": encode_hex(e.n), "status": e.status}
        if e.factors is not None:
            obj["factors"] = [encode_hex(x) for x in e.factors]
        if e.duplicates:
            obj["duplicates"] = list(e.duplicates)
        entries.append(obj)
    return {
        "method": report.method,
        "size": report.size,
        "factored": report.factored,
        "identical_pairs": report.identical_pairs,
        "entries": entries,
    }


def _plain(obj):
    if is_dataclass(obj):
        return _plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def dumps_report(obj) -> str:
    """Canonical pretty JSON for any report (dataclass or dict)."""
    if isinstance(obj, AttackReport):
        obj = attack_report_to_json(obj)
    return json.dumps(_plain(obj), indent=2, ensure_ascii=False) + "\n"


def write_report(obj, dest: str | Path) -> None:
    with open(dest, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_report(obj))
