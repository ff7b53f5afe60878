"""Deterministic JSON reports.

Records keep the order in which the suite produced them, which is fixed by
the basis enumeration.  Nothing time- or thread-dependent is serialized, so
two runs on the same inputs and flags give identical bytes.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


def _plain(v):
    """JSON-safe copy: rationals become "p/q" strings, tuples lists, keys strings."""
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        raise TypeError("floats have no place in an exact report")
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (set, frozenset)):
        return sorted(_plain(x) for x in v)
    return str(v)


def flags_digest(instance_digest: str, suite: str, flags: dict) -> str:
    blob = json.dumps({"instance": instance_digest, "suite": suite, "flags": _plain(flags)}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class Report:
    suite: str
    instance: str
    instance_digest: str
    flags: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    regime: str = "exact"
    extra: dict = field(default_factory=dict)

    def add(self, records, regime: str | None = None) -> None:
        for r in records:
            r = dict(r)
            w = r.get("witness") or {}
            r.setdefault("regime", w.get("regime") or ("exact" if w.get("exact") else regime or self.regime))
            self.records.append(r)

    def counts(self) -> dict:
        out: dict = {}
        for r in self.records:
            v = r["verdict"].split("(")[0]
            out[v] = out.get(v, 0) + 1
        return dict(sorted(out.items()))

    @property
    def status(self) -> str:
        verdicts = {r["verdict"].split("(")[0] for r in self.records}
        if "fail" in verdicts:
            return "fail"
        if "inconclusive" in verdicts:
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[self.status]

    @property
    def digest(self) -> str:
        return flags_digest(self.instance_digest, self.suite, self.flags)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "instance": self.instance,
            "instance_digest": self.instance_digest,
            "digest": self.digest,
            "flags": _plain(self.flags),
            "status": self.status,
            "counts": self.counts(),
            **_plain(self.extra),
            "records": [_plain({k: r[k] for k in ("identity", "element", "verdict", "regime", "witness")})
                        for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + "\n"

    def summary_line(self) -> str:
        counts = ", ".join(f"{k} {v}" for k, v in self.counts().items()) or "no records"
        return f"{self.suite} {self.instance}: {self.status} ({counts})"
