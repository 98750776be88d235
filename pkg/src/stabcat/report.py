"""Structured, deterministic verification reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    axiom: str
    subject: str
    ok: bool
    witness: dict | None = None
    note: str = ""

    def to_dict(self):
        d = {"axiom": self.axiom, "subject": self.subject, "verdict": "pass" if self.ok else "fail"}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    suite: str
    config: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def add(self, axiom, subject, ok, witness=None, note=""):
        self.checks.append(Check(axiom, subject, bool(ok), witness, note))
        return ok

    def extend(self, other):
        self.checks.extend(other.checks)
        return self

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    def failures(self, axiom=None):
        return [c for c in self.checks if not c.ok and (axiom is None or c.axiom == axiom)]

    def count(self, axiom=None):
        return sum(1 for c in self.checks if axiom is None or c.axiom == axiom)

    def summary(self):
        out = {}
        for c in self.checks:
            s = out.setdefault(c.axiom, {"pass": 0, "fail": 0})
            s["pass" if c.ok else "fail"] += 1
        return out

    def to_dict(self, verbose=False):
        records = [c.to_dict() for c in self.checks if verbose or not c.ok]
        return {
            "suite": self.suite,
            "config": self.config,
            "summary": self.summary(),
            "result": "pass" if self.passed else "fail",
            "records": records,
        }

    def to_json(self, verbose=False):
        return json.dumps(self.to_dict(verbose), indent=2, ensure_ascii=False)

    def lines(self):
        out = []
        for axiom, s in self.summary().items():
            verdict = "PASS" if s["fail"] == 0 else "FAIL"
            out.append(f"{verdict} {self.suite}:{axiom} ({s['pass']} ok, {s['fail']} failed)")
        return out


def witness_object(A):
    return A.describe()


def witness_map(f):
    return {"source": f.source.name, "target": f.target.name, "table": f.table()}
