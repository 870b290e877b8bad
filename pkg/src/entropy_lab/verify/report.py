"""Check reports: one record per (check, k, n) instance."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

VERIFIED = "verified"
UNKNOWN = "certificate_unknown"
VIOLATED = "violated"
VACUOUS = "vacuous"
OUTCOMES = (VERIFIED, UNKNOWN, VIOLATED, VACUOUS)


@dataclass
class Instance:
    check: str
    k: int
    n: int
    outcome: str
    evidence: dict = field(default_factory=dict)
    seconds: float = 0.0
    label: str = ""

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"bad outcome {self.outcome!r}")

    def to_json(self, timing=True):
        out = {"check": self.check, "k": self.k, "n": self.n, "outcome": self.outcome,
               "label": self.label, "evidence": self.evidence}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class CheckReport:
    check: str
    k: int
    n_range: tuple
    instances: list = field(default_factory=list)
    seconds: float = 0.0

    def add(self, n, outcome, evidence=None, seconds=0.0, label=""):
        inst = Instance(self.check, self.k, n, outcome, evidence or {}, seconds, label)
        self.instances.append(inst)
        return inst

    def counts(self):
        out = {o: 0 for o in OUTCOMES}
        for inst in self.instances:
            out[inst.outcome] += 1
        return out

    @property
    def violated(self):
        return [i for i in self.instances if i.outcome == VIOLATED]

    @property
    def ok(self):
        """No violations and no unresolved certificates."""
        c = self.counts()
        return c[VIOLATED] == 0 and c[UNKNOWN] == 0

    def unknown_rate(self):
        c = self.counts()
        live = c[VERIFIED] + c[UNKNOWN] + c[VIOLATED]
        return c[UNKNOWN] / live if live else 0.0

    def jsonl(self, timing=True):
        return "".join(json.dumps(i.to_json(timing), sort_keys=True, default=str) + "\n"
                       for i in self.instances)

    def summary_row(self):
        c = self.counts()
        return {"check": self.check, "k": self.k,
                "n_min": self.n_range[0], "n_max": self.n_range[1], **c}


def merge(reports):
    """Deterministic order: check id, then k, then n, then label."""
    insts = [i for r in reports for i in r.instances]
    insts.sort(key=lambda i: (i.check, i.k, i.n, i.label))
    return insts


def to_jsonl(reports, timing=True):
    return "".join(json.dumps(i.to_json(timing), sort_keys=True, default=str) + "\n"
                   for i in merge(reports))


def to_csv(reports):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["check", "k", "n_min", "n_max", *OUTCOMES],
                       lineterminator="\n")
    w.writeheader()
    for r in sorted(reports, key=lambda r: (r.check, r.k)):
        w.writerow(r.summary_row())
    return buf.getvalue()
