"""Comparison reports across FRC, CoT and DP runs."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

from ..fuzzy import ClassSet
from .metrics import (AMBIGUITY_THRESHOLD, EvalPair, classify_and_split, f1_score,
                      monotonicity_score, robustness_score)

LEVELS = ("low", "medium", "high")


def _mean(values):
    values = [v for v in values if v is not None]
    return math.fsum(values) / len(values) if values else None


@dataclass
class MethodReport:
    """One row of a comparison table.

    ``rs_by_level`` averages the per-class robustness scores of the polar
    classes; the per-class values are kept in ``rs_by_level_class``.  F1
    fields are None when gold labels are missing, and the clear/ambiguous
    fields are None when no membership vector is available to bucket by.
    """

    method: str
    rs_by_level: dict[str, float | None] = field(default_factory=dict)
    rs_by_level_class: dict[str, dict[str, float]] = field(default_factory=dict)
    rs_avg: float | None = None
    ms_by_class: dict[str, float] | None = None
    ms_avg: float | None = None
    f1_clear: float | None = None
    f1_ambiguous: float | None = None
    f1_avg: float | None = None
    n_clear: int | None = None
    n_ambiguous: int | None = None
    n_pairs: dict[str, int] = field(default_factory=dict)


@dataclass
class EvalReport:
    methods: list[MethodReport]
    dataset_fingerprint: str
    config: dict
    threshold: float = AMBIGUITY_THRESHOLD
    n_records: int = 0

    def method(self, name: str) -> MethodReport:
        for m in self.methods:
            if m.method == name:
                return m
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"dataset_fingerprint": self.dataset_fingerprint, "threshold": self.threshold,
                "n_records": self.n_records, "config": self.config,
                "methods": [asdict(m) for m in self.methods]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        return cls([MethodReport(**m) for m in d["methods"]], d["dataset_fingerprint"],
                   d.get("config", {}), d.get("threshold", AMBIGUITY_THRESHOLD),
                   d.get("n_records", 0))

    def csv_rows(self) -> list[dict]:
        rows = []
        for m in self.methods:
            row = {"method": m.method}
            for lv in LEVELS:
                row[f"rs_{lv}"] = m.rs_by_level.get(lv)
            row["rs_avg"] = m.rs_avg
            for c, v in (m.ms_by_class or {}).items():
                row[f"ms_{c}"] = v
            row.update(ms_avg=m.ms_avg, f1_clear=m.f1_clear, f1_ambiguous=m.f1_ambiguous,
                       f1_avg=m.f1_avg, n_clear=m.n_clear, n_ambiguous=m.n_ambiguous)
            rows.append(row)
        return rows

    def to_csv(self) -> str:
        return _csv(self.csv_rows())

    def table(self) -> str:
        return _table(self.csv_rows())


def _csv(rows) -> str:
    fields = []
    for r in rows:
        fields += [k for k in r if k not in fields]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r.get(k) is None else r[k]) for k in fields})
    return buf.getvalue()


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def _table(rows) -> str:
    if not rows:
        return "(no rows)\n"
    fields = []
    for r in rows:
        fields += [k for k in r if k not in fields]
    cells = [fields] + [[_fmt(r.get(k)) for k in fields] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(fields))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def trace_vector(trace) -> dict[str, float] | None:
    """Class-name -> value mapping for FRC and CoT traces; None for DP results."""
    if trace.method == "frc":
        return trace.fused.as_dict(trace.classes)
    if trace.method == "cot":
        return dict(zip(trace.classes.names, trace.probabilities))
    return None


def _polar(vec, classes: ClassSet):
    return {c: vec[c] for c in classes.polar}


def trace_label(trace) -> str:
    if trace.method == "dp":
        return trace.label
    return classify_and_split(_polar(trace_vector(trace), trace.classes))[0]


def method_report(method: str, index: Mapping[str, object], classes: ClassSet,
                  records=None, perturbed: Sequence = (), threshold: float = AMBIGUITY_THRESHOLD,
                  bucket_index: Mapping[str, object] | None = None) -> MethodReport:
    """Score one method whose traces are looked up by input text in ``index``.

    ``bucket_index`` supplies the membership vectors that decide the
    clear/ambiguous bucket of each record; it defaults to ``index`` itself.
    """
    rep = MethodReport(method)
    polar = classes.polar

    def vec(text):
        t = index.get(text)
        return trace_vector(t) if t is not None else None

    for lv in LEVELS:
        pairs = []
        for r in perturbed:
            if r.kind != f"robust_{lv}":
                continue
            a, b = vec(r.original_text), vec(r.perturbed_text)
            if a is not None and b is not None:
                pairs.append(EvalPair(a, b))
        rep.n_pairs[lv] = len(pairs)
        if pairs:
            per_class = {c: robustness_score(pairs, c) for c in polar}
            rep.rs_by_level_class[lv] = per_class
            rep.rs_by_level[lv] = _mean(per_class.values())
        else:
            rep.rs_by_level[lv] = None
    rep.rs_avg = _mean(rep.rs_by_level.values())

    mono = []
    for r in perturbed:
        if r.kind != "monotonic":
            continue
        a, b = vec(r.original_text), vec(r.perturbed_text)
        if a is not None and b is not None:
            mono.append(EvalPair(a, b, r.shift_labels))
    rep.n_pairs["monotonic"] = len(mono)
    if mono:
        rep.ms_by_class = {c: monotonicity_score(mono, c) for c in polar}
        rep.ms_avg = _mean(rep.ms_by_class.values())

    labeled = [r for r in (records or ()) if r.label is not None and r.text in index]
    if labeled:
        preds = [trace_label(index[r.text]) for r in labeled]
        gold = [r.label for r in labeled]
        rep.f1_avg = f1_score(preds, gold)
        bidx = bucket_index if bucket_index is not None else index
        vectors = [trace_vector(bidx[r.text]) if r.text in bidx else None for r in labeled]
        if all(v is not None for v in vectors):
            buckets = [classify_and_split(_polar(v, classes), threshold)[1] for v in vectors]
            for name in ("clear", "ambiguous"):
                sel = [i for i, b in enumerate(buckets) if b == name]
                setattr(rep, f"n_{name}", len(sel))
                if sel:
                    setattr(rep, f"f1_{name}",
                            f1_score([preds[i] for i in sel], [gold[i] for i in sel]))
    return rep


def build_report(indexes: Mapping[str, Mapping[str, object]], classes: ClassSet, records=None,
                 perturbed: Sequence = (), threshold: float = AMBIGUITY_THRESHOLD,
                 config: dict | None = None, fingerprint: str = "") -> EvalReport:
    """One :class:`MethodReport` per method, with buckets taken from FRC when it ran."""
    bucket = indexes.get("frc")
    methods = [method_report(m, idx, classes, records, perturbed, threshold,
                             bucket if bucket is not None else None)
               for m, idx in indexes.items()]
    n = len([r for r in (records or ()) if r.label is not None])
    return EvalReport(methods, fingerprint, dict(config or {}), threshold, n)


@dataclass
class TransferRow:
    configuration: str
    f1_avg: float | None
    f1_clear: float | None
    f1_ambiguous: float | None
    n_clear: int | None
    n_ambiguous: int | None
    n_keyword_knowledge: int
    n_subunit_knowledge: int


@dataclass
class TransferReport:
    rows: list[TransferRow]
    dataset_fingerprint: str
    config: dict
    teacher_model: str = ""
    warnings: list[str] = field(default_factory=list)

    def row(self, name: str) -> TransferRow:
        for r in self.rows:
            if r.configuration == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"dataset_fingerprint": self.dataset_fingerprint, "teacher_model": self.teacher_model,
                "config": self.config, "warnings": list(self.warnings),
                "rows": [asdict(r) for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"

    def csv_rows(self) -> list[dict]:
        return [asdict(r) for r in self.rows]

    def to_csv(self) -> str:
        return _csv(self.csv_rows())

    def table(self) -> str:
        return _table(self.csv_rows())
