"""Reasoning traces and their JSONL persistence.

Field names in the serialised form are stable; see README for the schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from ..fuzzy import ClassSet, Keyword, MembershipVector, SubUnit, WeightMatrix, fuse_global

EPOCH = "1970-01-01T00:00:00+00:00"


def wall_clock() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def fixed_clock() -> str:
    return EPOCH


def _classes_dict(classes: ClassSet) -> dict:
    return {"classes": list(classes.names), "includes_other": classes.includes_other}


def _classes_from(d: dict) -> ClassSet:
    return ClassSet.of(*d["classes"], includes_other=d.get("includes_other", False))


@dataclass(frozen=True)
class FrcTrace:
    input_text: str
    classes: ClassSet
    keywords: tuple[Keyword, ...]
    subunits: tuple[SubUnit, ...]
    weights: WeightMatrix
    adjustment_notes: tuple[str, ...]
    fused: MembershipVector
    backend_id: str
    timestamps: dict = field(default_factory=dict)
    record_id: str | None = None

    method = "frc"

    def recomputed(self) -> MembershipVector:
        return fuse_global(self.subunits, self.weights, self.classes)

    def to_dict(self) -> dict:
        names = self.classes
        index = {id(k): i for i, k in enumerate(self.keywords)}
        return {
            "method": "frc",
            "record_id": self.record_id,
            "input_text": self.input_text,
            **_classes_dict(names),
            "keywords": [
                {"surface": k.surface, "span": list(k.span) if k.span else None,
                 "origin": k.origin, "memberships": k.memberships.as_dict(names)}
                for k in self.keywords
            ],
            "subunits": [
                {"text": s.text, "span": list(s.span) if s.span else None,
                 "keyword_indices": [index[id(k)] for k in s.keywords],
                 "memberships": s.memberships.as_dict(names)}
                for s in self.subunits
            ],
            "weights": {n: list(self.weights.row(c)) for c, n in enumerate(names.names)},
            "adjustment_notes": list(self.adjustment_notes),
            "fused": self.fused.as_dict(names),
            "backend_id": self.backend_id,
            "timestamps": dict(self.timestamps),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FrcTrace":
        classes = _classes_from(d)
        kws = tuple(
            Keyword(k["surface"], MembershipVector.from_mapping(k["memberships"], classes),
                    tuple(k["span"]) if k.get("span") else None, k.get("origin", "elicited"))
            for k in d["keywords"]
        )
        subs = tuple(
            SubUnit(s["text"], tuple(kws[i] for i in s["keyword_indices"]),
                    MembershipVector.from_mapping(s["memberships"], classes),
                    tuple(s["span"]) if s.get("span") else None)
            for s in d["subunits"]
        )
        weights = WeightMatrix(tuple(tuple(d["weights"][n]) for n in classes.names))
        return cls(d["input_text"], classes, kws, subs, weights,
                   tuple(d.get("adjustment_notes", ())),
                   MembershipVector.from_mapping(d["fused"], classes),
                   d.get("backend_id", ""), dict(d.get("timestamps", {})), d.get("record_id"))


@dataclass(frozen=True)
class CotTrace:
    input_text: str
    classes: ClassSet
    step_notes: tuple[str, ...]
    probabilities: tuple[float, ...]
    backend_id: str
    timestamps: dict = field(default_factory=dict)
    record_id: str | None = None

    method = "cot"

    def to_dict(self) -> dict:
        return {
            "method": "cot",
            "record_id": self.record_id,
            "input_text": self.input_text,
            **_classes_dict(self.classes),
            "step_notes": list(self.step_notes),
            "probabilities": dict(zip(self.classes.names, self.probabilities)),
            "backend_id": self.backend_id,
            "timestamps": dict(self.timestamps),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CotTrace":
        classes = _classes_from(d)
        return cls(d["input_text"], classes, tuple(d.get("step_notes", ())),
                   tuple(float(d["probabilities"][n]) for n in classes.names),
                   d.get("backend_id", ""), dict(d.get("timestamps", {})), d.get("record_id"))


@dataclass(frozen=True)
class DpResult:
    input_text: str
    classes: ClassSet
    label: str
    backend_id: str
    timestamps: dict = field(default_factory=dict)
    record_id: str | None = None

    method = "dp"

    def to_dict(self) -> dict:
        return {"method": "dp", "record_id": self.record_id, "input_text": self.input_text,
                **_classes_dict(self.classes), "label": self.label,
                "backend_id": self.backend_id, "timestamps": dict(self.timestamps)}

    @classmethod
    def from_dict(cls, d: dict) -> "DpResult":
        return cls(d["input_text"], _classes_from(d), d["label"], d.get("backend_id", ""),
                   dict(d.get("timestamps", {})), d.get("record_id"))


_BY_METHOD = {"frc": FrcTrace, "cot": CotTrace, "dp": DpResult}


def trace_from_dict(d: dict):
    return _BY_METHOD[d.get("method", "frc")].from_dict(d)


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def write_jsonl(path, rows: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(dumps(row) + "\n")


def read_jsonl(path) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise ValueError(f"{path}:{n}: invalid JSON ({e.msg})") from None
    return out


def load_traces(path) -> list:
    return [trace_from_dict(d) for d in read_jsonl(Path(path))]
