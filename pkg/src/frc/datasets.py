"""JSONL dataset records and the bundled corpora."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .pipeline.traces import read_jsonl

LANGS = ("en", "zh")
BUNDLED = ("corpus", "conflict", "transfer")


@dataclass(frozen=True)
class Record:
    id: str
    text: str
    label: str | None = None
    lang: str = "en"

    def to_dict(self) -> dict:
        return {"id": self.id, "text": self.text, "label": self.label, "lang": self.lang}


def parse_record(d: dict, classes=None) -> Record:
    if "text" not in d or not isinstance(d["text"], str):
        raise ValueError(f"record {d.get('id')!r} lacks a text field")
    label = d.get("label")
    if label is not None and classes is not None and label not in classes.names:
        raise ValueError(f"record {d.get('id')!r} has label {label!r} outside {classes.names}")
    lang = d.get("lang", "en")
    if lang not in LANGS:
        raise ValueError(f"record {d.get('id')!r} has unsupported lang {lang!r}")
    return Record(str(d.get("id", "")), d["text"], label, lang)


def load_dataset(path, classes=None) -> list[Record]:
    rows = [parse_record(d, classes) for d in read_jsonl(path)]
    ids = [r.id for r in rows]
    if len(set(ids)) != len(ids):
        raise ValueError(f"{path}: duplicate record ids")
    return rows


def data_path(name: str) -> Path:
    """Filesystem path of a bundled asset such as ``lexicon.json`` or ``corpus.jsonl``."""
    return Path(str(resources.files("frc") / "data" / name))


def bundled(name: str, classes=None) -> list[Record]:
    if name not in BUNDLED:
        raise KeyError(f"no bundled dataset {name!r}; choose from {BUNDLED}")
    return load_dataset(data_path(f"{name}.jsonl"), classes)


def fingerprint(records) -> str:
    """Short content hash over record ids, texts and labels."""
    h = hashlib.sha256()
    for r in records:
        h.update(f"{r.id}\t{r.text}\t{r.label}\n".encode("utf-8"))
    return h.hexdigest()[:16]
