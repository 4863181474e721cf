"""Teacher-to-student knowledge bundles.

A bundle holds keyword-level and sub-unit-level degrees taken from a teacher
model's FRC traces.  Student runs render the bundle into their prompts and
reuse matching entries directly.  Matching is exact on the lowercased,
whitespace-normalised token sequence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..backends.base import ElicitationRequest
from ..backends.templates import render_prompt
from ..errors import EmptyTraceSet
from ..fuzzy import BINARY, ClassSet, MembershipVector
from ..text import normalize


@dataclass(frozen=True)
class KnowledgeBundle:
    keyword_knowledge: tuple[tuple[str, MembershipVector], ...] = ()
    subunit_knowledge: tuple[tuple[str, MembershipVector], ...] = ()
    teacher_model: str = ""
    classes: ClassSet = BINARY

    def __post_init__(self):
        for _, vec in (*self.keyword_knowledge, *self.subunit_knowledge):
            vec.check(self.classes)

    @property
    def is_empty(self) -> bool:
        return not self.keyword_knowledge and not self.subunit_knowledge

    def keyword_index(self) -> dict[str, MembershipVector]:
        return {normalize(s): v for s, v in self.keyword_knowledge}

    def subunit_index(self) -> dict[str, MembershipVector]:
        return {normalize(s): v for s, v in self.subunit_knowledge}

    def only_keywords(self) -> "KnowledgeBundle":
        return KnowledgeBundle(self.keyword_knowledge, (), self.teacher_model, self.classes)

    def only_subunits(self) -> "KnowledgeBundle":
        return KnowledgeBundle((), self.subunit_knowledge, self.teacher_model, self.classes)

    def to_dict(self) -> dict:
        c = self.classes
        return {
            "teacher_model": self.teacher_model,
            "classes": list(c.names),
            "includes_other": c.includes_other,
            "keyword_knowledge": [{"surface": s, "memberships": v.as_dict(c)}
                                  for s, v in self.keyword_knowledge],
            "subunit_knowledge": [{"text": s, "memberships": v.as_dict(c)}
                                  for s, v in self.subunit_knowledge],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "KnowledgeBundle":
        classes = ClassSet.of(*d["classes"], includes_other=d.get("includes_other", False))
        kw = tuple((e["surface"], MembershipVector.from_mapping(e["memberships"], classes))
                   for e in d.get("keyword_knowledge", []))
        su = tuple((e["text"], MembershipVector.from_mapping(e["memberships"], classes))
                   for e in d.get("subunit_knowledge", []))
        return cls(kw, su, d.get("teacher_model", ""), classes)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n",
                              encoding="utf-8")

    @classmethod
    def load(cls, path) -> "KnowledgeBundle":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _dedup(entries) -> tuple[tuple[str, MembershipVector], ...]:
    # on collision keep the entry whose strongest class degree is highest
    best: dict[str, tuple[str, MembershipVector]] = {}
    for surface, vec in entries:
        key = normalize(surface)
        if not key:
            continue
        if key not in best or max(vec) > max(best[key][1]):
            best[key] = (surface, vec)
    return tuple(best.values())


def extract_knowledge(traces) -> KnowledgeBundle:
    """Collect deduplicated keyword and sub-unit knowledge from teacher FRC traces.

    Keywordless and catch-all sub-units carry no information and are skipped.
    """
    traces = list(traces)
    if not traces:
        raise EmptyTraceSet("no teacher traces to extract knowledge from")
    backends = {t.backend_id for t in traces}
    if len(backends) > 1:
        raise ValueError(f"traces come from several backends: {sorted(backends)}")
    classes = traces[0].classes
    keywords, subunits = [], []
    for t in traces:
        if t.classes != classes:
            raise ValueError("traces use different class sets")
        keywords += [(k.surface, k.memberships) for k in t.keywords
                     if k.origin != "subunit_knowledge"]
        subunits += [(s.text, s.memberships) for s in t.subunits
                     if s.keywords and s.span is not None]
    return KnowledgeBundle(_dedup(keywords), _dedup(subunits), backends.pop(), classes)


def build_student_prompt(request: ElicitationRequest, bundle: KnowledgeBundle | None) -> str:
    """Render ``request`` with ``bundle``'s knowledge blocks (keywords, then sub-units)."""
    return render_prompt(request, bundle if bundle is not None else KnowledgeBundle())
