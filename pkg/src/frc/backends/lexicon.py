"""Deterministic lexicon oracle.

A lexicon maps surface forms to per-class base strengths.  Modifiers scale an
entry's strengths and negators swap the first two classes; both act on an
entry only from within the two units immediately preceding it in the same
clause.  A "unit" is a token run matched against the lexicon, longest match
first, so multi-token entries such as "not bad" or "好吃" are single units.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from ..fuzzy import ClassSet, MembershipVector, clamp01
from ..text import Token, normalize, token_key, tokenize

WINDOW = 2
MAX_FACTOR = 2.0


@dataclass(frozen=True)
class Lexicon:
    entries: dict[str, dict[str, float]] = field(default_factory=dict)
    modifiers: dict[str, float] = field(default_factory=dict)
    negators: frozenset[str] = frozenset()

    def __post_init__(self):
        entries = {normalize(k): {c: float(v) for c, v in vals.items()}
                   for k, vals in self.entries.items()}
        modifiers = {normalize(k): float(v) for k, v in self.modifiers.items()}
        negators = frozenset(normalize(k) for k in self.negators)
        for k, vals in entries.items():
            for c, v in vals.items():
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"strength of {k!r} for {c!r} is {v}, outside [0, 1]")
        for k, f in modifiers.items():
            if not 0.0 < f <= MAX_FACTOR:
                raise ValueError(f"modifier {k!r} factor {f} outside (0, {MAX_FACTOR}]")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "modifiers", modifiers)
        object.__setattr__(self, "negators", negators)
        longest = max((len(tokenize(k)) for k in [*entries, *modifiers, *negators]), default=1)
        object.__setattr__(self, "_max_len", longest)

    @classmethod
    def from_dict(cls, data: dict) -> "Lexicon":
        return cls(dict(data.get("entries", {})), dict(data.get("modifiers", {})),
                   frozenset(data.get("negators", [])))

    @classmethod
    def load(cls, path) -> "Lexicon":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dict(self) -> dict:
        return {"entries": {k: dict(v) for k, v in sorted(self.entries.items())},
                "modifiers": dict(sorted(self.modifiers.items())),
                "negators": sorted(self.negators)}

    def with_entry(self, surface: str, strengths: dict[str, float]) -> "Lexicon":
        entries = dict(self.entries)
        entries[normalize(surface)] = dict(strengths)
        return Lexicon(entries, self.modifiers, self.negators)

    def without(self, surfaces) -> "Lexicon":
        drop = {normalize(s) for s in surfaces}
        return Lexicon({k: v for k, v in self.entries.items() if k not in drop},
                       self.modifiers, self.negators)

    def kind_of(self, key: str) -> str | None:
        if key in self.entries:
            return "entry"
        if key in self.modifiers:
            return "modifier"
        if key in self.negators:
            return "negator"
        return None


@dataclass(frozen=True)
class Unit:
    kind: str | None
    key: str
    start: int
    end: int
    clause: int


def units(tokens: Sequence[Token], lexicon: Lexicon) -> list[Unit]:
    """Greedy longest-match segmentation of a token sequence into lexicon units."""
    out = []
    i = 0
    while i < len(tokens):
        hit = None
        for n in range(min(lexicon._max_len, len(tokens) - i), 0, -1):
            run = tokens[i:i + n]
            if run[-1].clause != run[0].clause:
                continue
            key = token_key(run)
            kind = lexicon.kind_of(key)
            if kind is not None:
                hit = (n, kind, key)
                break
        if hit is None:
            hit = (1, None, tokens[i].text)
        n, kind, key = hit
        out.append(Unit(kind, key, tokens[i].start, tokens[i + n - 1].end, tokens[i].clause))
        i += n
    return out


@dataclass(frozen=True)
class EntryHit:
    """One matched entry with its context-adjusted degrees."""

    index: int               # position in the unit list
    unit: Unit
    degrees: tuple[float, ...]
    factor: float
    negated: bool
    window: tuple[Unit, ...]  # preceding units in the same clause, nearest last

    @property
    def bare(self) -> bool:
        return all(u.kind not in ("modifier", "negator") for u in self.window)

    def span(self) -> tuple[int, int]:
        """Entry span extended back over the modifiers and negators acting on it."""
        start = self.unit.start
        for u in self.window:
            if u.kind in ("modifier", "negator"):
                start = min(start, u.start)
        return start, self.unit.end


def entry_hits(text_or_tokens, classes: ClassSet, lexicon: Lexicon) -> list[EntryHit]:
    tokens = _as_tokens(text_or_tokens)
    us = units(tokens, lexicon)
    names = classes.names
    hits = []
    for i, u in enumerate(us):
        if u.kind != "entry":
            continue
        window = tuple(w for w in us[max(0, i - WINDOW):i] if w.clause == u.clause)
        factor = 1.0
        negations = 0
        for w in window:
            if w.kind == "modifier":
                factor *= lexicon.modifiers[w.key]
            elif w.kind == "negator":
                negations += 1
        base = lexicon.entries[u.key]
        strengths = [base.get(n, 0.0) for n in names]
        negated = negations % 2 == 1
        if negated:
            strengths[0], strengths[1] = strengths[1], strengths[0]
        hits.append(EntryHit(i, u, tuple(clamp01(s * factor) for s in strengths),
                             factor, negated, window))
    return hits


def lexicon_membership(text_unit, classes: ClassSet, lexicon: Lexicon) -> MembershipVector:
    """Per-class max of context-adjusted entry strengths; zeros when nothing matches."""
    hits = entry_hits(text_unit, classes, lexicon)
    if not hits:
        return MembershipVector.zeros(len(classes))
    return MembershipVector(tuple(max(h.degrees[c] for h in hits) for c in range(len(classes))))


def keyword_spans(text: str, classes: ClassSet, lexicon: Lexicon) -> list[tuple[int, int]]:
    return [h.span() for h in entry_hits(text, classes, lexicon)]


def _as_tokens(text_or_tokens) -> list[Token]:
    if isinstance(text_or_tokens, str):
        return tokenize(text_or_tokens)
    seq = list(text_or_tokens)
    if seq and isinstance(seq[0], Token):
        return seq
    return tokenize(" ".join(seq))
