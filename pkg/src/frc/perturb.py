"""Robustness and monotonicity perturbation datasets.

Two generators share one interface: :class:`LexiconPerturber` rewrites text
deterministically from a synonym table and lexicon, :class:`LlmPerturber`
asks a chat model.  The module-level functions validate what either returns.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol

from .backends.lexicon import Lexicon, entry_hits, units
from .backends.parsing import extract_json_object
from .errors import GenerationFailed, MalformedResponse, NoSentimentToken, NoSwapCandidates, TransportError
from .fuzzy import ClassSet
from .text import clause_spans, find_phrases, is_cjk, leading_marker, normalize, tokenize

log = logging.getLogger(__name__)

LEVELS = ("low", "medium", "high")
KINDS = ("robust_low", "robust_medium", "robust_high", "monotonic")


@dataclass(frozen=True)
class PerturbedRecord:
    id: str
    source_id: str
    original_text: str
    perturbed_text: str
    kind: str
    shift_labels: Mapping[str, int] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.kind == "monotonic":
            if not self.shift_labels:
                raise ValueError("monotonic records need shift labels")
            if any(v not in (-1, 0, 1) for v in self.shift_labels.values()):
                raise ValueError(f"bad shift labels {self.shift_labels}")
            if any(self.shift_labels.values()) and self.perturbed_text == self.original_text:
                raise ValueError("a labelled shift needs a changed text")
        elif self.shift_labels is not None:
            raise ValueError("only monotonic records carry shift labels")

    @property
    def level(self) -> str | None:
        return self.kind.split("_", 1)[1] if self.kind.startswith("robust_") else None

    def to_dict(self) -> dict:
        d = {"id": self.id, "source_id": self.source_id, "original_text": self.original_text,
             "perturbed_text": self.perturbed_text, "kind": self.kind}
        if self.shift_labels is not None:
            d["shift_labels"] = dict(self.shift_labels)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PerturbedRecord":
        labels = d.get("shift_labels")
        return cls(str(d["id"]), str(d["source_id"]), d["original_text"], d["perturbed_text"],
                   d["kind"], {k: int(v) for k, v in labels.items()} if labels is not None else None)


class Generator(Protocol):
    def robust(self, text: str, level: str, attempt: int = 0) -> str: ...

    def monotonic(self, text: str, target_class: str, direction: int) -> tuple[str, dict[str, int]]: ...


def load_synonyms(path) -> dict[str, list[str]]:
    """Synonym table: JSON object of word -> list of alternatives, or a list of groups."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return synonym_table(data)


def synonym_table(data) -> dict[str, list[str]]:
    table: dict[str, list[str]] = {}
    if isinstance(data, dict):
        groups = data.get("groups")
        if groups is None:
            return {normalize(k): list(vs) for k, vs in data.items()}
        data = groups
    for group in data:
        for w in group:
            table.setdefault(normalize(w), []).extend(x for x in group if x != w)
    return table


def _match_case(src: str, repl: str) -> str:
    if src[:1].isupper() and repl[:1].islower():
        return repl[:1].upper() + repl[1:]
    return repl


def _splice(text: str, edits) -> str:
    for a, b, repl in sorted(edits, reverse=True):
        text = text[:a] + _match_case(text[a:b], repl) + text[b:]
    return text


def _tail_punct(text: str) -> str:
    s = text.rstrip()
    return s[-1] if s and s[-1] in ".!?。！？" else ""


class LexiconPerturber:
    """Deterministic rewrites under a seed.

    low     1-2 synonym swaps
    medium  clause rotation plus swaps of half the candidates, at least 3
            (all of them if fewer)
    high    a summarising lead-in, then each clause re-rendered from a
            template around its sentiment phrases with entries and modifiers
            paraphrased; keywordless clauses are dropped

    Monotonic shifts insert an intensifier (+1) or diminisher (-1) before a
    sentiment word chosen so that the shift provably moves only the target
    class under the lexicon.
    """

    def __init__(self, lexicon: Lexicon, synonyms: dict[str, list[str]], classes: ClassSet,
                 seed: int = 0, intensifier=("very", "非常"), diminisher=("slightly", "有点")):
        self.lexicon = lexicon
        self.synonyms = synonyms
        self.classes = classes
        self.seed = seed
        self.intensifier = intensifier
        self.diminisher = diminisher
        for w in (*intensifier, *diminisher):
            if normalize(w) not in lexicon.modifiers:
                raise ValueError(f"shift word {w!r} is not a lexicon modifier")
        if any(lexicon.modifiers[normalize(w)] <= 1.0 for w in intensifier):
            raise ValueError("intensifier factors must exceed 1")
        if any(lexicon.modifiers[normalize(w)] >= 1.0 for w in diminisher):
            raise ValueError("diminisher factors must be below 1")

    def _rng(self, *parts) -> random.Random:
        return random.Random("|".join(str(p) for p in (self.seed, *parts)))

    def _swap_candidates(self, text):
        return [(a, b, key) for a, b, key in find_phrases(text, self.synonyms) if self.synonyms[key]]

    def _swaps(self, text, k, rng):
        cands = self._swap_candidates(text)
        chosen = rng.sample(cands, min(k, len(cands)))
        return _splice(text, [(a, b, rng.choice(self.synonyms[key])) for a, b, key in chosen])

    def robust(self, text: str, level: str, attempt: int = 0) -> str:
        rng = self._rng(level, attempt, text)
        if level == "low":
            if not self._swap_candidates(text):
                raise NoSwapCandidates(f"no synonym-table word in {text!r}")
            return self._swaps(text, rng.choice((1, 2)), rng)
        if level == "medium":
            n = len(self._swap_candidates(text))
            return self._rotate(self._swaps(text, max(3, (n + 1) // 2), rng))
        if level == "high":
            return self._paraphrase(text, rng)
        raise ValueError(f"unknown level {level!r}")

    def _rotate(self, text: str) -> str:
        spans = clause_spans(text)
        if len(spans) < 2:
            return text
        parts = [text[a:b] for a, b in spans]
        first = parts[0]
        if first[:1].isupper() and not first.startswith("I "):
            parts[0] = first[:1].lower() + first[1:]
        order = parts[1:] + parts[:1]
        sep = "，" if is_cjk(order[0][:1]) else ", "
        out = sep.join(order)
        return out[:1].upper() + out[1:] + _tail_punct(text)

    def _paraphrase(self, text: str, rng) -> str:
        cjk = any(is_cjk(t.text) for t in tokenize(text))
        rendered = []
        for a, b in clause_spans(text):
            clause = text[a:b]
            hits = entry_hits(clause, self.classes, self.lexicon)
            if not hits:
                continue
            phrases = []
            for h in hits:
                s, e = h.span()
                acting = [u for u in h.window if u.kind in ("modifier", "negator") and u.start >= s]
                edits = [(u.start - s, u.end - s, rng.choice(self.synonyms[u.key]))
                         for u in (*acting, h.unit) if self.synonyms.get(u.key)]
                phrase = _splice(clause[s:e], edits)
                phrases.append(phrase if cjk else phrase.lower())
            mk = leading_marker(clause)
            if cjk:
                rendered.append((mk or "") + "感觉" + "和".join(phrases))
                continue
            lead = clause[:hits[0].span()[0]].strip().lower()
            if lead == "i" or (mk and lead == f"{mk} i"):
                body = "I " + " and ".join(phrases) + " it"
            else:
                body = "it felt " + " and ".join(phrases)
            rendered.append(f"{mk} {body}" if mk else body)
        if not rendered:
            return ("换句话说，" if cjk else "In other words, ") + self._swaps(text, 99, rng)
        if cjk:
            return "总之，" + "，".join(rendered) + "。"
        return "In short, " + ", ".join(rendered) + "."

    def monotonic(self, text: str, target_class: str, direction: int) -> tuple[str, dict[str, int]]:
        t = self.classes.index(target_class)
        hits = entry_hits(text, self.classes, self.lexicon)
        if not hits:
            raise NoSentimentToken(f"no sentiment-bearing token in {text!r}")
        us = units(tokenize(text), self.lexicon)
        top = max(h.degrees[t] for h in hits)
        n_top = sum(1 for h in hits if h.degrees[t] == top)
        eligible = []
        for h in hits:
            nxt = us[h.index + 1] if h.index + 1 < len(us) else None
            if not h.bare or h.degrees[t] <= 0.0 or h.degrees[t] != top:
                continue
            if any(v > 0.0 for c, v in enumerate(h.degrees) if c != t):
                continue
            if nxt is not None and nxt.clause == h.unit.clause and nxt.kind == "entry":
                continue
            if direction > 0 and h.degrees[t] >= 1.0:
                continue
            if direction < 0 and n_top > 1:
                continue
            eligible.append(h)
        if not eligible:
            raise NoSentimentToken(f"no token in {text!r} can shift {target_class!r} cleanly")
        h = eligible[0]
        cjk = is_cjk(h.unit.key[:1])
        word = (self.intensifier if direction > 0 else self.diminisher)[1 if cjk else 0]
        a = h.unit.start
        original = text[a:h.unit.end]
        if cjk:
            out = text[:a] + word + text[a:]
        elif original[:1].isupper() and not original.isupper():
            out = text[:a] + word.capitalize() + " " + original[:1].lower() + text[a + 1:]
        else:
            out = text[:a] + word + " " + text[a:]
        labels = {c: 0 for c in self.classes.names}
        labels[target_class] = direction
        return out, labels


class LlmPerturber:
    """Perturbations written by a chat model reached through an :class:`HttpBackend`."""

    ROBUST = {
        "low": "Replace one or two words with simple synonyms.",
        "medium": "Restructure the sentence and replace several words.",
        "high": "Rewrite the whole sentence with a different structure.",
    }

    def __init__(self, backend, classes: ClassSet):
        self.backend = backend
        self.classes = classes

    def _ask(self, instruction: str, text: str) -> str:
        messages = [
            {"role": "system", "content": "You rewrite short texts for robustness testing. "
                                          "Answer with a single JSON object and nothing else."},
            {"role": "user", "content": f"{instruction}\n<text>\n{text}\n</text>\n"
                                        'Reply as {"text": "..."}'},
        ]
        obj = extract_json_object(self.backend.complete(messages))
        out = obj.get("text")
        if not isinstance(out, str):
            raise MalformedResponse("perturbation reply lacks a text field")
        return out.strip()

    def robust(self, text: str, level: str, attempt: int = 0) -> str:
        return self._ask(self.ROBUST[level] + " Keep the sentiment and meaning unchanged.", text)

    def monotonic(self, text: str, target_class: str, direction: int) -> tuple[str, dict[str, int]]:
        how = "more strongly" if direction > 0 else "more weakly"
        out = self._ask(f"Make the text express {target_class} sentiment {how}, by replacing "
                        f"sentiment words or adding adverbial modifiers. Change nothing else.", text)
        labels = {c: 0 for c in self.classes.names}
        labels[target_class] = direction
        return out, labels


def perturb_robust(text: str, level: str, generator: Generator, retries: int = 3,
                   source_id: str = "", record_id: str | None = None) -> PerturbedRecord:
    """Sentiment-preserving rewrite at ``level``; an unchanged rewrite is retried then rejected."""
    if not text.strip():
        raise ValueError("text must be non-empty")
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    last = "generator returned the input unchanged"
    for attempt in range(retries):
        try:
            out = generator.robust(text, level, attempt)
        except (MalformedResponse, TransportError) as e:
            last = str(e)
            continue
        if out.strip() and normalize(out) != normalize(text):
            return PerturbedRecord(record_id or f"{source_id}:robust_{level}", source_id,
                                   text, out, f"robust_{level}")
    raise GenerationFailed(f"{level} perturbation failed after {retries} attempts: {last}")


def perturb_monotonic(text: str, target_class: str, direction: int, generator: Generator,
                      source_id: str = "", record_id: str | None = None) -> PerturbedRecord:
    if direction not in (-1, 1):
        raise ValueError("direction must be -1 or +1; 0 is not a generation target")
    out, labels = generator.monotonic(text, target_class, direction)
    if normalize(out) == normalize(text):
        raise GenerationFailed("monotonic perturbation left the text unchanged")
    sign = "up" if direction > 0 else "down"
    return PerturbedRecord(record_id or f"{source_id}:monotonic:{target_class}:{sign}",
                           source_id, text, out, "monotonic", labels)


def perturb_dataset(records, kinds, generator: Generator, classes: ClassSet,
                    per_kind: int = 1, seed: int = 0):
    """Perturb every ``{id, text}`` record for each requested kind.

    Robust kinds yield up to ``per_kind`` records per (record, level), using
    successive retry attempts for variety.  ``monotonic`` yields up to
    ``per_kind`` records per source, trying (class, direction) targets in a
    seeded order.  Returns ``(perturbed, failures)``.
    """
    out, failures = [], []
    for rec in records:
        sid, text = str(rec["id"]), rec["text"]
        for kind in kinds:
            if kind not in KINDS:
                raise ValueError(f"unknown perturbation kind {kind!r}")
            if kind == "monotonic":
                targets = [(c, d) for c in classes.polar for d in (1, -1)]
                random.Random(f"{seed}|{sid}").shuffle(targets)
                made, why = 0, []
                for c, d in targets:
                    if made >= per_kind:
                        break
                    try:
                        out.append(perturb_monotonic(text, c, d, generator, sid))
                        made += 1
                    except (NoSentimentToken, GenerationFailed, MalformedResponse, TransportError) as e:
                        why.append(str(e))
                if not made:
                    failures.append((sid, kind, "; ".join(why)))
                continue
            level = kind.removeprefix("robust_")
            seen = set()
            for n in range(per_kind):
                rid = f"{sid}:{kind}" if per_kind == 1 else f"{sid}:{kind}:{n}"
                try:
                    r = perturb_robust(text, level, _Offset(generator, n * 3), source_id=sid,
                                       record_id=rid)
                except (GenerationFailed, NoSwapCandidates) as e:
                    failures.append((sid, kind, str(e)))
                    continue
                if r.perturbed_text not in seen:
                    seen.add(r.perturbed_text)
                    out.append(r)
    return out, failures


class _Offset:
    """Shift a generator's attempt counter so repeated draws differ."""

    def __init__(self, inner, offset):
        self.inner, self.offset = inner, offset

    def robust(self, text, level, attempt=0):
        return self.inner.robust(text, level, attempt + self.offset)

    def monotonic(self, text, target_class, direction):
        return self.inner.monotonic(text, target_class, direction)


def write_records(path, records) -> None:
    from .pipeline.traces import write_jsonl
    write_jsonl(path, (r.to_dict() for r in records))


def read_records(path) -> list[PerturbedRecord]:
    from .pipeline.traces import read_jsonl
    return [PerturbedRecord.from_dict(d) for d in read_jsonl(path)]
