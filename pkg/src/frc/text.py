"""Tokenisation and clause splitting shared by the lexicon oracle and the perturbers.

CJK characters are emitted one per token; latin words keep inner apostrophes.
Clause boundaries fall at punctuation and before discourse markers such as
"but" or "though", which is also where the oracle segments sub-units.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_CJK = "㐀-䶿一-鿿豈-﫿"
TOKEN_RE = re.compile(rf"[{_CJK}]|[^\W{_CJK}]+(?:'[^\W{_CJK}]+)*")
BOUNDARY_PUNCT = set(",.;:!?，。；：！？、")

CONTRAST_MARKERS = ("but", "however", "yet", "whereas", "但是", "可是", "不过", "但")
CONCESSIVE_MARKERS = ("though", "although", "虽然", "尽管")
MARKERS = CONTRAST_MARKERS + CONCESSIVE_MARKERS


@dataclass(frozen=True)
class Token:
    text: str  # lowercased
    start: int
    end: int
    clause: int


def is_cjk(s: str) -> bool:
    return bool(s) and all(re.match(rf"[{_CJK}]", ch) for ch in s)


def token_key(tokens) -> str:
    """Canonical lookup key for a token run: CJK runs concatenate, words join with spaces."""
    out = ""
    prev = None
    for t in tokens:
        t = t if isinstance(t, str) else t.text
        if out and not (is_cjk(t) and prev is not None and is_cjk(prev)):
            out += " "
        out += t
        prev = t
    return out


def normalize(s: str) -> str:
    return token_key(m.group(0).lower() for m in TOKEN_RE.finditer(s))


# markers pre-split so multi-character CJK markers match token runs
_MARKER_TOKENS = sorted(
    ((tuple(m.group(0).lower() for m in TOKEN_RE.finditer(mk)), mk) for mk in MARKERS),
    key=lambda p: -len(p[0]),
)


def marker_at(words: list[str], i: int) -> str | None:
    for toks, mk in _MARKER_TOKENS:
        if tuple(words[i:i + len(toks)]) == toks:
            return mk
    return None


def tokenize(text: str) -> list[Token]:
    matches = list(TOKEN_RE.finditer(text))
    words = [m.group(0).lower() for m in matches]
    tokens = []
    clause = 0
    prev_end = 0
    for i, m in enumerate(matches):
        gap = text[prev_end:m.start()]
        if tokens and (any(ch in BOUNDARY_PUNCT for ch in gap) or marker_at(words, i)):
            clause += 1
        tokens.append(Token(words[i], m.start(), m.end(), clause))
        prev_end = m.end()
    return tokens


def clause_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of the clauses of ``text``, in order."""
    spans: dict[int, list[int]] = {}
    for t in tokenize(text):
        if t.clause in spans:
            spans[t.clause][1] = t.end
        else:
            spans[t.clause] = [t.start, t.end]
    return [tuple(v) for _, v in sorted(spans.items())]


def clauses(text: str) -> list[str]:
    return [text[a:b] for a, b in clause_spans(text)]


def leading_marker(clause_text: str) -> str | None:
    words = [t.text for t in tokenize(clause_text)]
    return marker_at(words, 0) if words else None


def find_phrases(text: str, phrases) -> list[tuple[int, int, str]]:
    """Non-overlapping token-aligned occurrences of ``phrases`` in ``text``.

    Matching is case-insensitive on token sequences; longer phrases win.
    Returns ``(start, end, normalized_phrase)`` sorted by start.
    """
    toks = tokenize(text)
    words = [t.text for t in toks]
    keyed = {}
    for p in phrases:
        key = tuple(t.text for t in tokenize(p))
        if key:
            keyed[key] = normalize(p)
    taken = [False] * len(toks)
    found = []
    for key in sorted(keyed, key=lambda k: (-len(k), k)):
        n = len(key)
        for i in range(len(words) - n + 1):
            if tuple(words[i:i + n]) == key and not any(taken[i:i + n]):
                for j in range(i, i + n):
                    taken[j] = True
                found.append((toks[i].start, toks[i + n - 1].end, keyed[key]))
    return sorted(found)
