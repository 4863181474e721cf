"""Offline backend answering every elicitation kind from a lexicon."""

from __future__ import annotations

import math
import threading
from collections import Counter

from ..errors import MalformedResponse
from ..fuzzy import OTHER
from ..text import CONCESSIVE_MARKERS, CONTRAST_MARKERS, clauses, find_phrases, leading_marker
from .base import CotResponse, ElicitationRequest, WeightResponse
from .lexicon import Lexicon, entry_hits, lexicon_membership

EVIDENCE_WEIGHT = 1.0
BACKGROUND_WEIGHT = 0.01
CONTRAST_BOOST = 2.0
CONCESSIVE_DAMP = 0.5


def marker_factor(subunit_text: str) -> tuple[float, str]:
    mk = leading_marker(subunit_text)
    if mk in CONTRAST_MARKERS:
        return CONTRAST_BOOST, f"opens with contrast marker {mk!r}, x{CONTRAST_BOOST}"
    if mk in CONCESSIVE_MARKERS:
        return CONCESSIVE_DAMP, f"opens with concessive marker {mk!r}, x{CONCESSIVE_DAMP}"
    return 1.0, ""


class LexiconBackend:
    """Deterministic stand-in for a model.

    Keyword degrees come from :func:`lexicon_membership`; sub-units are
    clauses; a sub-unit's raw weight for a class is 1 when it carries evidence
    for that class and 0.01 otherwise, scaled up after a contrast marker and
    down after a concessive one.  Injected keyword knowledge is treated as
    authoritative: its surfaces are extracted wherever they occur.
    """

    deterministic = True
    concurrency_limit = 8

    def __init__(self, lexicon: Lexicon, name: str = "lexicon"):
        self.lexicon = lexicon
        self.backend_id = f"lexicon:{name}"
        self.stats = Counter()
        self._lock = threading.Lock()

    def elicit(self, request: ElicitationRequest):
        with self._lock:
            self.stats[request.kind] += 1
        return getattr(self, "_" + request.kind)(request)

    def _keyword_extraction(self, req):
        text = req.text
        spans = []
        bundle = req.injected_knowledge
        if bundle is not None and bundle.keyword_knowledge:
            spans = [(a, b) for a, b, _ in find_phrases(text, [s for s, _ in bundle.keyword_knowledge])]
        for h in entry_hits(text, req.classes, self.lexicon):
            a, b = h.span()
            if not any(a < y and x < b for x, y in spans):
                spans.append((a, b))
        return [text[a:b] for a, b in sorted(spans)]

    def _keyword_membership(self, req):
        return lexicon_membership(req.text, req.classes, self.lexicon)

    def _subunit_segmentation(self, req):
        return clauses(req.text) or [req.text.strip()]

    def _weight_assignment(self, req):
        subunits = req.context["subunits"]
        names = req.classes.names
        raw = [[0.0] * len(subunits) for _ in names]
        notes = []
        for j, su in enumerate(subunits):
            factor, why = marker_factor(su["text"])
            carried = []
            for c, n in enumerate(names):
                evident = su["memberships"][n] > 0.0
                raw[c][j] = (EVIDENCE_WEIGHT if evident else BACKGROUND_WEIGHT) * factor
                if evident:
                    carried.append(n)
            note = f"evidence for {', '.join(carried)}" if carried else "no sentiment evidence"
            notes.append(f"{note}; {why}" if why else note)
        return WeightResponse(tuple(tuple(r) for r in raw), tuple(notes))

    def _polar_scores(self, req) -> list[float]:
        mu = lexicon_membership(req.text, req.classes, self.lexicon)
        names = req.classes.names
        scores = list(mu)
        if req.classes.includes_other:
            k = names.index(OTHER)
            scores[k] = 1.0 - max(v for i, v in enumerate(mu) if i != k)
        return scores

    def _cot_probabilities(self, req):
        scores = self._polar_scores(req)
        total = math.fsum(scores)
        if total <= 0.0:
            probs = tuple(1.0 / len(scores) for _ in scores)
        else:
            probs = tuple(s / total for s in scores)
        found = [req.text[slice(*h.span())] for h in entry_hits(req.text, req.classes, self.lexicon)]
        steps = (
            f"keywords: {', '.join(found) or 'none'}",
            "scores: " + ", ".join(f"{n}={s:.3f}" for n, s in zip(req.classes.names, scores)),
            "normalised scores into probabilities",
        )
        return CotResponse(probs, steps)

    def _dp_label(self, req):
        names = req.classes.names
        mu = lexicon_membership(req.text, req.classes, self.lexicon)
        polar = [(mu[i], -i, n) for i, n in enumerate(names) if n in req.classes.polar]
        best = max(polar)
        if best[0] <= 0.0:
            if req.classes.includes_other:
                return OTHER
            raise MalformedResponse(f"no class evidence for {req.text!r}")
        return best[2]

