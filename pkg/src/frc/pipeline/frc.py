"""The three-stage fuzzy reasoning chain."""

from __future__ import annotations

import logging
from functools import partial

from ..backends.base import ElicitationRequest
from ..errors import AllZeroWeights, DegenerateInput
from ..fuzzy import ClassSet, Keyword, SubUnit, WeightMatrix, fuse_global, normalize_weights
from ..text import normalize, tokenize
from .traces import FrcTrace, wall_clock

log = logging.getLogger(__name__)


def locate(text: str, pieces) -> list[tuple[str, tuple[int, int]]]:
    """Find each piece in ``text`` (case-insensitively), preferring in-order matches.

    Pieces that cannot be placed without overlapping an earlier match are dropped.
    """
    hay = text.lower()
    taken: list[tuple[int, int]] = []
    out = []
    cursor = 0

    def search(needle, start):
        pos = hay.find(needle, start)
        while pos != -1 and any(pos < b and a < pos + len(needle) for a, b in taken):
            pos = hay.find(needle, pos + 1)
        return pos

    for piece in pieces:
        needle = piece.strip().lower()
        if not needle:
            continue
        pos = search(needle, cursor)
        if pos == -1:
            pos = search(needle, 0)
        if pos == -1:
            log.warning("dropping %r: not found in input text", piece)
            continue
        span = (pos, pos + len(needle))
        taken.append(span)
        out.append((text[span[0]:span[1]], span))
        cursor = span[1]
    return out


def _weights(raw, classes: ClassSet, m: int, notes: list[str]) -> WeightMatrix:
    rows = []
    for c, row in enumerate(raw):
        try:
            rows.append(normalize_weights([row], classes).row(0))
        except AllZeroWeights:
            notes.append(f"{classes.names[c]}: all scores were zero, weights made uniform")
            rows.append(tuple(1.0 / m for _ in range(m)))
    return WeightMatrix(tuple(rows), m)


def run_frc(text: str, classes: ClassSet, backend, injected=None, clock=wall_clock,
            record_id=None) -> FrcTrace:
    """Run keyword membership, local max-aggregation and weighted fusion on ``text``.

    With ``injected`` knowledge, keywords and sub-units whose normalised text
    matches a bundle entry take the bundle's degrees instead of asking the
    backend.
    """
    if not text or not text.strip() or not tokenize(text):
        raise DegenerateInput(f"no tokens in {text!r}")
    started = clock()
    ask = partial(ElicitationRequest, classes=classes, injected_knowledge=injected)
    kw_known = injected.keyword_index() if injected is not None else {}
    su_known = injected.subunit_index() if injected is not None else {}

    surfaces = backend.elicit(ask("keyword_extraction", text))
    cache = {}
    keywords = []
    for surface, span in sorted(locate(text, surfaces), key=lambda p: p[1]):
        key = normalize(surface)
        if key in kw_known:
            keywords.append(Keyword(surface, kw_known[key], span, "keyword_knowledge"))
            continue
        if key not in cache:
            cache[key] = backend.elicit(ask("keyword_membership", surface))
        keywords.append(Keyword(surface, cache[key], span))

    pieces = locate(text, backend.elicit(ask("subunit_segmentation", text)))
    if not pieces:
        a = len(text) - len(text.lstrip())
        pieces = [(text.strip(), (a, a + len(text.strip())))]
    pieces.sort(key=lambda p: p[1])

    members: list[list[Keyword]] = [[] for _ in pieces]
    unassigned = []
    for k in keywords:
        for j, (_, (a, b)) in enumerate(pieces):
            if a <= k.span[0] and k.span[1] <= b:
                members[j].append(k)
                break
        else:
            unassigned.append(k)

    all_keywords = []
    subunits = []
    for (piece, span), ks in zip(pieces, members):
        hit = su_known.get(normalize(piece))
        if hit is not None:
            ks = ks + [Keyword(piece, hit, span, "subunit_knowledge")]
        all_keywords += ks
        subunits.append(SubUnit.build(piece, ks, classes, span))
    if unassigned:
        all_keywords += unassigned
        subunits.append(SubUnit.build(" ".join(k.surface for k in unassigned), unassigned, classes))

    context = {"subunits": [{"text": s.text, "memberships": s.memberships.as_dict(classes)}
                            for s in subunits]}
    reply = backend.elicit(ask("weight_assignment", text, context=context))
    notes = list(reply.notes)
    weights = _weights(reply.raw, classes, len(subunits), notes)
    fused = fuse_global(subunits, weights, classes)
    return FrcTrace(text, classes, tuple(all_keywords), tuple(subunits), weights, tuple(notes),
                    fused, backend.backend_id, {"started": started, "finished": clock()},
                    record_id)
