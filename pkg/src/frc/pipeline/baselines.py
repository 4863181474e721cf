"""Chain-of-thought and direct-prompting baselines."""

from __future__ import annotations

from ..backends.base import ElicitationRequest
from ..backends.parsing import renormalize_simplex
from ..errors import DegenerateInput, MalformedResponse
from ..fuzzy import OTHER, ClassSet
from .traces import CotTrace, DpResult, wall_clock


def run_cot(text: str, classes: ClassSet, backend, clock=wall_clock, record_id=None) -> CotTrace:
    """Probabilities on the class simplex, renormalised when within 0.05 of it."""
    if not text or not text.strip():
        raise DegenerateInput("empty text")
    started = clock()
    reply = backend.elicit(ElicitationRequest("cot_probabilities", text, classes))
    probs = renormalize_simplex(reply.probabilities)
    return CotTrace(text, classes, tuple(reply.steps), probs, backend.backend_id,
                    {"started": started, "finished": clock()}, record_id)


def run_dp(text: str, classes: ClassSet, backend, clock=wall_clock, record_id=None) -> DpResult:
    """One label from a single elicitation; unmatched labels fall back to "other" if allowed."""
    if not text or not text.strip():
        raise DegenerateInput("empty text")
    started = clock()
    try:
        label = backend.elicit(ElicitationRequest("dp_label", text, classes))
    except MalformedResponse:
        if not classes.includes_other:
            raise
        label = OTHER
    label = str(label).strip().lower()
    if label not in classes:
        if not classes.includes_other:
            raise MalformedResponse(f"label {label!r} not in {classes.names}")
        label = OTHER
    return DpResult(text, classes, label, backend.backend_id,
                    {"started": started, "finished": clock()}, record_id)
