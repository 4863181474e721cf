"""Defensive parsing of model output into the per-kind response schemas."""

from __future__ import annotations

import json
import math

from ..errors import MalformedResponse, SchemaViolation, SimplexViolation
from ..fuzzy import ClassSet, MembershipVector, clamp01
from .base import CotResponse, WeightResponse

SIMPLEX_TOL = 1e-6
MAX_SIMPLEX_DRIFT = 0.05

_decoder = json.JSONDecoder()


def extract_json_object(text: str) -> dict:
    """Return the first well-formed JSON object embedded in ``text``."""
    if not isinstance(text, str):
        raise MalformedResponse("response content is not text", raw=text)
    pos = text.find("{")
    while pos != -1:
        try:
            obj, _ = _decoder.raw_decode(text, pos)
        except json.JSONDecodeError:
            pos = text.find("{", pos + 1)
            continue
        if isinstance(obj, dict):
            return obj
        pos = text.find("{", pos + 1)
    raise MalformedResponse("no JSON object found in response", raw=text)


def _number(value, what):
    if isinstance(value, bool):
        raise SchemaViolation(f"{what} is a boolean")
    if isinstance(value, str):
        try:
            value = float(value.strip().rstrip("%"))
        except ValueError:
            raise MalformedResponse(f"{what} is not a number: {value!r}") from None
    if not isinstance(value, (int, float)):
        raise MalformedResponse(f"{what} is not a number: {value!r}")
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise SchemaViolation(f"{what} is not finite")
    return value


def _class_mapping(obj, classes: ClassSet, what: str) -> list[float]:
    if not isinstance(obj, dict):
        raise MalformedResponse(f"{what} must be an object keyed by class name")
    lowered = {str(k).strip().lower(): v for k, v in obj.items()}
    out = []
    for name in classes.names:
        if name not in lowered:
            raise MalformedResponse(f"{what} lacks class {name!r}")
        out.append(_number(lowered[name], f"{what}[{name}]"))
    return out


def _string_list(obj, key) -> list[str]:
    items = obj.get(key)
    if not isinstance(items, list) or not all(isinstance(s, str) for s in items):
        raise MalformedResponse(f"expected {key!r} to be a list of strings")
    return [s for s in items if s.strip()]


def renormalize_simplex(values, max_drift: float = MAX_SIMPLEX_DRIFT) -> tuple[float, ...]:
    """Rescale a near-probability vector onto the simplex.

    Raises :class:`SimplexViolation` when the raw sum is further than
    ``max_drift`` from one.
    """
    vals = [clamp01(v) for v in values]
    total = math.fsum(vals)
    if abs(total - 1.0) > max_drift or total <= 0.0:
        raise SimplexViolation(f"probabilities sum to {total:.4f}, beyond drift {max_drift}")
    return tuple(v / total for v in vals)


def parse_keywords(obj) -> list[str]:
    return _string_list(obj, "keywords")


def parse_membership(obj, classes: ClassSet) -> MembershipVector:
    vals = _class_mapping(obj.get("memberships"), classes, "memberships")
    return MembershipVector(tuple(clamp01(v) for v in vals))


def parse_subunits(obj) -> list[str]:
    out = _string_list(obj, "subunits")
    if not out:
        raise MalformedResponse("no sub-units returned")
    return out


def parse_weights(obj, classes: ClassSet, m: int) -> WeightResponse:
    rows = obj.get("weights")
    if not isinstance(rows, list) or len(rows) != m:
        raise MalformedResponse(f"expected a list of {m} weight rows")
    raw = [[0.0] * m for _ in classes.names]
    notes = []
    for j, row in enumerate(rows):
        if not isinstance(row, dict):
            raise MalformedResponse(f"weight row {j} is not an object")
        scores = _class_mapping(row.get("scores"), classes, f"weights[{j}].scores")
        for c, s in enumerate(scores):
            if s < 0:
                raise SchemaViolation(f"negative importance score {s} in row {j}")
            raw[c][j] = s
        notes.append(str(row.get("rationale", "")).strip())
    return WeightResponse(tuple(tuple(r) for r in raw), tuple(notes))


def parse_cot(obj, classes: ClassSet) -> CotResponse:
    vals = _class_mapping(obj.get("probabilities"), classes, "probabilities")
    if any(v < 0 for v in vals):
        raise SchemaViolation("negative probability")
    steps = obj.get("steps", [])
    if not isinstance(steps, list):
        steps = [str(steps)]
    return CotResponse(renormalize_simplex(vals), tuple(str(s) for s in steps))


def parse_label(obj, classes: ClassSet) -> str:
    label = obj.get("label")
    if not isinstance(label, str):
        raise MalformedResponse("label missing or not a string")
    label = label.strip().lower()
    if label not in classes.names:
        raise MalformedResponse(f"label {label!r} not in {classes.names}")
    return label


def parse(kind: str, content: str, classes: ClassSet, context: dict | None = None):
    obj = extract_json_object(content)
    if kind == "keyword_extraction":
        return parse_keywords(obj)
    if kind == "keyword_membership":
        return parse_membership(obj, classes)
    if kind == "subunit_segmentation":
        return parse_subunits(obj)
    if kind == "weight_assignment":
        return parse_weights(obj, classes, len((context or {}).get("subunits", [])))
    if kind == "cot_probabilities":
        return parse_cot(obj, classes)
    if kind == "dp_label":
        return parse_label(obj, classes)
    raise ValueError(kind)
