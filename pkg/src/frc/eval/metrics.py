"""Robustness, monotonicity, F1, clear/ambiguous split and the stability estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from ..errors import (EmptyPairSet, LengthMismatch, MissingShiftLabels, WrongClassCount,
                      ZeroDistancePairOnly)
from ..fuzzy import OTHER, TOL
from ..text import tokenize

NEUTRAL = "neutral"
AMBIGUITY_THRESHOLD = 0.3
DEAD_BAND = 1e-9


@dataclass(frozen=True)
class EvalPair:
    """Degrees (or CoT probabilities) of an original text and its perturbation, by class name."""

    original: Mapping[str, float]
    perturbed: Mapping[str, float]
    shift_labels: Mapping[str, int] | None = None

    def __post_init__(self):
        if set(self.original) != set(self.perturbed):
            raise ValueError("original and perturbed vectors cover different classes")
        if self.shift_labels is not None:
            bad = {k: v for k, v in self.shift_labels.items() if v not in (-1, 0, 1)}
            if bad:
                raise ValueError(f"shift labels must be -1, 0 or +1: {bad}")

    def delta(self, name: str) -> float:
        return self.perturbed[name] - self.original[name]


@dataclass(frozen=True)
class StabilityEstimate:
    k_hat: float
    per_pair_ratios: tuple[float, ...]
    distance_kind: str


def robustness_score(pairs: Sequence[EvalPair], class_name: str) -> float:
    """One minus the mean absolute change of one class's degree."""
    if not pairs:
        raise EmptyPairSet("robustness score needs at least one pair")
    dev = math.fsum(abs(p.perturbed[class_name] - p.original[class_name]) for p in pairs)
    return 1.0 - dev / len(pairs)


def sgn(x: float, band: float = DEAD_BAND) -> int:
    if abs(x) < band:
        return 0
    return 1 if x > 0 else -1


def monotonicity_score(pairs: Sequence[EvalPair], class_name: str) -> float:
    """Fraction of pairs whose change direction matches the shift label for the class."""
    if not pairs:
        raise EmptyPairSet("monotonicity score needs at least one pair")
    hits = 0
    for p in pairs:
        if p.shift_labels is None or class_name not in p.shift_labels:
            raise MissingShiftLabels(f"pair lacks a shift label for {class_name!r}")
        hits += sgn(p.delta(class_name)) == p.shift_labels[class_name]
    return hits / len(pairs)


def classify_and_split(memberships: Mapping[str, float],
                       threshold: float = AMBIGUITY_THRESHOLD) -> tuple[str, str]:
    """Label by the higher polar degree (equal means neutral) and bucket by their gap.

    The catch-all "other" class, if present, is ignored.  A gap at or below
    ``threshold`` is ambiguous.
    """
    polar = [(k, v) for k, v in memberships.items() if k != OTHER]
    if len(polar) != 2:
        raise WrongClassCount(f"need exactly two polar classes, got {[k for k, _ in polar]}")
    (a, va), (b, vb) = polar
    diff = abs(va - vb)
    if diff < TOL:
        label = NEUTRAL
    else:
        label = a if va > vb else b
    bucket = "clear" if diff - threshold > TOL else "ambiguous"
    return label, bucket


def argmax_label(values: Mapping[str, float]) -> str:
    """Highest-valued polar class, neutral on a tie."""
    return classify_and_split(values)[0]


def f1_score(predictions: Sequence[str], gold: Sequence[str], averaging: str = "macro") -> float:
    """Macro F1 over the classes present in ``gold``.

    A prediction outside the gold classes (e.g. neutral) is a false negative
    for the record's gold class and a false positive for nothing.
    """
    if averaging != "macro":
        raise ValueError(f"unsupported averaging {averaging!r}")
    if len(predictions) != len(gold):
        raise LengthMismatch(f"{len(predictions)} predictions for {len(gold)} gold labels")
    if not gold:
        raise ValueError("f1 needs at least one record")
    scores = []
    for c in sorted(set(gold)):
        tp = sum(1 for p, g in zip(predictions, gold) if p == c and g == c)
        fp = sum(1 for p, g in zip(predictions, gold) if p == c and g != c)
        fn = sum(1 for p, g in zip(predictions, gold) if p != c and g == c)
        denom = 2 * tp + fp + fn
        scores.append(2 * tp / denom if denom else 0.0)
    return math.fsum(scores) / len(scores)


def levenshtein(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def token_edit_distance(x: str, y: str) -> float:
    """Levenshtein distance over lowercase tokens, divided by the longer token count."""
    a = [t.text for t in tokenize(x)]
    b = [t.text for t in tokenize(y)]
    n = max(len(a), len(b))
    return levenshtein(a, b) / n if n else 0.0


def char_edit_distance(x: str, y: str) -> float:
    a, b = x.lower(), y.lower()
    n = max(len(a), len(b))
    return levenshtein(a, b) / n if n else 0.0


DISTANCES: dict[str, Callable[[str, str], float]] = {
    "token_edit": token_edit_distance,
    "char_edit": char_edit_distance,
}


def estimate_stability(pairs, distance_kind: str | Callable = "token_edit",
                       class_name: str | None = None) -> StabilityEstimate:
    """Largest observed ratio of degree change to text distance.

    ``pairs`` holds ``(original_text, perturbed_text, EvalPair)`` triples.  The
    degree change is taken for ``class_name``, or the largest over classes
    when it is None.  Pairs at distance zero are skipped.
    """
    if callable(distance_kind):
        dist, kind = distance_kind, getattr(distance_kind, "__name__", "custom")
    else:
        dist, kind = DISTANCES[distance_kind], distance_kind
    ratios = []
    for x, y, pair in pairs:
        d = dist(x, y)
        if d <= 0.0:
            continue
        names = [class_name] if class_name is not None else list(pair.original)
        change = max(abs(pair.delta(n)) for n in names)
        ratios.append(change / d)
    if not ratios:
        raise ZeroDistancePairOnly("every pair has zero distance")
    return StabilityEstimate(max(ratios), tuple(ratios), kind)
