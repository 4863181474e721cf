"""Fuzzy aggregation core: keyword max-aggregation and class-specific weighted fusion.

Everything here is pure and deterministic.  Membership vectors are indexed by
the order of a :class:`ClassSet` and are *not* probability vectors: the values
for different classes are independent and need not sum to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import AllZeroWeights, DimensionMismatch, EmptyKeywordSet

TOL = 1e-9
OTHER = "other"


def clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else float(x)


@dataclass(frozen=True)
class SentimentClass:
    name: str

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ValueError("class name must be non-empty")


@dataclass(frozen=True)
class ClassSet:
    """Ordered set of sentiment classes; the order fixes vector layout."""

    classes: tuple[SentimentClass, ...]
    includes_other: bool = False

    def __post_init__(self):
        names = [c.name for c in self.classes]
        if len(names) < 2:
            raise ValueError("a class set needs at least 2 classes")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate class names in {names}")
        if self.includes_other and OTHER not in names:
            raise ValueError("includes_other requires a class named 'other'")

    @classmethod
    def of(cls, *names: str, includes_other: bool = False) -> "ClassSet":
        names = list(names)
        if includes_other and OTHER not in names:
            names.append(OTHER)
        return cls(tuple(SentimentClass(n) for n in names), includes_other)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.classes)

    @property
    def polar(self) -> tuple[str, ...]:
        """Class names excluding the catch-all class."""
        return tuple(n for n in self.names if not (self.includes_other and n == OTHER))

    def index(self, name: str) -> int:
        return self.names.index(name)

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.names


BINARY = ClassSet.of("positive", "negative")


@dataclass(frozen=True)
class MembershipVector:
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        for v in vals:
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"membership degree {v!r} outside [0, 1]")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, n: int) -> "MembershipVector":
        return cls((0.0,) * n)

    @classmethod
    def from_mapping(cls, mapping, classes: ClassSet) -> "MembershipVector":
        return cls(tuple(mapping[name] for name in classes.names))

    def as_dict(self, classes: ClassSet) -> dict[str, float]:
        self.check(classes)
        return dict(zip(classes.names, self.values))

    def of(self, name: str, classes: ClassSet) -> float:
        return self.values[classes.index(name)]

    def check(self, classes: ClassSet) -> None:
        if len(self.values) != len(classes):
            raise DimensionMismatch(
                f"vector has {len(self.values)} entries, class set has {len(classes)}")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class Keyword:
    """A sentiment-bearing span and its per-class degrees.

    ``span`` holds character offsets into the analysed text when known.
    ``origin`` records where the degrees came from: ``"elicited"`` from the
    backend, ``"keyword_knowledge"`` or ``"subunit_knowledge"`` when reused
    from an injected knowledge bundle.
    """

    surface: str
    memberships: MembershipVector
    span: tuple[int, int] | None = None
    origin: str = "elicited"

    def __post_init__(self):
        if not self.surface.strip():
            raise ValueError("keyword surface must be non-empty")


@dataclass(frozen=True)
class SubUnit:
    text: str
    keywords: tuple[Keyword, ...]
    memberships: MembershipVector
    span: tuple[int, int] | None = None

    @classmethod
    def build(cls, text: str, keywords: Sequence[Keyword], classes: ClassSet,
              span=None) -> "SubUnit":
        """Sub-unit whose degrees follow from its keywords.

        A keywordless sub-unit carries the all-zeros vector.
        """
        keywords = tuple(keywords)
        if keywords:
            mu = aggregate_local(keywords, classes)
        else:
            mu = MembershipVector.zeros(len(classes))
        return cls(text, keywords, mu, span)


@dataclass(frozen=True)
class WeightMatrix:
    """Fusion weights, ``weights[c][j]`` for class index c and sub-unit j."""

    weights: tuple[tuple[float, ...], ...]
    m: int = field(default=-1)

    def __post_init__(self):
        rows = tuple(tuple(float(w) for w in row) for row in self.weights)
        object.__setattr__(self, "weights", rows)
        m = len(rows[0]) if rows else 0
        if self.m == -1:
            object.__setattr__(self, "m", m)
        for c, row in enumerate(rows):
            if len(row) != self.m:
                raise DimensionMismatch(f"class row {c} has {len(row)} weights, expected {self.m}")
            if any(w < 0.0 or math.isnan(w) for w in row):
                raise ValueError(f"negative weight in class row {c}")
            if abs(math.fsum(row) - 1.0) > TOL:
                raise ValueError(f"class row {c} sums to {math.fsum(row)!r}, not 1")

    def row(self, c: int) -> tuple[float, ...]:
        return self.weights[c]


def aggregate_local(keywords: Sequence[Keyword], classes: ClassSet) -> MembershipVector:
    """Per-class maximum over the keyword degrees of one sub-unit."""
    if not keywords:
        raise EmptyKeywordSet("cannot aggregate an empty keyword set")
    n = len(classes)
    for k in keywords:
        if len(k.memberships) != n:
            raise DimensionMismatch(
                f"keyword {k.surface!r} has {len(k.memberships)} degrees, class set has {n}")
    return MembershipVector(tuple(max(k.memberships[c] for k in keywords) for c in range(n)))


def normalize_weights(raw: Sequence[Sequence[float]], classes: ClassSet | None = None) -> WeightMatrix:
    """Scale each class's raw sub-unit weights to sum to one.

    ``raw`` is indexed ``raw[c][j]``.  Raises :class:`AllZeroWeights` for a
    class with no positive weight.
    """
    rows = []
    m = len(raw[0]) if raw else 0
    for c, row in enumerate(raw):
        row = [float(w) for w in row]
        if len(row) != m:
            raise DimensionMismatch("raw weight rows differ in length")
        if any(w < 0.0 or math.isnan(w) for w in row):
            raise ValueError(f"raw weights must be nonnegative, got {row}")
        total = math.fsum(row)
        if total <= 0.0:
            name = classes.names[c] if classes is not None else c
            raise AllZeroWeights(name)
        rows.append(tuple(w / total for w in row))
    return WeightMatrix(tuple(rows), m)


def fuse_global(subunits: Sequence[SubUnit], weights: WeightMatrix,
                classes: ClassSet | None = None) -> MembershipVector:
    """Per class, the weighted sum of sub-unit degrees using that class's weights."""
    if weights.m != len(subunits):
        raise DimensionMismatch(f"{weights.m} weight columns for {len(subunits)} sub-units")
    n = len(weights.weights)
    if classes is not None and n != len(classes):
        raise DimensionMismatch(f"{n} weight rows for {len(classes)} classes")
    for s in subunits:
        if len(s.memberships) != n:
            raise DimensionMismatch(f"sub-unit {s.text!r} has {len(s.memberships)} degrees")
    out = []
    for c in range(n):
        row = weights.weights[c]
        out.append(clamp01(math.fsum(a * s.memberships[c] for a, s in zip(row, subunits))))
    return MembershipVector(tuple(out))
