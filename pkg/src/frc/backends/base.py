from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Protocol

from ..fuzzy import ClassSet

KINDS = (
    "keyword_extraction",
    "keyword_membership",
    "subunit_segmentation",
    "weight_assignment",
    "cot_probabilities",
    "dp_label",
)


@dataclass(frozen=True)
class BackendConfig:
    endpoint_url: str = "http://127.0.0.1:8000"
    model_name: str = "default"
    temperature: float = 0.0
    max_retries: int = 3
    timeout: float = 60.0
    concurrency_limit: int = 4

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.concurrency_limit < 1:
            raise ValueError("concurrency_limit must be >= 1")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")

    def with_env(self) -> "BackendConfig":
        """Apply the FRC_ENDPOINT override, if set."""
        url = os.environ.get("FRC_ENDPOINT")
        if not url:
            return self
        return BackendConfig(url, self.model_name, self.temperature, self.max_retries,
                             self.timeout, self.concurrency_limit)


@dataclass(frozen=True)
class ElicitationRequest:
    """One question put to a backend.

    ``context`` carries kind-specific payload that is not the text itself;
    for ``weight_assignment`` it holds the sub-units and their local degrees.
    """

    kind: str
    text: str
    classes: ClassSet
    injected_knowledge: Any = None  # KnowledgeBundle | None
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown elicitation kind {self.kind!r}")


@dataclass(frozen=True)
class WeightResponse:
    raw: tuple[tuple[float, ...], ...]  # raw[c][j]
    notes: tuple[str, ...]              # one rationale per sub-unit


@dataclass(frozen=True)
class CotResponse:
    probabilities: tuple[float, ...]
    steps: tuple[str, ...]


class Backend(Protocol):
    backend_id: str
    deterministic: bool
    concurrency_limit: int

    def elicit(self, request: ElicitationRequest) -> Any:
        """Answer ``request`` with the parsed structure for its kind:

        keyword_extraction   -> list[str] of keyword surfaces
        keyword_membership   -> MembershipVector
        subunit_segmentation -> list[str] of sub-unit texts
        weight_assignment    -> WeightResponse
        cot_probabilities    -> CotResponse (on the simplex)
        dp_label             -> str, a class name
        """
        ...
