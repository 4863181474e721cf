"""Prompt rendering from the versioned template assets in ``frc/prompts``."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from string import Template

from .base import ElicitationRequest

SYSTEM_FOR_KIND = {
    "keyword_extraction": "frc_system",
    "keyword_membership": "frc_system",
    "subunit_segmentation": "frc_system",
    "weight_assignment": "frc_system",
    "cot_probabilities": "cot_system",
    "dp_label": "dp_system",
}


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    raw = resources.files("frc").joinpath("prompts", f"{name}.txt").read_text(encoding="utf-8")
    return "".join(line for line in raw.splitlines(keepends=True) if not line.startswith("##"))


def template_version(name: str) -> int:
    raw = resources.files("frc").joinpath("prompts", f"{name}.txt").read_text(encoding="utf-8")
    first = raw.splitlines()[0]
    return int(first.split()[-1])


def _degrees(vector, classes) -> str:
    return ", ".join(f"{n}={v!r}" for n, v in zip(classes.names, vector))


def render_knowledge(bundle, classes) -> str:
    """Knowledge blocks, keywords first then sub-units; empty parts render nothing."""
    if bundle is None:
        return ""
    out = []
    if bundle.keyword_knowledge:
        out.append("<keyword_knowledge>\n"
                   "Keyword degrees from a reference model; reuse them for matching keywords:\n")
        for surface, vec in bundle.keyword_knowledge:
            out.append(f"- {json.dumps(surface, ensure_ascii=False)}: {_degrees(vec, classes)}\n")
        out.append("</keyword_knowledge>\n")
    if bundle.subunit_knowledge:
        out.append("<subunit_knowledge>\n"
                   "Sub-unit degrees from a reference model; reuse them for matching sub-units:\n")
        for span, vec in bundle.subunit_knowledge:
            out.append(f"- {json.dumps(span, ensure_ascii=False)}: {_degrees(vec, classes)}\n")
        out.append("</subunit_knowledge>\n")
    return "".join(out)


def render_messages(request: ElicitationRequest, bundle=None) -> list[dict]:
    if bundle is None:
        bundle = request.injected_knowledge
    names = request.classes.names
    user = Template(load_template(request.kind)).substitute(
        classes=", ".join(names),
        class_slots=", ".join(f'"{n}": <degree>' for n in names),
        knowledge=render_knowledge(bundle, request.classes),
        text=request.text,
        context=json.dumps(request.context, ensure_ascii=False, sort_keys=True),
    )
    system = load_template(SYSTEM_FOR_KIND[request.kind])
    return [{"role": "system", "content": system}, {"role": "user", "content": user}]


def render_prompt(request: ElicitationRequest, bundle=None) -> str:
    return "\n".join(m["content"] for m in render_messages(request, bundle))


def repair_message(error: Exception) -> dict:
    return {"role": "user", "content": Template(load_template("repair")).substitute(error=str(error))}
