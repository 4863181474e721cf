"""Fuzzy reasoning chains: membership elicitation, local max-aggregation and
weighted fusion over language-model backends, with robustness, monotonicity
and F1 evaluation against chain-of-thought and direct-prompting baselines."""

from .backends import BackendConfig, ElicitationRequest, HttpBackend, Lexicon, LexiconBackend
from .fuzzy import (BINARY, ClassSet, Keyword, MembershipVector, SentimentClass, SubUnit,
                    WeightMatrix, aggregate_local, fuse_global, normalize_weights)
from .pipeline import (CotTrace, DpResult, FrcTrace, KnowledgeBundle, build_student_prompt,
                       extract_knowledge, run_cot, run_dp, run_frc)

__version__ = "0.1.0"

__all__ = [
    "BINARY", "BackendConfig", "ClassSet", "CotTrace", "DpResult", "ElicitationRequest",
    "FrcTrace", "HttpBackend", "Keyword", "KnowledgeBundle", "Lexicon", "LexiconBackend",
    "MembershipVector", "SentimentClass", "SubUnit", "WeightMatrix", "aggregate_local",
    "build_student_prompt", "extract_knowledge", "fuse_global", "normalize_weights",
    "run_cot", "run_dp", "run_frc",
]
