from .metrics import (AMBIGUITY_THRESHOLD, DEAD_BAND, DISTANCES, NEUTRAL, EvalPair,
                      StabilityEstimate, argmax_label, char_edit_distance, classify_and_split,
                      estimate_stability, f1_score, levenshtein, monotonicity_score,
                      robustness_score, sgn, token_edit_distance)
from .report import (EvalReport, MethodReport, TransferReport, TransferRow, build_report,
                     method_report, trace_label, trace_vector)

__all__ = [
    "AMBIGUITY_THRESHOLD", "DEAD_BAND", "DISTANCES", "NEUTRAL", "EvalPair", "EvalReport",
    "MethodReport", "StabilityEstimate", "TransferReport", "TransferRow", "argmax_label",
    "build_report", "char_edit_distance", "classify_and_split", "estimate_stability",
    "f1_score", "levenshtein", "method_report", "monotonicity_score", "robustness_score",
    "sgn", "token_edit_distance", "trace_label", "trace_vector",
]
