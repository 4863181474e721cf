from .baselines import run_cot, run_dp
from .batch import run_batch
from .frc import locate, run_frc
from .knowledge import KnowledgeBundle, build_student_prompt, extract_knowledge
from .traces import (CotTrace, DpResult, FrcTrace, fixed_clock, load_traces, read_jsonl,
                     trace_from_dict, wall_clock, write_jsonl)

__all__ = [
    "CotTrace", "DpResult", "FrcTrace", "KnowledgeBundle", "build_student_prompt",
    "extract_knowledge", "fixed_clock", "load_traces", "locate", "read_jsonl", "run_batch",
    "run_cot", "run_dp", "run_frc", "trace_from_dict", "wall_clock", "write_jsonl",
]
