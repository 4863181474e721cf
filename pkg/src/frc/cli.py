"""``frc`` command line: analyze, perturb, evaluate, transfer.

Exit codes: 0 on success, 1 on configuration or input errors, 2 when some
records failed but the run completed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .backends import HttpBackend, Lexicon, LexiconBackend
from .config import BACKENDS, METHODS, RunConfig, load_config
from .datasets import Record, data_path, fingerprint, load_dataset
from .errors import ConfigError, EmptyTraceSet
from .eval.metrics import classify_and_split
from .eval.report import TransferReport, TransferRow, build_report, trace_label, trace_vector
from .perturb import KINDS, LexiconPerturber, LlmPerturber, load_synonyms, perturb_dataset, read_records, write_records
from .pipeline import (FrcTrace, KnowledgeBundle, extract_knowledge, fixed_clock, load_traces,
                       run_batch, run_cot, run_dp, run_frc, wall_clock, write_jsonl)

log = logging.getLogger("frc")

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2
TRANSFER_CONFIGS = ("none", "keyword", "subunit", "both")


def make_backend(cfg: RunConfig, lexicon_path: str | None = None):
    if cfg.backend == "lexicon":
        path = lexicon_path or cfg.lexicon or data_path("lexicon.json")
        name = Path(path).stem
        return LexiconBackend(Lexicon.load(path), name)
    return HttpBackend(cfg.http.with_env())


def clock_for(backend):
    return fixed_clock if getattr(backend, "deterministic", False) else wall_clock


def runner(method: str, backend, classes, injected=None):
    clock = clock_for(backend)
    if method == "frc":
        return lambda rec: run_frc(rec.text, classes, backend, injected, clock, rec.id)
    if method == "cot":
        return lambda rec: run_cot(rec.text, classes, backend, clock, rec.id)
    return lambda rec: run_dp(rec.text, classes, backend, clock, rec.id)


def run_records(records, method, backend, classes, injected=None):
    """Traces for ``records`` in order, and the (record, error) failures."""
    limit = getattr(backend, "concurrency_limit", 1)
    results = run_batch(records, runner(method, backend, classes, injected), limit)
    traces, failures = [], []
    for rec, res in zip(records, results):
        if isinstance(res, Exception):
            failures.append((rec, res))
        else:
            traces.append(res)
    return traces, failures


def _write_snapshot(cfg: RunConfig, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    cfg.save(out / "config.ini")


def report_snapshot(cfg: RunConfig) -> dict:
    """Config sections embedded in reports; the output location is left out so
    that reruns into different directories give identical reports."""
    snap = {k: dict(v) for k, v in cfg.to_parser().items() if k != "DEFAULT"}
    snap["run"].pop("output_dir", None)
    return snap


def _label_row(trace, threshold):
    row = {"id": trace.record_id, "method": trace.method, "label": trace_label(trace)}
    vec = trace_vector(trace)
    if vec is not None:
        polar = {c: vec[c] for c in trace.classes.polar}
        row["bucket"] = classify_and_split(polar, threshold)[1]
        row["memberships" if trace.method == "frc" else "probabilities"] = vec
    return row


def _failures_file(out: Path, failures) -> None:
    write_jsonl(out / "failures.jsonl",
                ({"id": r.id, "text": r.text, "error": f"{type(e).__name__}: {e}"}
                 for r, e in failures))


# --------------------------------------------------------------------------- analyze

def cmd_analyze(cfg: RunConfig, texts=()) -> int:
    if texts:
        records = [Record(f"text-{i}", t) for i, t in enumerate(texts)]
    elif cfg.data.dataset:
        records = load_dataset(cfg.data.dataset, cfg.classes)
    else:
        raise ConfigError("analyze needs --text or a dataset")
    out = Path(cfg.output_dir)
    _write_snapshot(cfg, out)
    backend = make_backend(cfg)
    traces, failures = run_records(records, cfg.method, backend, cfg.classes)
    write_jsonl(out / "traces.jsonl", (t.to_dict() for t in traces))
    write_jsonl(out / "labels.jsonl", (_label_row(t, cfg.threshold) for t in traces))
    for t in traces:
        print(f"{t.record_id}\t{trace_label(t)}")
    if failures:
        _failures_file(out, failures)
        log.error("%d of %d records failed; see %s", len(failures), len(records),
                  out / "failures.jsonl")
        return EXIT_PARTIAL
    return EXIT_OK


# --------------------------------------------------------------------------- perturb

def make_generator(cfg: RunConfig):
    if cfg.backend == "lexicon":
        lex_path = cfg.lexicon or data_path("lexicon.json")
        syn_path = cfg.data.synonyms or data_path("synonyms.json")
        return LexiconPerturber(Lexicon.load(lex_path), load_synonyms(syn_path), cfg.classes,
                                seed=cfg.seed)
    return LlmPerturber(HttpBackend(cfg.http.with_env()), cfg.classes)


def cmd_perturb(cfg: RunConfig) -> int:
    if not cfg.data.dataset:
        raise ConfigError("perturb needs a dataset")
    records = load_dataset(cfg.data.dataset, cfg.classes)
    out = Path(cfg.output_dir)
    _write_snapshot(cfg, out)
    made, failures = perturb_dataset([r.to_dict() for r in records], cfg.kinds,
                                     make_generator(cfg), cfg.classes, cfg.per_kind, cfg.seed)
    write_records(out / "perturbed.jsonl", made)
    write_jsonl(out / "perturb_failures.jsonl",
                ({"source_id": s, "kind": k, "error": e} for s, k, e in failures))
    counts = {k: sum(1 for r in made if r.kind == k) for k in cfg.kinds}
    for k, n in counts.items():
        print(f"{k}\t{n}")
    if failures:
        log.warning("%d (record, kind) combinations produced no perturbation", len(failures))
    return EXIT_OK if made else EXIT_PARTIAL


# --------------------------------------------------------------------------- evaluate

def _texts_needed(records, perturbed):
    seen = {}
    for r in records:
        seen.setdefault(r.text, r.id)
    for p in perturbed:
        seen.setdefault(p.original_text, p.source_id)
        seen.setdefault(p.perturbed_text, p.id)
    return [Record(rid, text) for text, rid in seen.items()]


def cmd_evaluate(cfg: RunConfig, methods=None) -> int:
    records = load_dataset(cfg.data.dataset, cfg.classes) if cfg.data.dataset else []
    perturbed = read_records(cfg.data.perturbed) if cfg.data.perturbed else []
    if not records and not perturbed:
        raise ConfigError("evaluate needs a dataset and/or perturbed records")
    out = Path(cfg.output_dir)
    _write_snapshot(cfg, out)
    indexes: dict[str, dict] = {}
    failures = []
    if cfg.data.traces:
        for path in cfg.data.traces:
            for t in load_traces(path):
                indexes.setdefault(t.method, {})[t.input_text] = t
    else:
        backend = make_backend(cfg)
        needed = _texts_needed(records, perturbed)
        for m in methods or (cfg.method,):
            traces, failed = run_records(needed, m, backend, cfg.classes)
            failures += failed
            indexes[m] = {t.input_text: t for t in traces}
            write_jsonl(out / f"traces_{m}.jsonl", (t.to_dict() for t in traces))
    if not any(r.label for r in records):
        log.warning("no gold labels; F1 fields will be null")
    fp = fingerprint(records) if records else fingerprint(
        [Record(p.id, p.perturbed_text) for p in perturbed])
    snapshot = report_snapshot(cfg)
    report = build_report(indexes, cfg.classes, records, perturbed, cfg.threshold, snapshot, fp)
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    (out / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    from .eval.plots import render_report_figures
    render_report_figures(report, out)
    sys.stdout.write(report.table())
    if failures:
        _failures_file(out, failures)
        log.error("%d trace runs failed; see %s", len(failures), out / "failures.jsonl")
        return EXIT_PARTIAL
    return EXIT_OK


# --------------------------------------------------------------------------- transfer

def transfer_bundles(teacher: KnowledgeBundle | None) -> dict[str, KnowledgeBundle]:
    """The four prompt configurations; only the baseline when there is no teacher knowledge."""
    empty = KnowledgeBundle()
    if teacher is None or teacher.is_empty:
        return {"none": empty}
    return {"none": empty, "keyword": teacher.only_keywords(),
            "subunit": teacher.only_subunits(), "both": teacher}


def run_transfer(records, classes, student, teacher_traces, threshold=0.3, config=None):
    """Student FRC runs under each injection configuration.

    Returns ``(report, traces_by_config, failures)``.
    """
    warnings = []
    try:
        teacher = extract_knowledge([t for t in teacher_traces if isinstance(t, FrcTrace)])
    except EmptyTraceSet:
        teacher = None
        warnings.append("teacher traces are empty; only the baseline row is reported")
        log.warning(warnings[-1])
    rows, all_traces, failures = [], {}, []
    gold_index = {r.text: r.label for r in records}
    for name, bundle in transfer_bundles(teacher).items():
        traces, failed = run_records(records, "frc", student, classes, bundle)
        failures += failed
        all_traces[name] = traces
        report = build_report({"frc": {t.input_text: t for t in traces}}, classes,
                              [r for r in records if r.text in gold_index], (), threshold)
        m = report.methods[0]
        rows.append(TransferRow(name, m.f1_avg, m.f1_clear, m.f1_ambiguous, m.n_clear,
                                m.n_ambiguous, len(bundle.keyword_knowledge),
                                len(bundle.subunit_knowledge)))
    rep = TransferReport(rows, fingerprint(records), dict(config or {}),
                         teacher.teacher_model if teacher else "", warnings)
    return rep, all_traces, failures


def cmd_transfer(cfg: RunConfig) -> int:
    if not cfg.data.dataset or not cfg.data.teacher_traces:
        raise ConfigError("transfer needs a dataset and teacher traces")
    if cfg.method != "frc":
        raise ConfigError("knowledge transfer is defined for the frc method only")
    records = load_dataset(cfg.data.dataset, cfg.classes)
    out = Path(cfg.output_dir)
    _write_snapshot(cfg, out)
    student = make_backend(cfg, None if cfg.lexicon else str(data_path("student_lexicon.json")))
    snapshot = report_snapshot(cfg)
    report, traces, failures = run_transfer(records, cfg.classes, student,
                                            load_traces(cfg.data.teacher_traces), cfg.threshold,
                                            snapshot)
    for name, ts in traces.items():
        write_jsonl(out / f"traces_{name}.jsonl", (t.to_dict() for t in ts))
    (out / "transfer.json").write_text(report.to_json(), encoding="utf-8")
    (out / "transfer.csv").write_text(report.to_csv(), encoding="utf-8")
    from .eval.plots import plot_transfer
    plot_transfer(report, out / "transfer.png")
    sys.stdout.write(report.table())
    if failures:
        _failures_file(out, failures)
        return EXIT_PARTIAL
    return EXIT_OK


# --------------------------------------------------------------------------- argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run configuration")
    common.add_argument("--backend", choices=BACKENDS)
    common.add_argument("--method", choices=METHODS)
    common.add_argument("--out", dest="output_dir", help="output directory")
    common.add_argument("--seed", type=int)
    common.add_argument("--threshold", type=float, help="ambiguity threshold (default 0.3)")
    common.add_argument("--lexicon", help="lexicon JSON for the lexicon backend")
    common.add_argument("--dataset", help="JSONL records {id, text, label, lang}")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="frc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="run a pipeline over texts")
    a.add_argument("--text", action="append", default=[], help="text to analyze (repeatable)")

    pp = sub.add_parser("perturb", parents=[common], help="build perturbation records")
    pp.add_argument("--kinds", help=f"comma-separated subset of {','.join(KINDS)}")
    pp.add_argument("--per-kind", dest="per_kind", type=int)
    pp.add_argument("--synonyms", help="synonym table JSON")

    e = sub.add_parser("evaluate", parents=[common], help="RS, MS and F1 report")
    e.add_argument("--perturbed", help="perturbation records JSONL")
    e.add_argument("--traces", action="append", help="precomputed traces JSONL (repeatable)")
    e.add_argument("--methods", help="comma-separated methods for live runs")

    t = sub.add_parser("transfer", parents=[common], help="knowledge injection comparison")
    t.add_argument("--teacher-traces", dest="teacher_traces", help="teacher FRC traces JSONL")
    return p


def resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    changes = {k: getattr(args, k, None) for k in
               ("backend", "method", "output_dir", "seed", "threshold", "lexicon", "dataset",
                "perturbed", "teacher_traces", "synonyms", "per_kind")}
    if getattr(args, "traces", None):
        changes["traces"] = tuple(args.traces)
    if getattr(args, "kinds", None):
        changes["kinds"] = tuple(k.strip() for k in args.kinds.split(",") if k.strip())
    cfg = cfg.override(**changes)
    cfg.check_paths()
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        if args.command == "analyze":
            return cmd_analyze(cfg, args.text)
        if args.command == "perturb":
            return cmd_perturb(cfg)
        if args.command == "evaluate":
            methods = tuple(m.strip() for m in args.methods.split(",")) if args.methods else None
            if methods and any(m not in METHODS for m in methods):
                raise ConfigError(f"methods must be drawn from {METHODS}")
            return cmd_evaluate(cfg, methods)
        return cmd_transfer(cfg)
    except ConfigError as e:
        log.error("%s", e)
        return EXIT_CONFIG
    except (OSError, ValueError) as e:
        log.error("input error: %s", e)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
