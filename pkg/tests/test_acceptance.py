"""The ten acceptance criteria, one test each.

Every test prints a single ``[PASS]`` or ``[FAIL]`` line with the measured
quantities before asserting, so ``pytest -v -m acceptance`` doubles as a
readable scorecard.
"""

import hashlib
import json
import random
import time
from pathlib import Path

import pytest

from frc.backends import BackendConfig, ElicitationRequest, HttpBackend, LexiconBackend
from frc.cli import EXIT_OK, main, run_records
from frc.datasets import bundled, data_path
from frc.errors import MalformedResponse
from frc.eval import (EvalPair, classify_and_split, estimate_stability, f1_score,
                      monotonicity_score, robustness_score)
from frc.eval.report import method_report
from frc.fuzzy import BINARY, Keyword, MembershipVector, SubUnit, fuse_global, normalize_weights
from frc.perturb import LexiconPerturber, perturb_dataset
from frc.pipeline import fixed_clock, read_jsonl, run_cot, run_frc

from oracles import fuse_reference

pytestmark = pytest.mark.acceptance


@pytest.fixture
def verdict(capsys):
    def emit(n, name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {name}: {detail}")
        return ok
    return emit


@pytest.fixture(scope="module")
def corpus():
    return bundled("corpus", BINARY)


@pytest.fixture(scope="module")
def robust_run(corpus, lexicon, synonyms):
    """Robust perturbations of the curated corpus and FRC vectors for every text involved."""
    gen = LexiconPerturber(lexicon, synonyms, BINARY, seed=0)
    made, _ = perturb_dataset([r.to_dict() for r in corpus],
                              ["robust_low", "robust_medium", "robust_high"], gen, BINARY)
    backend = LexiconBackend(lexicon, "lexicon")
    texts = sorted({t for r in made for t in (r.original_text, r.perturbed_text)})
    index = {t: run_frc(t, BINARY, backend, clock=fixed_clock) for t in texts}
    return made, index


def frc_vector(index, text):
    return index[text].fused.as_dict(BINARY)


def test_01_fusion_oracle_equivalence(verdict):
    rng = random.Random(2024)
    instances = []
    for _ in range(1000):
        n_sub = rng.randint(1, 6)
        degrees = [[(rng.random(), rng.random()) for _ in range(rng.randint(0, 4))]
                   for _ in range(n_sub)]
        raw = [[rng.choice([0.0, rng.random()]) + (1e-3 if j == 0 else 0.0) for j in range(n_sub)]
               for _ in range(2)]
        instances.append((degrees, raw))

    start = time.perf_counter()
    outputs = []
    for degrees, raw in instances:
        subs = [SubUnit.build(f"s{j}", [Keyword("k", MembershipVector(k)) for k in ks], BINARY)
                for j, ks in enumerate(degrees)]
        outputs.append(fuse_global(subs, normalize_weights(raw, BINARY), BINARY).values)
    elapsed = time.perf_counter() - start

    worst = 0.0
    for (degrees, raw), got in zip(instances, outputs):
        want = fuse_reference(degrees, raw)
        worst = max(worst, *(abs(a - b) for a, b in zip(got, want)))
    ok = worst <= 1e-9 and elapsed < 1.0
    verdict(1, "fusion oracle equivalence", ok,
            f"1000 instances, max |diff| {worst:.2e} (<= 1e-9), {elapsed:.3f}s (< 1s)")
    assert ok


def test_02_metric_exactness(verdict):
    checks = {}

    # RS: ten pairs whose positive-class deviations sum to exactly 1.0
    deltas = [0.1, 0.2, 0.0, 0.05, 0.15, 0.1, 0.0, 0.3, 0.05, 0.05]
    pairs = [EvalPair({"positive": 0.5}, {"positive": 0.5 + (d if i % 2 else -d)})
             for i, d in enumerate(deltas)]
    checks["rs_fixture"] = (robustness_score(pairs, "positive"), 0.9)
    same = [EvalPair({"positive": v}, {"positive": v}) for v in (0.1, 0.4, 0.7, 0.9, 1.0) * 2]
    checks["rs_identity"] = (robustness_score(same, "positive"), 1.0)

    # MS: twelve pairs, nine hits (three deliberate misses)
    ms_rows = [(+0.1, 1), (-0.2, -1), (0.0, 0), (+0.05, 1), (-0.1, -1), (0.0, 0),
            (+0.3, 1), (-0.05, -1), (+0.1, 1), (+0.1, -1), (0.0, 1), (-0.1, 0)]
    ms_pairs = [EvalPair({"positive": 0.5}, {"positive": 0.5 + d}, {"positive": y})
                for d, y in ms_rows]
    checks["ms_fixture"] = (monotonicity_score(ms_pairs, "positive"), 0.75)
    correct = [EvalPair({"positive": 0.5}, {"positive": 0.5 + d}, {"positive": y})
               for d, y in ms_rows[:9]]
    checks["ms_identity"] = (monotonicity_score(correct, "positive"), 1.0)

    # F1: 20 records; positive tp8 fp3 fn2 -> 16/21, negative tp7 fp1 fn3 -> 7/9
    gold = ["positive"] * 10 + ["negative"] * 10
    preds = (["positive"] * 8 + ["negative", "neutral"]
             + ["negative"] * 7 + ["positive"] * 3)
    checks["f1_fixture"] = (f1_score(preds, gold), 97 / 126)
    checks["f1_identity"] = (f1_score(gold, gold), 1.0)

    worst = max(abs(got - want) for got, want in checks.values())
    ok = worst <= 1e-12
    verdict(2, "metric exactness", ok,
            f"{len(checks)} fixtures (RS, MS, F1 and identities), max |diff| {worst:.1e} (<= 1e-12)")
    assert ok


def test_03_offline_ms_is_one(verdict, corpus, lexicon, perturber):
    start = time.perf_counter()
    made, _ = perturb_dataset([r.to_dict() for r in corpus], ["monotonic"], perturber, BINARY,
                              per_kind=4)
    records = made[:500]
    backend = LexiconBackend(lexicon, "lexicon")
    cache = {}

    def vec(text):
        if text not in cache:
            cache[text] = run_frc(text, BINARY, backend, clock=fixed_clock).fused.as_dict(BINARY)
        return cache[text]

    pairs = [EvalPair(vec(r.original_text), vec(r.perturbed_text), r.shift_labels) for r in records]
    scores = {c: monotonicity_score(pairs, c) for c in BINARY.names}
    elapsed = time.perf_counter() - start
    ok = len(records) == 500 and all(s == 1.0 for s in scores.values()) and elapsed < 5.0
    verdict(3, "offline MS = 1.0", ok,
            f"{len(records)} monotonic records, MS {scores}, {elapsed:.2f}s (< 5s)")
    assert ok


def test_04_rs_ordering(verdict, robust_run):
    made, index = robust_run
    rep = method_report("frc", index, BINARY, None, made)
    low, med, high = (rep.rs_by_level[lv] for lv in ("low", "medium", "high"))
    ok = low - med >= 0.01 and med - high >= 0.01
    verdict(4, "RS ordering low > medium > high", ok,
            f"RS low {low:.5f}, medium {med:.5f}, high {high:.5f}; "
            f"margins {low - med:.4f} and {med - high:.4f} (>= 0.01); "
            f"pairs {rep.n_pairs['low']}/{rep.n_pairs['medium']}/{rep.n_pairs['high']}")
    assert ok


def test_05_frc_vs_cot_conflict(verdict, lexicon):
    backend = LexiconBackend(lexicon, "lexicon")
    records = bundled("conflict", BINARY)
    frc_min, cot_dev = 1.0, 0.0
    for r in records:
        frc_min = min(frc_min, *run_frc(r.text, BINARY, backend).fused)
        cot = run_cot(r.text, BINARY, backend)
        cot_dev = max(cot_dev, *(abs(p - 0.5) for p in cot.probabilities))
    ok = frc_min > 0.7 and cot_dev <= 0.05
    verdict(5, "FRC vs CoT on the conflict corpus", ok,
            f"{len(records)} records, min FRC membership {frc_min:.3f} (> 0.7), "
            f"max CoT |p - 0.5| {cot_dev:.3f} (<= 0.05)")
    assert ok


def test_06_clear_ambiguous_rule(verdict):
    cases = []
    for diff in (0.0, 0.299, 0.3, 0.301, 0.8):
        for base, high in ((0.1, "positive"), (0.15, "negative"), (0.05, "positive"),
                           (0.2, "negative")):
            other = "negative" if high == "positive" else "positive"
            mu = {high: base + diff, other: base}
            label = "neutral" if diff == 0.0 else high
            bucket = "clear" if diff > 0.3 else "ambiguous"
            cases.append((mu, (label, bucket)))
    wrong = [(mu, want, classify_and_split(mu)) for mu, want in cases
             if classify_and_split(mu) != want]
    ok = len(cases) == 20 and not wrong
    verdict(6, "clear/ambiguous split", ok,
            f"{len(cases) - len(wrong)}/{len(cases)} cases correct, diff 0.3 -> ambiguous")
    assert ok, wrong


def test_07_transfer_plumbing(verdict, tmp_path, student_lexicon, capsys):
    ds = str(data_path("transfer.jsonl"))
    assert main(["analyze", "--dataset", ds, "--out", str(tmp_path / "teacher")]) == EXIT_OK
    out = tmp_path / "transfer"
    assert main(["transfer", "--dataset", ds, "--teacher-traces",
                 str(tmp_path / "teacher" / "traces.jsonl"), "--out", str(out)]) == EXIT_OK
    capsys.readouterr()
    rep = json.loads((out / "transfer.json").read_text())
    f1 = {r["configuration"]: r["f1_avg"] for r in rep["rows"]}

    # a student run with no bundle at all, serialised the same way
    student = LexiconBackend(student_lexicon, "student_lexicon")
    records = bundled("transfer", BINARY)
    baseline, _ = run_records(records, "frc", student, BINARY, None)
    base_bytes = "".join(json.dumps(t.to_dict(), ensure_ascii=False) + "\n" for t in baseline)
    identical = (out / "traces_none.jsonl").read_text(encoding="utf-8") == base_bytes

    ok = (list(f1) == ["none", "keyword", "subunit", "both"] and identical
          and f1["both"] >= f1["keyword"] >= f1["none"])
    verdict(7, "transfer plumbing", ok,
            f"rows {list(f1)}, empty bundle byte-identical to baseline: {identical}, "
            f"F1 both {f1['both']:.3f} >= keyword {f1['keyword']:.3f} >= none {f1['none']:.3f}")
    assert ok


def test_08_stability_bound(verdict, robust_run):
    made, index = robust_run
    triples = [(r.original_text, r.perturbed_text,
                EvalPair(frc_vector(index, r.original_text), frc_vector(index, r.perturbed_text)))
               for r in made if r.kind == "robust_low"]
    est = estimate_stability(triples)
    halved = []
    for x, y, p in triples:
        mid = {c: p.original[c] + 0.5 * (p.perturbed[c] - p.original[c]) for c in p.original}
        halved.append((x, y, EvalPair(p.original, mid)))
    est_half = estimate_stability(halved)
    scale_err = abs(est_half.k_hat - 0.5 * est.k_hat)
    ok = est.k_hat <= 1.0 and scale_err <= 1e-12
    verdict(8, "stability bound", ok,
            f"{len(triples)} low-level pairs, k_hat {est.k_hat:.4f} (<= 1.0), "
            f"|k_hat(0.5 delta) - 0.5 k_hat| {scale_err:.1e} (<= 1e-12)")
    assert ok


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_09_determinism(verdict, tmp_path, monkeypatch, capsys):
    # each run works inside its own directory with relative paths, so both
    # runs see exactly the same configuration
    ds = str(data_path("corpus.jsonl"))
    digests = []
    for run in ("a", "b"):
        root = tmp_path / run
        root.mkdir()
        monkeypatch.chdir(root)
        assert main(["perturb", "--dataset", ds, "--seed", "7", "--out", "p"]) == EXIT_OK
        assert main(["evaluate", "--dataset", ds, "--seed", "7", "--methods", "frc,cot,dp",
                     "--perturbed", "p/perturbed.jsonl", "--out", "e"]) == EXIT_OK
        files = [root / "p" / "perturbed.jsonl"] + sorted((root / "e").glob("traces_*.jsonl")) + \
                [root / "e" / "report.json", root / "e" / "report.csv"]
        digests.append({f.relative_to(root).as_posix(): _digest(f) for f in files})
    capsys.readouterr()
    ok = digests[0] == digests[1] and len(digests[0]) == 6
    verdict(9, "determinism", ok,
            f"{len(digests[0])} files (perturbations, 3 trace files, JSON and CSV reports) hashed "
            f"across two seeded runs, identical: {digests[0] == digests[1]}")
    assert ok


def test_10_wire_conformance(verdict, tmp_path, stub_server, monkeypatch, capsys):
    monkeypatch.setenv("FRC_ENDPOINT", stub_server.url)
    monkeypatch.setenv("FRC_API_KEY", "test-key")
    ds = str(data_path("conflict.jsonl"))
    code_http = main(["analyze", "--backend", "http", "--dataset", ds, "--out", str(tmp_path / "h")])
    code_lex = main(["analyze", "--dataset", ds, "--out", str(tmp_path / "l")])
    capsys.readouterr()
    http_labels = read_jsonl(tmp_path / "h" / "labels.jsonl")
    lex_labels = read_jsonl(tmp_path / "l" / "labels.jsonl")
    same = [a["label"] for a in http_labels] == [b["label"] for b in lex_labels]
    authed = all(r["headers"].get("Authorization") == "Bearer test-key"
                 for r in stub_server.state.requests)

    stub_server.state.mode = "malformed"
    before = len(stub_server.state.requests)
    backend = HttpBackend(BackendConfig(stub_server.url), sleep=lambda s: None)
    try:
        backend.elicit(ElicitationRequest("dp_label", "The food was great.", BINARY))
        raised = False
    except MalformedResponse:
        raised = True
    sent = len(stub_server.state.requests) - before

    ok = (code_http == EXIT_OK and code_lex == EXIT_OK and same and authed and raised
          and backend.stats["reprompts"] == 1 and sent == 2)
    verdict(10, "wire conformance", ok,
            f"analyze over HTTP exit {code_http}, {len(http_labels)} labels match lexicon run: "
            f"{same}; malformed replies -> {backend.stats['reprompts']} reprompt, {sent} requests, "
            f"MalformedResponse raised: {raised}")
    assert ok
