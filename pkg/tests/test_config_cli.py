import json
import shutil
from pathlib import Path

import pytest

from frc.backends import LexiconBackend
from frc.cli import EXIT_CONFIG, EXIT_OK, EXIT_PARTIAL, main, run_transfer, transfer_bundles
from frc.config import RunConfig, load_config, parse_config
from frc.datasets import Record, bundled, data_path
from frc.errors import ConfigError
from frc.fuzzy import BINARY
from frc.pipeline import KnowledgeBundle, read_jsonl

GOLDEN = Path(__file__).parent / "golden" / "report.json"


def write_dataset(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return str(path)


class TestConfig:
    def test_round_trip(self, tmp_path):
        cfg = RunConfig(method="cot", seed=4, threshold=0.25, class_names=("pos", "neg"),
                        include_other=True, kinds=("robust_low", "monotonic"), per_kind=2)
        cfg.save(tmp_path / "c.ini")
        assert load_config(tmp_path / "c.ini") == cfg

    def test_defaults(self):
        assert parse_config("") == RunConfig()

    @pytest.mark.parametrize("text", [
        "[run]\nmethod = magic\n",
        "[run]\nthreshold = 1.5\n",
        "[run]\nseed = many\n",
        "[classes]\ninclude_other = maybe\n",
        "[perturb]\nkinds = robust_extreme\n",
        "[mystery]\nx = 1\n",
        "not an ini file",
    ])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_missing_paths(self, tmp_path):
        (tmp_path / "c.ini").write_text("[data]\ndataset = /nowhere.jsonl\n")
        with pytest.raises(ConfigError, match="nowhere"):
            load_config(tmp_path / "c.ini")

    def test_override_ignores_none(self):
        cfg = RunConfig().override(seed=None, method="dp", dataset="d.jsonl")
        assert cfg.seed == 0 and cfg.method == "dp" and cfg.data.dataset == "d.jsonl"

    def test_no_secret_fields(self):
        assert "key" not in RunConfig().to_ini().lower()


class TestAnalyze:
    def test_single_text(self, tmp_path, capsys):
        assert main(["analyze", "--text", "The food was great!", "--out", str(tmp_path)]) == EXIT_OK
        assert capsys.readouterr().out == "text-0\tpositive\n"
        (trace,) = read_jsonl(tmp_path / "traces.jsonl")
        assert trace["method"] == "frc" and trace["fused"]["positive"] > 0.7
        (label,) = read_jsonl(tmp_path / "labels.jsonl")
        assert label["bucket"] == "clear"
        assert (tmp_path / "config.ini").exists()

    def test_methods(self, tmp_path, capsys):
        for m in ("cot", "dp"):
            assert main(["analyze", "--method", m, "--text", "The room was dirty.",
                         "--out", str(tmp_path / m)]) == EXIT_OK
        assert capsys.readouterr().out == "text-0\tnegative\n" * 2

    def test_partial_failure(self, tmp_path, stub_server, monkeypatch):
        rows = [{"id": f"r{i}", "text": f"The food was good {i}."} for i in range(10)]
        rows[4]["text"] = "FAILME the food was good."
        ds = write_dataset(tmp_path / "d.jsonl", rows)
        monkeypatch.setenv("FRC_ENDPOINT", stub_server.url)
        code = main(["analyze", "--backend", "http", "--dataset", ds, "--out", str(tmp_path / "o")])
        assert code == EXIT_PARTIAL
        assert len(read_jsonl(tmp_path / "o" / "traces.jsonl")) == 9
        (fail,) = read_jsonl(tmp_path / "o" / "failures.jsonl")
        assert fail["id"] == "r4" and "TransportError" in fail["error"]

    def test_bad_config_exit_code(self, tmp_path):
        (tmp_path / "c.ini").write_text("[run]\nmethod = magic\n")
        assert main(["analyze", "--config", str(tmp_path / "c.ini"), "--text", "x"]) == EXIT_CONFIG

    def test_nothing_to_analyze(self, tmp_path):
        assert main(["analyze", "--out", str(tmp_path)]) == EXIT_CONFIG

    def test_bad_dataset(self, tmp_path):
        p = tmp_path / "d.jsonl"
        p.write_text('{"id": "1", "text": "ok"}\n{broken\n')
        assert main(["analyze", "--dataset", str(p), "--out", str(tmp_path / "o")]) == EXIT_CONFIG

    def test_rerun_is_byte_identical(self, tmp_path):
        ds = str(data_path("conflict.jsonl"))
        for d in ("a", "b"):
            assert main(["analyze", "--dataset", ds, "--out", str(tmp_path / d)]) == EXIT_OK
        for name in ("traces.jsonl", "labels.jsonl"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestPerturbCommand:
    def test_counts(self, tmp_path, capsys):
        ds = write_dataset(tmp_path / "d.jsonl", [{"id": "a", "text": "The food was good."}])
        code = main(["perturb", "--dataset", ds, "--kinds", "robust_low,monotonic",
                     "--out", str(tmp_path / "o")])
        assert code == EXIT_OK
        assert capsys.readouterr().out == "robust_low\t1\nmonotonic\t1\n"

    def test_nothing_produced(self, tmp_path):
        ds = write_dataset(tmp_path / "d.jsonl", [{"id": "a", "text": "Zxq vbn."}])
        assert main(["perturb", "--dataset", ds, "--kinds", "robust_low",
                     "--out", str(tmp_path / "o")]) == EXIT_PARTIAL
        assert read_jsonl(tmp_path / "o" / "perturb_failures.jsonl")[0]["source_id"] == "a"


class TestEvaluateCommand:
    @pytest.fixture
    def small(self, tmp_path):
        rows = [r.to_dict() for r in bundled("corpus")[:25]]
        ds = write_dataset(tmp_path / "d.jsonl", rows)
        assert main(["perturb", "--dataset", ds, "--out", str(tmp_path / "p")]) == EXIT_OK
        return ds, str(tmp_path / "p" / "perturbed.jsonl")

    def test_two_rs_rows(self, tmp_path, small):
        ds, pert = small
        out = tmp_path / "e"
        assert main(["evaluate", "--dataset", ds, "--perturbed", pert, "--methods", "frc,cot",
                     "--out", str(out)]) == EXIT_OK
        rep = json.loads((out / "report.json").read_text())
        assert [m["method"] for m in rep["methods"]] == ["frc", "cot"]
        assert all(m["rs_by_level"]["low"] is not None for m in rep["methods"])
        csv_lines = (out / "report.csv").read_text().splitlines()
        assert len(csv_lines) == 3
        for png in ("robustness.png", "monotonicity.png", "f1.png"):
            assert (out / png).stat().st_size > 0

    def test_gold_less(self, tmp_path, small):
        _, pert = small
        rows = [{"id": r.id, "text": r.text} for r in bundled("corpus")[:25]]
        ds = write_dataset(tmp_path / "nogold.jsonl", rows)
        out = tmp_path / "e"
        assert main(["evaluate", "--dataset", ds, "--perturbed", pert, "--out", str(out)]) == EXIT_OK
        (m,) = json.loads((out / "report.json").read_text())["methods"]
        assert m["f1_avg"] is None and m["f1_clear"] is None and m["f1_ambiguous"] is None
        assert m["ms_avg"] is not None

    def test_precomputed_traces(self, tmp_path, small):
        ds, pert = small
        assert main(["evaluate", "--dataset", ds, "--perturbed", pert, "--out",
                     str(tmp_path / "live")]) == EXIT_OK
        traces = str(tmp_path / "live" / "traces_frc.jsonl")
        assert main(["evaluate", "--dataset", ds, "--perturbed", pert, "--traces", traces,
                     "--out", str(tmp_path / "replay")]) == EXIT_OK
        a = json.loads((tmp_path / "live" / "report.json").read_text())["methods"]
        b = json.loads((tmp_path / "replay" / "report.json").read_text())["methods"]
        assert a == b

    def test_unknown_method(self, tmp_path, small):
        ds, pert = small
        assert main(["evaluate", "--dataset", ds, "--methods", "frc,magic",
                     "--out", str(tmp_path / "e")]) == EXIT_CONFIG

    def test_golden(self, tmp_path, monkeypatch):
        # relative paths keep the embedded config independent of the temp dir
        monkeypatch.chdir(tmp_path)
        shutil.copy(data_path("corpus.jsonl"), "corpus.jsonl")
        assert main(["perturb", "--dataset", "corpus.jsonl", "--out", "p"]) == EXIT_OK
        assert main(["evaluate", "--dataset", "corpus.jsonl", "--perturbed", "p/perturbed.jsonl",
                     "--out", "e"]) == EXIT_OK
        assert Path("e/report.json").read_text(encoding="utf-8") == GOLDEN.read_text(encoding="utf-8")


class TestTransfer:
    def test_bundles(self):
        assert list(transfer_bundles(None)) == ["none"]
        assert list(transfer_bundles(KnowledgeBundle())) == ["none"]

    def test_command(self, tmp_path, capsys):
        ds = str(data_path("transfer.jsonl"))
        assert main(["analyze", "--dataset", ds, "--out", str(tmp_path / "teacher")]) == EXIT_OK
        capsys.readouterr()
        teacher = str(tmp_path / "teacher" / "traces.jsonl")
        out = tmp_path / "t"
        assert main(["transfer", "--dataset", ds, "--teacher-traces", teacher,
                     "--out", str(out)]) == EXIT_OK
        rep = json.loads((out / "transfer.json").read_text())
        assert [r["configuration"] for r in rep["rows"]] == ["none", "keyword", "subunit", "both"]
        assert (out / "transfer.png").exists() and (out / "transfer.csv").exists()
        assert "both" in capsys.readouterr().out

    def test_requires_frc(self, tmp_path):
        ds = str(data_path("transfer.jsonl"))
        assert main(["transfer", "--method", "cot", "--dataset", ds, "--teacher-traces", ds,
                     "--out", str(tmp_path)]) == EXIT_CONFIG

    def test_empty_teacher(self, student_lexicon):
        records = [Record("1", "The cake was scrumptious.", "positive")]
        rep, traces, _ = run_transfer(records, BINARY, LexiconBackend(student_lexicon), [])
        assert [r.configuration for r in rep.rows] == ["none"]
        assert rep.warnings
