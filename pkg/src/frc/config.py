"""Run configuration stored as an INI file.

Sections mirror the fields of :class:`RunConfig`::

    [run]        method, seed, output_dir, threshold
    [classes]    names, include_other
    [backend]    kind, lexicon, endpoint_url, model_name, temperature,
                 max_retries, timeout, concurrency_limit
    [data]       dataset, perturbed, traces, teacher_traces, synonyms
    [perturb]    kinds, per_kind

Empty values mean "unset".  Secrets never live here; the API key is read
from the environment only.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .backends.base import BackendConfig
from .errors import ConfigError
from .fuzzy import ClassSet
from .perturb import KINDS

METHODS = ("frc", "cot", "dp")
BACKENDS = ("lexicon", "http")


@dataclass(frozen=True)
class DataPaths:
    dataset: str = ""
    perturbed: str = ""
    traces: tuple[str, ...] = ()
    teacher_traces: str = ""
    synonyms: str = ""


@dataclass(frozen=True)
class RunConfig:
    method: str = "frc"
    seed: int = 0
    output_dir: str = "out"
    threshold: float = 0.3
    class_names: tuple[str, ...] = ("positive", "negative")
    include_other: bool = False
    backend: str = "lexicon"
    lexicon: str = ""
    http: BackendConfig = field(default_factory=BackendConfig)
    data: DataPaths = field(default_factory=DataPaths)
    kinds: tuple[str, ...] = KINDS
    per_kind: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.backend not in BACKENDS:
            raise ConfigError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold {self.threshold} outside [0, 1]")
        if len(self.class_names) < 2:
            raise ConfigError("need at least two classes")
        bad = [k for k in self.kinds if k not in KINDS]
        if bad:
            raise ConfigError(f"unknown perturbation kinds {bad}")
        if self.per_kind < 1:
            raise ConfigError("per_kind must be >= 1")

    @property
    def classes(self) -> ClassSet:
        return ClassSet.of(*self.class_names, includes_other=self.include_other)

    def override(self, **changes) -> "RunConfig":
        """Copy with the non-None keyword arguments applied."""
        data_keys = {f.name for f in fields(DataPaths)}
        top = {k: v for k, v in changes.items() if v is not None and k not in data_keys}
        data = {k: v for k, v in changes.items() if v is not None and k in data_keys}
        try:
            out = replace(self, **top)
            return replace(out, data=replace(out.data, **data)) if data else out
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e)) from None

    def check_paths(self) -> None:
        """Every referenced input path must exist."""
        paths = [self.lexicon, self.data.dataset, self.data.perturbed, self.data.teacher_traces,
                 self.data.synonyms, *self.data.traces]
        missing = [p for p in paths if p and not Path(p).exists()]
        if missing:
            raise ConfigError(f"missing input files: {', '.join(missing)}")

    def to_parser(self) -> configparser.ConfigParser:
        cp = configparser.ConfigParser(interpolation=None)
        cp["run"] = {"method": self.method, "seed": str(self.seed),
                     "output_dir": self.output_dir, "threshold": repr(self.threshold)}
        cp["classes"] = {"names": ", ".join(self.class_names),
                         "include_other": str(self.include_other).lower()}
        h = self.http
        cp["backend"] = {"kind": self.backend, "lexicon": self.lexicon,
                         "endpoint_url": h.endpoint_url, "model_name": h.model_name,
                         "temperature": repr(h.temperature), "max_retries": str(h.max_retries),
                         "timeout": repr(h.timeout), "concurrency_limit": str(h.concurrency_limit)}
        d = self.data
        cp["data"] = {"dataset": d.dataset, "perturbed": d.perturbed,
                      "traces": ", ".join(d.traces), "teacher_traces": d.teacher_traces,
                      "synonyms": d.synonyms}
        cp["perturb"] = {"kinds": ", ".join(self.kinds), "per_kind": str(self.per_kind)}
        return cp

    def to_ini(self) -> str:
        buf = io.StringIO()
        self.to_parser().write(buf)
        return buf.getvalue()

    def save(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_ini(), encoding="utf-8")
        return path


def _list(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as e:
        raise ConfigError(f"{source}: {e}") from None
    known = {"run", "classes", "backend", "data", "perturb"}
    extra = set(cp.sections()) - known
    if extra:
        raise ConfigError(f"{source}: unknown sections {sorted(extra)}")
    base = RunConfig()
    try:
        run = cp["run"] if cp.has_section("run") else {}
        cls = cp["classes"] if cp.has_section("classes") else {}
        be = cp["backend"] if cp.has_section("backend") else {}
        data = cp["data"] if cp.has_section("data") else {}
        per = cp["perturb"] if cp.has_section("perturb") else {}
        dh = base.http
        http = BackendConfig(
            be.get("endpoint_url", dh.endpoint_url), be.get("model_name", dh.model_name),
            float(be.get("temperature", dh.temperature)), int(be.get("max_retries", dh.max_retries)),
            float(be.get("timeout", dh.timeout)),
            int(be.get("concurrency_limit", dh.concurrency_limit)))
        include_other = cls.get("include_other", "false").strip().lower()
        if include_other not in ("true", "false"):
            raise ConfigError(f"{source}: include_other must be true or false")
        return RunConfig(
            method=run.get("method", base.method),
            seed=int(run.get("seed", base.seed)),
            output_dir=run.get("output_dir", base.output_dir),
            threshold=float(run.get("threshold", base.threshold)),
            class_names=_list(cls.get("names", ", ".join(base.class_names))),
            include_other=include_other == "true",
            backend=be.get("kind", base.backend),
            lexicon=be.get("lexicon", ""),
            http=http,
            data=DataPaths(data.get("dataset", ""), data.get("perturbed", ""),
                           _list(data.get("traces", "")), data.get("teacher_traces", ""),
                           data.get("synonyms", "")),
            kinds=_list(per.get("kinds", ", ".join(base.kinds))),
            per_kind=int(per.get("per_kind", base.per_kind)),
        )
    except ValueError as e:
        raise ConfigError(f"{source}: {e}") from None


def load_config(path, check_paths: bool = True) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    cfg = parse_config(text, str(path))
    if check_paths:
        cfg.check_paths()
    return cfg
