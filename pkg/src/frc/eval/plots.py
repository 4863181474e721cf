"""PNG figures for evaluation and transfer reports.

Figures are drawn with the Agg backend and saved without a software stamp so
that identical reports give identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import LEVELS, EvalReport, TransferReport  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 3.6),
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
}
PNG_METADATA = {"Software": None}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, format="png", metadata=PNG_METADATA)
    plt.close(fig)
    return path


def _grouped_bars(ax, groups, series, values, ylabel):
    width = 0.8 / max(1, len(series))
    for i, name in enumerate(series):
        xs = [g + (i - (len(series) - 1) / 2) * width for g in range(len(groups))]
        ys = [values[name].get(g) for g in groups]
        ax.bar(xs, [0.0 if y is None else y for y in ys], width, label=name)
    ax.set_xticks(range(len(groups)))
    ax.set_xticklabels(groups)
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False)


def plot_robustness(report: EvalReport, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for m in report.methods:
            ys = [m.rs_by_level.get(lv) for lv in LEVELS]
            if any(y is not None for y in ys):
                ax.plot(LEVELS, [float("nan") if y is None else y for y in ys], marker="o",
                        label=m.method.upper())
        ax.set_xlabel("perturbation level")
        ax.set_ylabel("robustness score")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_monotonicity(report: EvalReport, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        rows = {m.method.upper(): m.ms_by_class or {} for m in report.methods if m.ms_by_class}
        classes = sorted({c for v in rows.values() for c in v})
        _grouped_bars(ax, classes, list(rows), rows, "monotonicity score")
        ax.set_ylim(0, 1.05)
        return _save(fig, path)


def plot_f1(report: EvalReport, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        rows = {m.method.upper(): {"clear": m.f1_clear, "ambiguous": m.f1_ambiguous,
                                   "average": m.f1_avg} for m in report.methods}
        _grouped_bars(ax, ["clear", "ambiguous", "average"], list(rows), rows, "macro F1")
        ax.set_ylim(0, 1.05)
        return _save(fig, path)


def plot_transfer(report: TransferReport, path):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        names = [r.configuration for r in report.rows]
        ax.bar(names, [r.f1_avg or 0.0 for r in report.rows], color="tab:blue")
        ax.set_ylabel("macro F1")
        ax.set_ylim(0, 1.05)
        return _save(fig, path)


def render_report_figures(report: EvalReport, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [plot_robustness(report, out / "robustness.png")]
    if any(m.ms_by_class for m in report.methods):
        paths.append(plot_monotonicity(report, out / "monotonicity.png"))
    if any(m.f1_avg is not None for m in report.methods):
        paths.append(plot_f1(report, out / "f1.png"))
    return paths
