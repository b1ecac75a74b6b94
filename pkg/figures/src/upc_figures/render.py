"""Batch figure rendering from simulator CSV files.

Figures are rebuilt strictly from CSV, never by re-simulation, so this
package needs nothing from the simulator core beyond its file formats.
Inputs are read-only; rerunning on the same inputs reproduces the same image.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "upc-figures"  # deterministic SVG element ids

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)


class SchemaError(ValueError):
    """Input CSV header does not carry the columns the figure needs."""


# columns each figure kind reads from its input CSV(s)
REQUIRED_COLUMNS = {
    "power_vs_eps": ("epsilon", "p_avg_closed", "p_avg_mc", "stderr"),
    "coverage_vs_distance": ("r_m", "coverage", "stderr", "n"),
    "rate_vs_eps": ("epsilon", "reuse", "alpha", "rate_nats", "stderr"),
    "cost_vs_eps": ("epsilon", "p_avg", "edge_cov", "rate_nats",
                    "j_set1", "j_set2", "j_set3"),
}

DEFAULT_LABELS = {
    "power_vs_eps": ("power control factor", "average normalized transmit power"),
    "coverage_vs_distance": ("distance from serving BS (m)", "coverage probability"),
    "rate_vs_eps": ("power control factor", "average rate (nats)"),
    "cost_vs_eps": ("power control factor", "cost function J"),
}

SUPPORTED_SUFFIXES = (".png", ".svg")


@dataclass(frozen=True)
class FigureSpec:
    """One figure: input CSVs, kind, labels, output image path."""

    kind: str
    csv_paths: tuple[Path, ...]
    out_path: Path
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None

    def __post_init__(self):
        if self.kind not in REQUIRED_COLUMNS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.csv_paths:
            raise ValueError("at least one input CSV is required")
        if self.out_path.suffix.lower() not in SUPPORTED_SUFFIXES:
            raise ValueError(f"output must end in one of {SUPPORTED_SUFFIXES}")


def load_rows(path: Path, required: tuple[str, ...]) -> list[dict]:
    """DictReader rows with schema validation; header-only files give []."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        return list(reader)


def _series_label(path: Path) -> str:
    """coverage_fr1_eps0.5.csv -> 'eps=0.5'; anything else keeps its stem."""
    stem = path.stem
    if "eps" in stem:
        return "eps=" + stem.rsplit("eps", 1)[1]
    return stem


def _plot_power(ax, spec: FigureSpec):
    rows = load_rows(spec.csv_paths[0], REQUIRED_COLUMNS[spec.kind])
    eps = [float(r["epsilon"]) for r in rows]
    ax.plot(eps, [float(r["p_avg_closed"]) for r in rows], "-", label="closed form")
    ax.plot(eps, [float(r["p_avg_mc"]) for r in rows], "o", ms=4, label="Monte Carlo")


def _plot_coverage(ax, spec: FigureSpec):
    for path in spec.csv_paths:
        rows = load_rows(path, REQUIRED_COLUMNS[spec.kind])
        ax.plot(
            [float(r["r_m"]) for r in rows],
            [float(r["coverage"]) for r in rows],
            "-o", ms=3, label=_series_label(path),
        )
    ax.set_ylim(0.0, 1.05)


def _plot_rate(ax, spec: FigureSpec):
    rows = load_rows(spec.csv_paths[0], REQUIRED_COLUMNS[spec.kind])
    series: dict[tuple[str, str], list[tuple[float, float]]] = {}
    for r in rows:
        series.setdefault((r["reuse"], r["alpha"]), []).append(
            (float(r["epsilon"]), float(r["rate_nats"]))
        )
    for (reuse, alpha), pts in series.items():
        ax.plot(*zip(*pts), "-o", ms=3, label=f"{reuse}, alpha={alpha}")


def _plot_cost(ax, spec: FigureSpec):
    rows = load_rows(spec.csv_paths[0], REQUIRED_COLUMNS[spec.kind])
    eps = [float(r["epsilon"]) for r in rows]
    for col in ("j_set1", "j_set2", "j_set3"):
        ax.plot(eps, [float(r[col]) for r in rows], "-o", ms=3, label=col)


_PLOTTERS = {
    "power_vs_eps": _plot_power,
    "coverage_vs_distance": _plot_coverage,
    "rate_vs_eps": _plot_rate,
    "cost_vs_eps": _plot_cost,
}


def render(spec: FigureSpec) -> Path:
    """Draw one figure and write it to spec.out_path (format by extension)."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    try:
        _PLOTTERS[spec.kind](ax, spec)
        xlabel, ylabel = DEFAULT_LABELS[spec.kind]
        ax.set_xlabel(spec.xlabel or xlabel)
        ax.set_ylabel(spec.ylabel or ylabel)
        if spec.title:
            ax.set_title(spec.title)
        ax.grid(True, alpha=0.4)
        if ax.get_legend_handles_labels()[0]:
            ax.legend()
        fig.tight_layout()
        save_kwargs = {"dpi": 150}
        if spec.out_path.suffix.lower() == ".svg":
            save_kwargs["metadata"] = {"Date": None}  # keep reruns byte-identical
        fig.savefig(spec.out_path, **save_kwargs)
    finally:
        plt.close(fig)
    return spec.out_path
