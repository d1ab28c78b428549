"""Render histogram, boxplot and function-plot images from tmemu CSVs.

The CSVs are the only input: every plotted statistic is recomputed here from
the raw columns, never taken from the JSON summaries, so the figures double
as a cross-check of the experiment pipeline. Input files are read-only;
re-rendering the same CSV always yields the same statistics.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

KINDS = ("histogram", "boxplot", "function-plot")


class FigureError(ValueError):
    """Bad figure specification or unusable input CSV."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    kind: str  # histogram | boxplot | function-plot
    out_path: str
    bin_width: int = 4

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise FigureError(f"unknown figure kind {self.kind!r}; want one of {KINDS}")
        if self.bin_width < 1:
            raise FigureError("bin_width must be >= 1")


def read_csv_rows(path: str) -> list[dict[str, str]]:
    """Data rows as dicts; '#' comment lines before the header are skipped."""
    with open(path, newline="") as f:
        lines = [ln for ln in f if not ln.startswith("#")]
    rows = list(csv.DictReader(lines))
    if not rows:
        raise FigureError(f"{path}: no data rows")
    return rows


def column(rows: list[dict[str, str]], name: str) -> list[str]:
    if name not in rows[0]:
        raise FigureError(
            f"missing column {name!r}; found {sorted(rows[0])}"
        )
    return [row[name] for row in rows]


def median(values: list[float]) -> float:
    if not values:
        raise FigureError("median of an empty column")
    s = sorted(values)
    mid = len(s) // 2
    if len(s) % 2:
        return float(s[mid])
    return (s[mid - 1] + s[mid]) / 2


def boxplot_stats(csv_path: str) -> dict:
    """Per-group raw/distinct counts with recomputed medians and means.

    Groups come from the counts.csv 'group' column in first-seen order.
    """
    rows = read_csv_rows(csv_path)
    groups: dict[str, dict[str, list[int]]] = {}
    for g, raw, distinct in zip(
        column(rows, "group"),
        column(rows, "raw_count"),
        column(rows, "distinct_count"),
    ):
        entry = groups.setdefault(g, {"raw": [], "distinct": []})
        entry["raw"].append(int(raw))
        entry["distinct"].append(int(distinct))
    return {
        g: {
            "raw": counts["raw"],
            "distinct": counts["distinct"],
            "median_raw": median(counts["raw"]),
            "median_distinct": median(counts["distinct"]),
            "mean_raw": sum(counts["raw"]) / len(counts["raw"]),
            "mean_distinct": sum(counts["distinct"]) / len(counts["distinct"]),
        }
        for g, counts in groups.items()
    }


def _render_histogram(spec: FigureSpec) -> None:
    rows = read_csv_rows(spec.csv_path)
    lengths = [int(v) for v in column(rows, "compressed_length")]
    lo = min(lengths) // spec.bin_width * spec.bin_width
    hi = (max(lengths) // spec.bin_width + 1) * spec.bin_width
    bins = list(range(lo, hi + spec.bin_width, spec.bin_width))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(lengths, bins=bins, edgecolor="black")
    ax.set_xlabel("compressed length (bytes)")
    ax.set_ylabel("inputs")
    ax.set_title(f"Compressed space-time diagram lengths (n={len(lengths)})")
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)


def _render_boxplot(spec: FigureSpec) -> None:
    stats = boxplot_stats(spec.csv_path)
    labels = list(stats)
    fig, axes = plt.subplots(1, 2, figsize=(8, 4))
    for ax, key in zip(axes, ("raw", "distinct")):
        ax.boxplot(
            [stats[g][key] for g in labels],
            tick_labels=labels,
            showmeans=True,
            meanprops={"marker": "D"},
        )
        ax.set_ylabel(f"{key} emulation count")
        ax.set_title(key)
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)


def _render_function_plot(spec: FigureSpec) -> None:
    rows = read_csv_rows(spec.csv_path)
    inputs = [int(v) for v in column(rows, "input")]
    outputs = column(rows, "output")
    outcomes = column(rows, "outcome")
    xs, ys, cutoff_xs = [], [], []
    for i, out, outcome in zip(inputs, outputs, outcomes):
        if outcome == "halted":
            xs.append(i)
            ys.append(int(out, 2) if out else 0)
        else:
            cutoff_xs.append(i)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter(xs, ys, s=12, label="halted")
    if cutoff_xs:
        ax.scatter(
            cutoff_xs, [0] * len(cutoff_xs), s=12, marker="x", label="cutoff"
        )
        ax.legend()
    ax.set_xlabel("input")
    ax.set_ylabel("output value (binary)")
    ax.set_title("Computed function")
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)


_RENDERERS = {
    "histogram": _render_histogram,
    "boxplot": _render_boxplot,
    "function-plot": _render_function_plot,
}


def render(spec: FigureSpec) -> str:
    """Write the image for ``spec``; nothing is written on error."""
    spec.validate()
    _RENDERERS[spec.kind](spec)
    out = Path(spec.out_path)
    assert out.exists() and out.stat().st_size > 0
    return str(out)
