"""Render benchmark CSVs into metric-vs-k panels and solved-over-time curves.

Input is the solver's benchmark CSV (schema below); this package knows
nothing about the solver itself.  Figures are pure functions of the CSV:
identical inputs and styling give identical images.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

REQUIRED_COLUMNS = [
    "problem", "n_or_V", "gamma", "k", "seed",
    "solved", "time_s", "nodes", "root_gap_pct", "opt_gap_pct",
]

METRICS = {
    "root_gap": ("root gap (%)", "root_gap_pct"),
    "opt_gap": ("optimality gap (%)", "opt_gap_pct"),
    "solved": ("instances solved (%)", None),
    "time": ("runtime of solved instances (s)", None),
    "nodes": ("processed nodes", "nodes"),
}


class SchemaError(ValueError):
    """The CSV does not follow the benchmark schema."""


def load_results(csv_path) -> pd.DataFrame:
    df = pd.read_csv(csv_path)
    for column in REQUIRED_COLUMNS:
        if column not in df.columns:
            raise SchemaError(f"CSV is missing required column '{column}'")
    if df.empty:
        raise SchemaError("CSV contains no data rows")
    for column in ("n_or_V", "k", "solved", "time_s", "nodes", "root_gap_pct", "opt_gap_pct"):
        df[column] = pd.to_numeric(df[column], errors="raise")
    return df


def _series_label(df: pd.DataFrame, size, gamma) -> str:
    if df[df["n_or_V"] == size]["gamma"].nunique() > 1:
        return f"{int(size)} (budget {gamma:g})"
    return f"{int(size)}"


def _cell_stats(df: pd.DataFrame) -> pd.DataFrame:
    """Per (size, gamma, k) means; runtime averaged only over solved rows."""
    rows = []
    for (size, gamma, k), cell in df.groupby(["n_or_V", "gamma", "k"]):
        solved = cell[cell["solved"] == 1]
        rows.append(
            {
                "n_or_V": size,
                "gamma": gamma,
                "k": k,
                "root_gap": cell["root_gap_pct"].mean(),
                "opt_gap": cell["opt_gap_pct"].mean(),
                "solved": 100.0 * cell["solved"].mean(),
                "time": solved["time_s"].mean() if len(solved) else np.nan,
                "nodes": cell["nodes"].mean(),
            }
        )
    return pd.DataFrame(rows).sort_values(["n_or_V", "gamma", "k"])


def build_metric_figures(df: pd.DataFrame) -> dict:
    """One figure per metric plus the combined four-panel overview."""
    stats = _cell_stats(df)
    groups = list(stats.groupby(["n_or_V", "gamma"]))

    figures = {}
    for name, (ylabel, _) in METRICS.items():
        fig, ax = plt.subplots(figsize=(5.5, 4))
        for (size, gamma), series in groups:
            ax.plot(series["k"], series[name], marker="o",
                    label=_series_label(df, size, gamma))
        ax.set_xlabel("k")
        ax.set_ylabel(ylabel)
        ax.legend(title="size")
        ax.grid(alpha=0.3)
        fig.tight_layout()
        figures[name] = fig

    panels, axes = plt.subplots(2, 2, figsize=(11, 8))
    panel_order = ("root_gap", "opt_gap", "solved", "time")
    for ax, name in zip(axes.flat, panel_order):
        for (size, gamma), series in groups:
            ax.plot(series["k"], series[name], marker="o",
                    label=_series_label(df, size, gamma))
        ax.set_xlabel("k")
        ax.set_ylabel(METRICS[name][0])
        ax.grid(alpha=0.3)
    node_ax = axes.flat[3].twinx()
    for (size, gamma), series in groups:
        node_ax.plot(series["k"], series["nodes"], linestyle="--", alpha=0.6)
    node_ax.set_ylabel("processed nodes (dashed)")
    axes.flat[0].legend(title="size")
    panels.tight_layout()
    figures["metrics_panels"] = panels
    return figures


def solved_step_series(cell: pd.DataFrame):
    """Cumulative solved percentage over time; a nondecreasing step curve."""
    total = len(cell)
    times = np.sort(cell[cell["solved"] == 1]["time_s"].to_numpy())
    pct = 100.0 * np.arange(1, len(times) + 1) / total
    assert np.all(np.diff(pct) >= 0)
    return times, pct


def build_solved_over_time_figures(df: pd.DataFrame) -> dict:
    """Per problem size: one step curve per k of the solved share over time."""
    figures = {}
    for (size, gamma), chunk in df.groupby(["n_or_V", "gamma"]):
        fig, ax = plt.subplots(figsize=(5.5, 4))
        for k, cell in chunk.groupby("k"):
            times, pct = solved_step_series(cell)
            times = np.concatenate([[0.0], times])
            pct = np.concatenate([[0.0], pct])
            ax.step(times, pct, where="post", label=f"k={int(k)}")
        ax.set_xlabel("time (s)")
        ax.set_ylabel("instances solved (%)")
        ax.set_ylim(-2, 105)
        ax.legend()
        ax.grid(alpha=0.3)
        fig.tight_layout()
        figures[f"solved_over_time_{int(size)}_g{gamma:g}"] = fig
    return figures


def _save(figures: dict, out_dir, fmt: str) -> list:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, fig in figures.items():
        path = out_dir / f"{name}.{fmt}"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths


def plot_metrics(csv_path, out_dir, fmt: str = "png") -> list:
    """Write the per-metric images and the four-panel overview; returns paths."""
    return _save(build_metric_figures(load_results(csv_path)), out_dir, fmt)


def plot_solved_over_time(csv_path, out_dir, fmt: str = "png") -> list:
    """Write one solved-over-time figure per problem size; returns paths."""
    return _save(build_solved_over_time_figures(load_results(csv_path)), out_dir, fmt)
