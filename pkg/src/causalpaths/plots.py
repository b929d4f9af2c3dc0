"""Figure rendering for analysis reports.

Each function takes already-computed report data and writes one PNG next
to the delimited output it illustrates. The Agg backend is forced so
report generation works on headless machines.
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_PNG_META = {"Software": "causalpaths"}  # fixed so re-runs are byte-identical


def _save(fig, out_path: str | Path) -> None:
    fig.tight_layout()
    fig.savefig(out_path, dpi=150, metadata=_PNG_META)
    plt.close(fig)


def plot_edge_activity(
    rows: Sequence[tuple[int, int]], out_path: str | Path, title: str = ""
) -> None:
    """Active-edge counts per time bin over the observation period."""
    fig, ax = plt.subplots(figsize=(8, 3.2))
    if rows:
        starts = [r[0] for r in rows]
        counts = [r[1] for r in rows]
        width = starts[1] - starts[0] if len(starts) > 1 else 1
        ax.fill_between(starts, counts, step="post", alpha=0.6)
        ax.step(starts, counts, where="post", lw=0.8)
        ax.set_xlim(0, starts[-1] + width)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("active edges")
    if title:
        ax.set_title(title)
    _save(fig, out_path)


def plot_length_probabilities(
    rows: Sequence[tuple[float, int, int, float]],
    out_path: str | Path,
    max_length: int = 5,
    title: str = "",
) -> None:
    """Path-length probabilities as a function of the waiting time bound.

    One curve per path length up to ``max_length``; rows are
    ``(delta, length, count, probability)`` sweep entries.
    """
    series: dict[int, list[tuple[float, float]]] = {}
    for delta, length, _count, prob in rows:
        if length <= max_length:
            series.setdefault(length, []).append((delta, prob))
    fig, ax = plt.subplots(figsize=(6, 4))
    for length in sorted(series):
        pts = sorted(series[length])
        ax.plot([p[0] for p in pts], [p[1] for p in pts],
                marker=".", ms=3, lw=1, label=f"l = {length}")
    ax.set_xlabel("waiting time bound (s)")
    ax.set_ylabel("P(l)")
    ax.set_ylim(0, 1)
    if series:
        ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    _save(fig, out_path)


def plot_density_timeline(
    timeline: Sequence[tuple[int, float]], out_path: str | Path, title: str = ""
) -> None:
    """Causally connected fraction of node pairs over time."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if timeline:
        ax.plot([p[0] for p in timeline], [p[1] for p in timeline], lw=1.2)
        ax.set_xlim(0, timeline[-1][0] or 1)
    ax.set_ylim(0, 1.02)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("accessibility density")
    if title:
        ax.set_title(title)
    _save(fig, out_path)
