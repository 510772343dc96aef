"""Margin-vs-index line charts as reproducible SVG."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["margin_plot"]


def margin_plot(
    series: Mapping[str, Sequence[tuple[int, float]]],
    path: str | Path,
    title: str = "",
    tol: float | None = None,
) -> None:
    """Write one line per series; log scale when every margin is positive."""
    with plt.rc_context({"svg.hashsalt": "skorokhod", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        positive = True
        for name, pts in series.items():
            if not pts:
                continue
            xs = [n for n, _ in pts]
            ys = [m for _, m in pts]
            positive = positive and min(ys) > 0
            ax.plot(xs, ys, label=name, linewidth=1.2)
        if tol is not None:
            ax.axhline(tol, color="black", linestyle="--", linewidth=0.8, label=f"tol={tol:g}")
        if positive and (tol is None or tol > 0):
            ax.set_yscale("log")
        ax.set_xlabel("index n")
        ax.set_ylabel("margin")
        if title:
            ax.set_title(title)
        ax.legend(fontsize=7, loc="best")
        fig.tight_layout()
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
