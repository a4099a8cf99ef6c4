"""Figure rendering for CLI reports: line plots saved straight to files."""

from __future__ import annotations

import itertools
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_STYLES = ("-", ":", "--", "-.")


def save_series_plot(
    x: Sequence[float],
    series: Mapping[str, np.ndarray],
    path: str,
    xlabel: str,
    ylabel: str,
    title: str = "",
    logx: bool = False,
    logy: bool = False,
) -> None:
    """One labeled curve per entry of ``series``, cycled line styles."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for (label, ys), style in zip(series.items(), itertools.cycle(_STYLES)):
        ax.plot(np.asarray(x), np.asarray(ys, dtype=float), style, label=label, linewidth=1.5)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
