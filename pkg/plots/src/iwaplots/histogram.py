"""Signature histogram from a sweep report."""

from __future__ import annotations

import matplotlib.pyplot as plt


def render_histogram(sweep: dict, out: str | None = None):
    """Bar chart of active-set counts; returns (fig, ax)."""
    hist = sweep["histogram"]
    keys = sorted(hist)
    counts = [hist[k] for k in keys]
    family = sweep.get("family", {}).get("variant", "sweep")
    fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(keys)), 4))
    ax.bar(range(len(keys)), counts, color="tab:blue")
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels(keys, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("count")
    ax.set_title(f"{family}: {sum(counts)} points")
    fig.tight_layout()
    if out is not None:
        fig.savefig(out, dpi=150)
    return fig, ax
