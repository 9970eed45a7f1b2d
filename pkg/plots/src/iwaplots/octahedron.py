"""The moment polytope figure: clouds inside the wireframe octahedron."""

from __future__ import annotations

from itertools import combinations

import matplotlib.pyplot as plt
import numpy as np

from .io import CloudFile

VERTICES = {
    "A": (1.0, 0.0, 0.0),
    "B": (0.0, 1.0, 0.0),
    "C": (0.0, 0.0, 1.0),
    "-A": (-1.0, 0.0, 0.0),
    "-B": (0.0, -1.0, 0.0),
    "-C": (0.0, 0.0, -1.0),
}


def _octahedron_edges():
    verts = list(VERTICES.values())
    for p, q in combinations(verts, 2):
        if np.allclose(np.array(p) + np.array(q), 0.0):
            continue  # antipodal pairs are diagonals, not edges
        yield np.array([p, q])


def render_octahedron(clouds: list[CloudFile], out: str | None = None):
    """Scatter the clouds inside the octahedron; one color per family.

    Returns (fig, ax); saves to `out` when given.  Axes span [-1, 1]^3.
    """
    if not clouds:
        raise ValueError("need at least one cloud file")
    fig = plt.figure(figsize=(7, 6))
    ax = fig.add_subplot(projection="3d")
    for edge in _octahedron_edges():
        ax.plot(edge[:, 0], edge[:, 1], edge[:, 2], color="0.6", lw=0.8, zorder=1)
    for label, (x, y, z) in VERTICES.items():
        ax.text(x * 1.08, y * 1.08, z * 1.08, label, fontsize=11)
    cmap = plt.get_cmap("tab10")
    for k, cloud in enumerate(clouds):
        pts = cloud.points
        ax.scatter(
            pts[:, 0], pts[:, 1], pts[:, 2],
            s=6, alpha=0.6, color=cmap(k % 10), label=cloud.name, zorder=2,
        )
    ax.set_xlim3d(-1.0, 1.0)
    ax.set_ylim3d(-1.0, 1.0)
    ax.set_zlim3d(-1.0, 1.0)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    if out is not None:
        fig.savefig(out, dpi=150)
    return fig, ax
