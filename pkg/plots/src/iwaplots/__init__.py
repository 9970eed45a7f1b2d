"""Figure scripts for iwaops outputs: moment clouds and sweep histograms.

These are offline renderers: they read the CSV/JSON files the CLI writes
and produce static images, nothing else.
"""

import matplotlib

matplotlib.use("Agg")

from .io import CloudFile, CloudFormatError, read_cloud, read_sweep  # noqa: E402
from .octahedron import render_octahedron  # noqa: E402
from .histogram import render_histogram  # noqa: E402

__all__ = [
    "CloudFile",
    "CloudFormatError",
    "read_cloud",
    "read_sweep",
    "render_octahedron",
    "render_histogram",
]
