"""Console entry points: plot-octahedron and plot-histogram."""

from __future__ import annotations

import argparse
import sys

from .io import CloudFormatError, read_cloud, read_sweep
from .histogram import render_histogram
from .octahedron import render_octahedron


def main_octahedron(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-octahedron",
        description="Render moment clouds inside the wireframe octahedron.",
    )
    parser.add_argument("csv", nargs="+", help="moment cloud CSV files")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        clouds = [read_cloud(path) for path in args.csv]
    except (CloudFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    render_octahedron(clouds, args.out)
    print(f"wrote {args.out}: {sum(len(c) for c in clouds)} points from {len(clouds)} cloud(s)")
    return 0


def main_histogram(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-histogram",
        description="Render the signature histogram of a sweep report.",
    )
    parser.add_argument("sweep", help="sweep report JSON")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        sweep = read_sweep(args.sweep)
    except (CloudFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    render_histogram(sweep, args.out)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main_octahedron())
