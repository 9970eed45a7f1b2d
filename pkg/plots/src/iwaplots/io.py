"""Strict readers for the CLI's moment-cloud CSV and sweep-report JSON."""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass

import numpy as np

HEADER = ["x", "y", "z", "signature", "rank"]


class CloudFormatError(ValueError):
    """Malformed cloud file; the message carries the offending row number."""


@dataclass(frozen=True)
class CloudFile:
    """One family's moment cloud: points, signatures, ranks."""

    name: str
    points: np.ndarray  # shape (n, 3)
    signatures: list[str]
    ranks: list[int]

    def __len__(self) -> int:
        return len(self.signatures)


def read_cloud(path: str) -> CloudFile:
    name = os.path.splitext(os.path.basename(path))[0]
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != HEADER:
        raise CloudFormatError(f"{path}: row 1: header must be {','.join(HEADER)}")
    points, signatures, ranks = [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 5:
            raise CloudFormatError(f"{path}: row {lineno}: expected 5 columns, got {len(row)}")
        try:
            xyz = [float(row[i]) for i in range(3)]
            rank = int(row[4])
        except ValueError as exc:
            raise CloudFormatError(f"{path}: row {lineno}: {exc}") from None
        if not all(math.isfinite(v) for v in xyz):
            raise CloudFormatError(f"{path}: row {lineno}: non-finite coordinate")
        points.append(xyz)
        signatures.append(row[3])
        ranks.append(rank)
    return CloudFile(name, np.array(points).reshape(-1, 3), signatures, ranks)


def read_sweep(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if "histogram" not in data:
        raise CloudFormatError(f"{path}: not a sweep report (no histogram)")
    return data
