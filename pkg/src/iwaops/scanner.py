"""Parametrized families of planes, classification sweeps, moment map.

Families mirror the parametrizations behind the classification theorem:

* standard-vertical: the two orientations of e5 ^ e6;
* horizontal-gr2k:   planes inside K = <e1..e4>;
* geodesic-spheres:  J1-invariant planes in K, <f, +/- J1 f>;
* type11:            f ^ e with f in K, e in <e5, e6>;
* vslice:            (f cos a1 + e sin a1) ^ ((f cos a3 + J1 f sin a3) cos a2
                     + d sin a2), the kernel of the rho projection;
* generic:           Haar-uniform planes.

Each point's randomness derives from (seed, index), so sweeps are
deterministic for a fixed seed regardless of worker count.  Angle
parameters snap to a uniform grid (default 24 steps, covering 0 and pi/2)
unless random_angles is set; sphere-valued parameters are always sampled.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import ZeroForm
from .exterior import KForm, inner
from .nilalgebra import ConnectionTable
from .ops import J1, OpsPoint, from_vectors, sample_uniform
from .torsion import (
    ClassSignature,
    intrinsic_torsion,
    naveira_project,
    signature_from_norms,
    tau_rank,
)

VARIANTS = (
    "standard-vertical",
    "horizontal-gr2k",
    "geodesic-spheres",
    "type11",
    "vslice",
    "generic",
)

_E12 = KForm(2, {(1, 2): 1.0})
_E34 = KForm(2, {(3, 4): 1.0})
_E56 = KForm(2, {(5, 6): 1.0})

_TWO_PI = 2.0 * np.pi


def _load_family_data() -> dict:
    with resources.files("iwaops.data").joinpath("families.json").open() as fh:
        return json.load(fh)


_FAMILY_DATA: dict | None = None


def family_data() -> dict:
    global _FAMILY_DATA
    if _FAMILY_DATA is None:
        _FAMILY_DATA = _load_family_data()
    return _FAMILY_DATA


def expected_superset(variant: str, table: str = "supersets") -> frozenset[str]:
    """Allowed signature labels for a family.

    "supersets" is the classification table as published; "corrected_supersets"
    replaces the vertical-foliation rows, whose trace component vanishes
    identically (the published table books the traceless-symmetric vertical
    block under the trace label).
    """
    return frozenset(family_data()[table][variant])


@dataclass(frozen=True)
class FamilySpec:
    """A family sweep request: variant, sample count, seed, extra params.

    params: "sign" (+1/-1) pins the geodesic-spheres component; "random_angles"
    switches angle parameters from the default grid to uniform sampling;
    "grid_res" sets the angle grid resolution (default 24).
    """

    variant: str
    count: int = 500
    seed: int = 0
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown family {self.variant!r}; choose from {VARIANTS}")
        if self.count < 1:
            raise ValueError("count must be >= 1")


def _angle(rng: np.random.Generator, params: Mapping) -> float:
    if params.get("random_angles"):
        return float(rng.uniform(0.0, _TWO_PI))
    res = int(params.get("grid_res", 24))
    return _TWO_PI * int(rng.integers(res)) / res


def _unit_in_k(rng: np.random.Generator) -> np.ndarray:
    while True:
        g = rng.standard_normal(4)
        n = np.linalg.norm(g)
        if n > 1e-8:
            v = np.zeros(6)
            v[:4] = g / n
            return v


def _kperp(phi: float) -> np.ndarray:
    v = np.zeros(6)
    v[4], v[5] = np.cos(phi), np.sin(phi)
    return v


def _point(spec: FamilySpec, index: int) -> OpsPoint:
    rng = np.random.default_rng([spec.seed, index])
    variant = spec.variant
    if variant == "standard-vertical":
        e5, e6 = np.zeros(6), np.zeros(6)
        e5[4], e6[5] = 1.0, 1.0
        return from_vectors(e5, e6) if index % 2 == 0 else from_vectors(e6, e5)
    if variant == "horizontal-gr2k":
        while True:
            try:
                return from_vectors(_unit_in_k(rng), _unit_in_k(rng))
            except ZeroForm:
                continue
    if variant == "geodesic-spheres":
        sign = spec.params.get("sign")
        if sign is None:
            sign = 1 if rng.integers(2) == 0 else -1
        f = _unit_in_k(rng)
        return from_vectors(f, sign * (J1 @ f))
    if variant == "type11":
        f = _unit_in_k(rng)
        return from_vectors(f, _kperp(_angle(rng, spec.params)))
    if variant == "vslice":
        while True:
            f = _unit_in_k(rng)
            a1 = _angle(rng, spec.params)
            a2 = _angle(rng, spec.params)
            a3 = _angle(rng, spec.params)
            e = _kperp(_angle(rng, spec.params))
            d = _kperp(_angle(rng, spec.params))
            v1 = np.cos(a1) * f + np.sin(a1) * e
            v2 = np.cos(a2) * (np.cos(a3) * f + np.sin(a3) * (J1 @ f)) + np.sin(a2) * d
            try:
                return from_vectors(v1, v2)
            except ZeroForm:
                continue
    # generic
    return sample_uniform(rng)


def generate(spec: FamilySpec) -> list[OpsPoint]:
    """Deterministic family sample; point i depends only on (seed, i)."""
    return [_point(spec, i) for i in range(spec.count)]


class MomentPoint(NamedTuple):
    x: float
    y: float
    z: float


def moment_map(p: OpsPoint) -> MomentPoint:
    """Projection of the unit Plucker form onto (e12, e34, e56)."""
    w = p.plucker
    return MomentPoint(
        float(inner(w, _E12)), float(inner(w, _E34)), float(inner(w, _E56))
    )


class PointResult(NamedTuple):
    index: int
    point: OpsPoint
    signature: ClassSignature
    rank: int
    moment: MomentPoint
    residual: float


def analyze_point(p: OpsPoint, c: ConnectionTable, tol: float, index: int = 0) -> PointResult:
    t = intrinsic_torsion(p, c)
    comps = naveira_project(t)
    sig = signature_from_norms(comps.norms, tol)
    return PointResult(index, p, sig, tau_rank(t), moment_map(p), t.residual)


@dataclass(frozen=True)
class SweepReport:
    family: FamilySpec
    tolerance: float
    histogram: dict[str, int]
    moment_cloud: list[MomentPoint]
    violations: list[dict]
    results: list[PointResult] = field(repr=False)

    def observed_union(self) -> frozenset[str]:
        labels: set[str] = set()
        for r in self.results:
            labels.update(r.signature.active)
        return frozenset(labels)

    def to_json(self) -> dict:
        return {
            "family": {
                "variant": self.family.variant,
                "count": self.family.count,
                "seed": self.family.seed,
                "params": dict(self.family.params),
            },
            "tolerance": self.tolerance,
            "histogram": dict(sorted(self.histogram.items())),
            "moment_cloud": [[m.x, m.y, m.z] for m in self.moment_cloud],
            "violations": self.violations,
        }


def sweep(
    spec: FamilySpec,
    c: ConnectionTable,
    tol: float = 1e-7,
    threads: int = 1,
    table: str = "supersets",
) -> SweepReport:
    """Classify every family member and flag signatures outside the expected set.

    Violations are data, not exceptions; a passing run has none.
    """
    points = generate(spec)
    allowed = expected_superset(spec.variant, table)

    def work(args):
        i, p = args
        return analyze_point(p, c, tol, i)

    items = list(enumerate(points))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, items))
    else:
        results = [work(it) for it in items]

    histogram: dict[str, int] = {}
    violations = []
    cloud = []
    for r in results:
        key = r.signature.key()
        histogram[key] = histogram.get(key, 0) + 1
        cloud.append(r.moment)
        if not set(r.signature.active) <= allowed:
            from .exterior import format_form

            violations.append(
                {
                    "index": r.index,
                    "plucker": format_form(r.point.plucker),
                    "observed": list(r.signature.active),
                    "expected": sorted(allowed),
                }
            )
    return SweepReport(spec, tol, histogram, cloud, violations, results)


def write_moment_csv(path, results: Iterable[PointResult]) -> int:
    """CSV with header x,y,z,signature,rank; floats in %.12e."""
    count = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "z", "signature", "rank"])
        for r in results:
            writer.writerow(
                [
                    f"{r.moment.x:.12e}",
                    f"{r.moment.y:.12e}",
                    f"{r.moment.z:.12e}",
                    r.signature.key(),
                    r.rank,
                ]
            )
            count += 1
    return count


@dataclass(frozen=True)
class MomentCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class MomentReport:
    checks: list[MomentCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[MomentCheck]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


DEFAULT_MOMENT_COUNTS = {
    "standard-vertical": 2,
    "geodesic-spheres": 500,
    "horizontal-gr2k": 500,
    "type11": 500,
    "vslice": 500,
    "uniform": 10000,
}


def verify_moment_images(
    c: ConnectionTable, tol: float = 1e-9, counts: Mapping | None = None, seed: int = 0
) -> MomentReport:
    """Check every family's moment image against the polytope theorem.

    standard-vertical maps to (0, 0, +/-1); geodesic spheres onto the
    segments {z = 0, x + y = +/-1, xy >= 0}; K-planes into the square
    {z = 0, |x| + |y| <= 1}; type (1,1) planes to the origin; the vslice
    cloud is z-symmetric (two-sided binomial test at 5%); and all uniform
    samples land inside the octahedron |x| + |y| + |z| <= 1.
    """
    from scipy.stats import binomtest

    cts = dict(DEFAULT_MOMENT_COUNTS)
    if counts:
        cts.update(counts)
    checks = []

    def clouds(variant, count, **params):
        spec = FamilySpec(variant, count=count, seed=seed, params=params)
        return [moment_map(p) for p in generate(spec)]

    sv = clouds("standard-vertical", cts["standard-vertical"])
    dev = max(
        max(abs(m.x), abs(m.y), abs(abs(m.z) - 1.0)) for m in sv
    )
    checks.append(
        MomentCheck(
            "standard-vertical at (0,0,+/-1)", dev <= tol, f"max deviation {dev:.3e}"
        )
    )

    gs = clouds("geodesic-spheres", cts["geodesic-spheres"])
    dev = max(max(abs(m.z), abs(abs(m.x + m.y) - 1.0)) for m in gs)
    signs_ok = all(m.x * m.y >= -tol for m in gs)
    checks.append(
        MomentCheck(
            "geodesic-spheres on segments x+y=+/-1, z=0, xy>=0",
            dev <= tol and signs_ok,
            f"max deviation {dev:.3e}, sign condition {signs_ok}",
        )
    )

    hk = clouds("horizontal-gr2k", cts["horizontal-gr2k"])
    devz = max(abs(m.z) for m in hk)
    sq = max(abs(m.x) + abs(m.y) for m in hk)
    checks.append(
        MomentCheck(
            "horizontal-gr2k in square |x|+|y|<=1, z=0",
            devz <= tol and sq <= 1.0 + 1e-9,
            f"max |z| {devz:.3e}, max |x|+|y| {sq:.12f}",
        )
    )

    t11 = clouds("type11", cts["type11"])
    dev = max(max(abs(m.x), abs(m.y), abs(m.z)) for m in t11)
    checks.append(
        MomentCheck("type11 at the origin", dev <= 1e-12, f"max coordinate {dev:.3e}")
    )

    vs = clouds("vslice", cts["vslice"])
    oct_dev = max(abs(m.x) + abs(m.y) + abs(m.z) for m in vs)
    n_plus = sum(1 for m in vs if m.z > 1e-12)
    n_minus = sum(1 for m in vs if m.z < -1e-12)
    n_signed = n_plus + n_minus
    pvalue = binomtest(n_plus, n_signed, 0.5).pvalue if n_signed else 0.0
    checks.append(
        MomentCheck(
            "vslice z-symmetric inside the octahedron",
            oct_dev <= 1.0 + 1e-9 and n_plus > 0 and n_minus > 0 and pvalue >= 0.05,
            f"max |x|+|y|+|z| {oct_dev:.12f}, z-signs {n_plus}/{n_minus}, p={pvalue:.3f}",
        )
    )

    rng_pts = generate(FamilySpec("generic", count=cts["uniform"], seed=seed))
    big = max(
        abs(m.x) + abs(m.y) + abs(m.z) for m in (moment_map(p) for p in rng_pts)
    )
    checks.append(
        MomentCheck(
            "uniform samples inside the octahedron",
            big <= 1.0 + 1e-9,
            f"max |x|+|y|+|z| {big:.12f} over {cts['uniform']} samples",
        )
    )
    return MomentReport(checks)
