"""The acceptance suite behind `iwaops verify`.

Each criterion is a named check with its tolerances pinned here.  One
criterion, itv-sweep-type11, is expected to fail: the published table
books the vertical-foliation trace class for type-(1,1) planes, but the
trace of the vertical block equals the horizontal part of [v1, v2], which
vanishes identically on vertical foliations (the (1,1) plane's two spans
commute since <e5, e6> is central).  The component that actually appears
is the traceless-symmetric one, and itv-sweep-type11-corrected checks the
corrected row.  See the README for the full derivation.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import combinations

import numpy as np

from .exterior import DIM, KForm, basis_form, hodge, inner, norm, parse_form
from .nilalgebra import (
    ConnectionTable,
    StructureTable,
    ce_differential,
    levi_civita,
    nabla_form,
)
from .ops import (
    adapted_splitting,
    from_plucker,
    mn_type,
    rho_projection,
    sample_uniform,
    transform,
)
from .scanner import FamilySpec, generate, sweep, verify_moment_images
from .torsion import (
    LABELS,
    alternation_check,
    classify,
    coupled_stabilizer_element,
    frobenius_integrable_h,
    frobenius_integrable_v,
    intrinsic_torsion,
    naveira_project,
    projector_matrix,
    split_blocks,
    tau_rank,
)

SWEEP_SEED = 5
MIXED_SEED = 11
STABILIZER_SEED = 17


def fixtures() -> dict:
    with resources.files("iwaops.data").joinpath("fixtures.json").open() as fh:
        return json.load(fh)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name} ({self.seconds:.2f}s): {self.detail}"


HALF = Fraction(1, 2)

# Nonzero entries (i, j, k) -> (nabla_{e_i} e^j)(e_k), 0-based, of the
# invariant Levi-Civita connection; the symmetric lines pair (i, k) slots,
# the antisymmetric ones flip sign.
CONNECTION_FIXTURE = {
    (2, 0, 4): HALF, (4, 0, 2): HALF, (3, 0, 5): HALF, (5, 0, 3): HALF,
    (2, 1, 5): HALF, (5, 1, 2): HALF, (3, 1, 4): -HALF, (4, 1, 3): -HALF,
    (0, 2, 4): -HALF, (4, 2, 0): -HALF, (1, 2, 5): -HALF, (5, 2, 1): -HALF,
    (0, 3, 5): -HALF, (5, 3, 0): -HALF, (1, 3, 4): HALF, (4, 3, 1): HALF,
    (0, 4, 2): HALF, (2, 4, 0): -HALF, (3, 4, 1): HALF, (1, 4, 3): -HALF,
    (0, 5, 3): HALF, (3, 5, 0): -HALF, (1, 5, 2): HALF, (2, 5, 1): -HALF,
}


def _check_connection(s: StructureTable) -> tuple[bool, str]:
    c = levi_civita(s)
    errors = 0
    for i in range(DIM):
        for j in range(DIM):
            for k in range(DIM):
                expected = CONNECTION_FIXTURE.get((i, j, k), 0)
                if c.entry(i, j, k) != expected:
                    errors += 1
    if errors:
        return False, f"{errors} table entries differ from the fixture"
    return True, "all 216 rational entries match the six-line fixture exactly"


def _check_structure(s: StructureTable) -> tuple[bool, str]:
    defects = s.jacobi_defects()
    if any(d > 0 for d in defects):
        return False, f"Jacobi failure: ||d(d e^k)|| = {defects}"
    worst = 0.0
    for k in range(DIM + 1):
        for key in combinations(range(1, DIM + 1), k):
            dd = ce_differential(ce_differential(basis_form(*key), s), s)
            worst = max(worst, norm(dd))
    if worst > 0:
        return False, f"d^2 != 0 on a basis form: {worst}"
    if ce_differential(basis_form(5), s) != parse_form("e13 +1 e42", exact=True):
        return False, "d e5 != e13 + e42"
    if ce_differential(basis_form(6), s) != parse_form("e14 +1 e23", exact=True):
        return False, "d e6 != e14 + e23"
    return True, "d^2 = 0 on all 64 basis forms; generator differentials exact"


def _check_standard_vertical(c: ConnectionTable) -> tuple[bool, str]:
    p = from_plucker(parse_form("e56"))
    t = intrinsic_torsion(p, c)
    comps = naveira_project(t)
    total = t.norm()
    others = max(v for k, v in comps.norms.items() if k != "W4plus")
    rank = tau_rank(t)
    ok = (
        comps.norms["W4plus"] > 0.1
        and others < 1e-10 * total
        and rank == 4
    )
    return ok, f"active={{W4plus}}, stray norms {others:.2e} < 1e-10*||tau||, rank {rank}"


def _run_sweeps(c: ConnectionTable, table: str):
    per_family = {}
    for variant in ("standard-vertical", "geodesic-spheres", "horizontal-gr2k", "type11", "vslice"):
        rep = sweep(FamilySpec(variant, count=500, seed=SWEEP_SEED), c, tol=1e-7, table=table)
        per_family[variant] = rep
    return per_family


def _sweep_criteria(c: ConnectionTable) -> list[CriterionResult]:
    out = []
    t0 = time.time()
    reports = _run_sweeps(c, "supersets")
    elapsed = time.time() - t0
    for variant, rep in reports.items():
        nv = len(rep.violations)
        ok = nv == 0
        detail = f"500 points, {nv} violations vs published row"
        if not ok:
            sample = rep.violations[0]
            detail += f"; e.g. observed {sample['observed']} (trace class W3 is booked for the traceless W2)"
        out.append(
            CriterionResult(f"itv-sweep-{variant}", ok, detail, elapsed / len(reports))
        )
    t1 = time.time()
    corrected = _run_sweeps(c, "corrected_supersets")
    bad = sum(len(r.violations) for r in corrected.values())
    out.append(
        CriterionResult(
            "itv-sweep-type11-corrected",
            bad == 0,
            f"all five families, corrected table: {bad} violations",
            time.time() - t1,
        )
    )
    runtime_ok = elapsed < 30.0
    out.append(
        CriterionResult(
            "itv-sweep-runtime",
            runtime_ok,
            f"published-table sweeps took {elapsed:.1f}s (< 30s)",
            elapsed,
        )
    )
    return out


def _check_genericity(c: ConnectionTable) -> tuple[bool, str]:
    fix = fixtures()["genericity"]
    spec = FamilySpec("generic", count=fix["samples"], seed=fix["seed"])
    tol = fix["tolerance"]
    good = 0
    for p in generate(spec):
        t = intrinsic_torsion(p, c)
        comps = naveira_project(t)
        if all(v > tol * t.norm() for v in comps.norms.values()) and tau_rank(t) == 6:
            good += 1
    fraction = good / fix["samples"]
    ok = fraction >= 0.99 and abs(fraction - fix["fraction"]) < 1e-12
    return ok, f"fraction {fraction:.3f} (fixture {fix['fraction']}, threshold 0.99)"


def _check_projectors(c: ConnectionTable) -> tuple[bool, str]:
    rng = np.random.default_rng(123)
    worst_parseval = 0.0
    for _ in range(200):
        x = rng.standard_normal((6, 2, 4))
        parts = split_blocks(x)
        again = {k: split_blocks(v)[k] for k, v in parts.items()}
        for k in LABELS:
            if not np.allclose(parts[k], again[k], atol=1e-12):
                return False, f"projector {k} not idempotent"
        for a in LABELS:
            for b in LABELS:
                if a < b and abs(np.sum(parts[a] * parts[b])) > 1e-12:
                    return False, f"projectors {a}, {b} not orthogonal"
        total = sum(np.sum(v**2) for v in parts.values())
        worst_parseval = max(worst_parseval, abs(total - np.sum(x**2)) / np.sum(x**2))
    if worst_parseval > 1e-9:
        return False, f"Parseval defect {worst_parseval:.2e}"
    dims = {k: round(float(np.trace(projector_matrix(k)))) for k in LABELS}
    if dims != fixtures()["block_dimensions"]:
        return False, f"projector ranks {dims} differ from the fixture"
    rng = np.random.default_rng(321)
    worst = 0.0
    for _ in range(1000):
        p = sample_uniform(rng)
        t = intrinsic_torsion(p, c)  # raises on residual violation
        worst = max(worst, t.residual / max(t.norm(), 1e-30))
    ok = worst < 1e-9
    return ok, (
        f"200 tensors: idempotent, orthogonal, Parseval defect {worst_parseval:.1e}; "
        f"ranks {tuple(dims[k] for k in LABELS)}; "
        f"max orbit-tangency residual {worst:.1e} over 1000 points"
    )


def _mixed_points():
    pts = []
    for variant in ("horizontal-gr2k", "geodesic-spheres", "type11", "vslice", "generic"):
        pts.extend(generate(FamilySpec(variant, count=200, seed=MIXED_SEED)))
    return pts


def _check_integrability(c: ConnectionTable, s: StructureTable) -> tuple[bool, str]:
    worst_alt = 0.0
    for p in _mixed_points():
        if frobenius_integrable_h(p, s, 1e-7) != (mn_type(p) == (2, 0)):
            return False, f"H-integrability mismatch at {p.v1}, {p.v2}"
        rho = float(np.hypot(*rho_projection(p)))
        if frobenius_integrable_v(p, s, 1e-7) != (rho < 1e-7):
            return False, f"V-integrability mismatch, |rho| = {rho:.2e}"
        a, b = alternation_check(p, c, s)
        worst_alt = max(worst_alt, a, b)
    ok = worst_alt < 1e-9
    return ok, (
        "1000 mixed points: integrable_h <=> (m,n)=(2,0), "
        f"integrable_v <=> rho = 0; max alternation defect {worst_alt:.1e}"
    )


def _check_moment(c: ConnectionTable) -> tuple[bool, str]:
    report = verify_moment_images(c)
    if report.passed:
        return True, "; ".join(ch.name for ch in report.checks) + " all hold"
    lines = "; ".join(f"{ch.name}: {ch.detail}" for ch in report.failures())
    return False, lines


def _check_stabilizer(c: ConnectionTable) -> tuple[bool, str]:
    rng = np.random.default_rng(STABILIZER_SEED)
    base = from_plucker(parse_form("e56"))
    for _ in range(100):
        g = coupled_stabilizer_element(rng)
        sig = classify(transform(g, base), c)
        if sig.active != ("W4plus",):
            return False, f"signature {sig.active} under a coupled rotation"
    return True, "100 coupled-group samples all classify as {W4plus}"


def _timed(name: str, fn, *args) -> CriterionResult:
    t0 = time.time()
    try:
        passed, detail = fn(*args)
    except Exception as exc:  # a corrupted algebra may break later criteria
        passed, detail = False, f"error: {exc}"
    return CriterionResult(name, passed, detail, time.time() - t0)


def run_all(algebra: StructureTable | None = None) -> list[CriterionResult]:
    """Run every acceptance criterion against the given structure table."""
    s = algebra if algebra is not None else StructureTable.iwasawa()
    results = [_timed("structure-equations", _check_structure, s)]
    conn = _timed("connection-table", _check_connection, s)
    if conn.seconds >= 1.0:
        conn = CriterionResult(
            conn.name, False, conn.detail + f"; runtime {conn.seconds:.2f}s >= 1s", conn.seconds
        )
    results.append(conn)
    try:
        c = levi_civita(s).as_float()
    except Exception as exc:
        results.append(
            CriterionResult("levi-civita", False, f"connection build failed: {exc}", 0.0)
        )
        return results
    results.append(_timed("standard-vertical-torsion", _check_standard_vertical, c))
    t0 = time.time()
    try:
        results.extend(_sweep_criteria(c))
    except Exception as exc:
        results.append(
            CriterionResult("itv-sweeps", False, f"error: {exc}", time.time() - t0)
        )
    results.append(_timed("genericity", _check_genericity, c))
    results.append(_timed("projector-algebra", _check_projectors, c))
    results.append(_timed("integrability", _check_integrability, c, s))
    results.append(_timed("moment-theorem", _check_moment, c))
    results.append(_timed("stabilizer-sampling", _check_stabilizer, c))
    return results


# The one documented-red criterion; everything else must pass.
EXPECTED_FAILURES = ("itv-sweep-type11",)
