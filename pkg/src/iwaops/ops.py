"""Orthogonal almost-product structures as oriented 2-planes in R^6.

A point is an oriented orthonormal pair (v1, v2) together with its Plucker
2-form v1 ^ v2; the plane is the vertical space V, its orthogonal
complement the horizontal space H.  Everything here is float-backed: sweeps
need speed, and the exact backend lives in the exterior/nilalgebra layer.

The distribution kernel K = <e1..e4> (kernel of d on 1-forms) and its
complement <e5, e6> organize the (m, n) type of a plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NotSimple, ZeroForm
from .exterior import DIM, KForm, inner, is_simple, norm, parse_form

# J1, the orthogonal complex structure on K with J1 e1 = e2, J1 e3 = e4.
J1 = np.zeros((6, 6))
J1[1, 0], J1[0, 1] = 1.0, -1.0
J1[3, 2], J1[2, 3] = 1.0, -1.0

# Projectors onto K = <e1..e4> and its complement.
PK = np.diag([1.0, 1.0, 1.0, 1.0, 0.0, 0.0])
PK_PERP = np.diag([0.0, 0.0, 0.0, 0.0, 1.0, 1.0])

# The self-dual basis of Lambda^2_+ K used by the rho projection.
BETA1 = parse_form("e12 + e34")
BETA2 = parse_form("e13 + e42")
BETA3 = parse_form("e14 + e23")

_SQRT2 = float(np.sqrt(2.0))


def form_to_matrix(a: KForm) -> np.ndarray:
    """2-form -> antisymmetric matrix M with M[i, j] = a(e_{i+1}, e_{j+1})."""
    m = np.zeros((DIM, DIM))
    for (i, j), val in a.coeffs.items():
        m[i - 1, j - 1] = float(val)
        m[j - 1, i - 1] = -float(val)
    return m


def vectors_to_plucker(v1: np.ndarray, v2: np.ndarray) -> KForm:
    coeffs = {}
    for i in range(DIM):
        for j in range(i + 1, DIM):
            c = v1[i] * v2[j] - v1[j] * v2[i]
            if c != 0.0:
                coeffs[(i + 1, j + 1)] = float(c)
    return KForm(2, coeffs)


@dataclass(frozen=True, eq=False)
class OpsPoint:
    """An oriented 2-plane: orthonormal pair plus its Plucker form."""

    v1: np.ndarray
    v2: np.ndarray
    plucker: KForm = field(repr=False)

    def __post_init__(self):
        self.v1.setflags(write=False)
        self.v2.setflags(write=False)

    def reversed(self) -> "OpsPoint":
        """The same plane with the opposite orientation."""
        return from_vectors(self.v2, self.v1)


def from_vectors(v1, v2) -> OpsPoint:
    """Build a point from two independent vectors (Gram-Schmidt applied)."""
    v1 = np.array(v1, dtype=float)
    v2 = np.array(v2, dtype=float)
    n1 = np.linalg.norm(v1)
    if n1 < 1e-12:
        raise ZeroForm("v1 is numerically zero")
    u1 = v1 / n1
    w = v2 - (u1 @ v2) * u1
    n2 = np.linalg.norm(w)
    if n2 < 1e-12:
        raise ZeroForm("v1 and v2 are numerically dependent")
    u2 = w / n2
    return OpsPoint(u1, u2, vectors_to_plucker(u1, u2))


def from_plucker(a: KForm, tol: float = 1e-9) -> OpsPoint:
    """Recover an oriented orthonormal pair from a simple 2-form.

    The S^1 gauge inside the plane is fixed deterministically: v1 is the
    normalized projection onto the plane of the first standard basis vector
    with non-negligible projection, and v2 completes (v1, v2) so that
    v1 ^ v2 reproduces the normalized input.
    """
    n = norm(a)
    if n == 0.0:
        raise ZeroForm("zero 2-form does not define a plane")
    if not is_simple(a, tol):
        raise NotSimple("2-form is not simple at the given tolerance")
    m = form_to_matrix(a) / n
    proj = -(m @ m)  # orthogonal projector onto the plane, for unit simple a
    v1 = None
    for k in range(DIM):
        cand = proj[:, k]
        cn = np.linalg.norm(cand)
        if cn > 1e-3:
            v1 = cand / cn
            break
    if v1 is None:  # pragma: no cover - excluded by the simplicity check
        raise NotSimple("projector is numerically degenerate")
    v2 = -(m @ v1)
    v2 = v2 / np.linalg.norm(v2)
    # re-orthogonalize against v1 for hygiene
    v2 = v2 - (v1 @ v2) * v1
    v2 = v2 / np.linalg.norm(v2)
    return OpsPoint(v1, v2, vectors_to_plucker(v1, v2))


def from_json(obj, tol: float = 1e-9) -> OpsPoint:
    """Accepts {"plucker": "<form literal>"} or {"v1": [...6...], "v2": [...]}."""
    if "plucker" in obj:
        return from_plucker(parse_form(obj["plucker"]), tol)
    return from_vectors(obj["v1"], obj["v2"])


@dataclass(frozen=True, eq=False)
class Splitting:
    """The adapted frame of a point: V/H projectors and orthonormal frames.

    The H-frame comes from stabilized Gram-Schmidt over the standard basis,
    so its orientation is canonical for the subspace H alone.  This makes
    the self-dual/anti-self-dual split of Lambda^2 H independent of the
    plane's orientation, which the vertical-family classification requires;
    h_orientation records the sign of det(v1, v2, h1..h4) relative to
    e1^...^e6.
    """

    p_v: np.ndarray
    p_h: np.ndarray
    v_frame: np.ndarray  # shape (2, 6)
    h_frame: np.ndarray  # shape (4, 6)
    h_orientation: int


def adapted_splitting(p: OpsPoint) -> Splitting:
    v_frame = np.vstack([p.v1, p.v2])
    p_v = v_frame.T @ v_frame
    p_h = np.eye(DIM) - p_v
    hs = []
    for k in range(DIM):
        u = p_h[:, k].copy()
        for h in hs:
            u -= (h @ u) * h
        nu = np.linalg.norm(u)
        if nu > 1e-8:
            hs.append(u / nu)
        if len(hs) == 4:
            break
    h_frame = np.vstack(hs)
    full = np.vstack([v_frame, h_frame])
    h_orientation = 1 if np.linalg.det(full) > 0 else -1
    return Splitting(p_v, p_h, v_frame, h_frame, h_orientation)


class MNType(NamedTuple):
    m: int
    n: int


def mn_type(p: OpsPoint, tol: float = 1e-9) -> MNType:
    """(dim plane ^ K, dim plane ^ K-perp) by singular-value thresholds.

    A singular value of the restricted projector within tol of 1 counts as
    one intersection dimension; the pair is one of (0,0), (0,1), (1,0),
    (1,1), (2,0), (0,2).
    """
    basis = np.vstack([p.v1, p.v2]).T  # 6 x 2
    m = int(np.sum(np.linalg.svd(PK @ basis, compute_uv=False) >= 1.0 - tol))
    n = int(np.sum(np.linalg.svd(PK_PERP @ basis, compute_uv=False) >= 1.0 - tol))
    return MNType(m, n)


def rho_projection(p: OpsPoint) -> tuple[float, float]:
    """Components of the Plucker form on the orthonormalized (beta2, beta3).

    Vanishing characterizes the class V of vertically integrable planes
    (those admitting a closed complementary 4-form).
    """
    w = p.plucker
    return (
        float(inner(w, BETA2)) / _SQRT2,
        float(inner(w, BETA3)) / _SQRT2,
    )


def is_j1_invariant(p: OpsPoint, tol: float = 1e-9) -> bool:
    """True iff the plane lies in K and is stable under J1."""
    for v in (p.v1, p.v2):
        if np.linalg.norm(PK_PERP @ v) > tol:
            return False
    v_frame = np.vstack([p.v1, p.v2])
    p_v = v_frame.T @ v_frame
    for v in (p.v1, p.v2):
        jv = J1 @ v
        if np.linalg.norm(jv - p_v @ jv) > tol:
            return False
    return True


def sample_uniform(rng: np.random.Generator) -> OpsPoint:
    """Haar-uniform oriented 2-plane: two Gaussian vectors, Gram-Schmidt."""
    while True:
        g = rng.standard_normal((2, DIM))
        try:
            return from_vectors(g[0], g[1])
        except ZeroForm:
            continue


def transform(g: np.ndarray, p: OpsPoint) -> OpsPoint:
    """Push a point forward by an orthogonal matrix acting on the frame."""
    return from_vectors(g @ p.v1, g @ p.v2)
