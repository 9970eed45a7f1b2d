"""Intrinsic torsion of an almost-product structure and its Naveira split.

For a plane form w the torsion is tau = nabla w.  Metricity forces each
slot of nabla w into the orbit tangent space V* ^ H*, so tau reduces to a
6 x 2 x 4 array in the adapted frame with slot order

    (frame direction: v1, v2, h1..h4) x (V* factor) x (H* factor).

The seven irreducible blocks and their dimensions inside the 48-dimensional
reduced space are

    W1 = Lambda^2 V* (x) H*     dim  4      W4+ = Lambda^2_+ H* (x) V*  dim 6
    W2 = S^2_0 V* (x) H*        dim  8      W4- = Lambda^2_- H* (x) V*  dim 6
    W3 = trace(V V) (x) H*      dim  4      W5  = S^2_0 H* (x) V*       dim 18
                                            W6  = trace(H H) (x) V*     dim 2

W3 and W6 are the trace blocks; reading them this way is what makes the
seven projectors orthogonal and complete.  The H (x) V (x) H block is
re-ordered to V (x) H (x) H by a plain transpose, no sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InternalInvariantViolation
from .exterior import KForm, hodge, norm
from .nilalgebra import ConnectionTable, CoTensorField, StructureTable, ce_differential, nabla_form
from .ops import OpsPoint, Splitting, adapted_splitting, form_to_matrix

LABELS = ("W1", "W2", "W3", "W4plus", "W4minus", "W5", "W6")

BLOCK_DIMENSIONS = {
    "W1": 4,
    "W2": 8,
    "W3": 4,
    "W4plus": 6,
    "W4minus": 6,
    "W5": 18,
    "W6": 2,
}

RESIDUAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class TorsionTensor:
    """tau = nabla w, raw per-frame forms plus the adapted-frame reduction."""

    raw: CoTensorField
    reduced: np.ndarray  # shape (6, 2, 4)
    residual: float
    splitting: Splitting = field(repr=False)

    def norm(self) -> float:
        return float(np.linalg.norm(self.reduced))


def intrinsic_torsion(p: OpsPoint, c: ConnectionTable) -> TorsionTensor:
    """Compute tau and reduce it to the adapted frame.

    The Lambda^2 V and Lambda^2 H parts of each slot must vanish (the
    covariant derivative is tangent to the orbit); their norm is the
    residual, and exceeding RESIDUAL_TOL * ||tau|| raises
    InternalInvariantViolation since metricity guarantees the identity.
    """
    s = adapted_splitting(p)
    raw = nabla_form(c, p.plucker)
    mats = np.stack([form_to_matrix(f) for f in raw.frame_forms])  # (6, 6, 6)
    frame = np.vstack([s.v_frame, s.h_frame])  # rows are adapted vectors
    adapted = np.einsum("ai,ijk->ajk", frame, mats)
    reduced = np.einsum("vj,ajk,hk->avh", s.v_frame, adapted, s.h_frame)
    vv = np.einsum("j,ajk,k->a", s.v_frame[0], adapted, s.v_frame[1])
    hh = np.einsum("bj,ajk,ck->abc", s.h_frame, adapted, s.h_frame)
    iu = np.triu_indices(4, k=1)
    residual = float(np.sqrt(np.sum(vv**2) + np.sum(hh[:, iu[0], iu[1]] ** 2)))
    total = float(np.sqrt(raw.norm_sq()))
    if residual > RESIDUAL_TOL * total + 1e-15:
        raise InternalInvariantViolation(
            f"orbit-tangency residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e} * {total:.3e}"
        )
    return TorsionTensor(raw, reduced, residual, s)


# 4-dimensional Hodge dual on antisymmetric matrices, oriented h1^h2^h3^h4.
_DUAL_PAIRS = (((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2)))


def _dual4(m: np.ndarray) -> np.ndarray:
    out = np.zeros_like(m)
    for (a, b), (c, d) in _DUAL_PAIRS:
        out[..., a, b] = m[..., c, d]
        out[..., b, a] = -m[..., c, d]
        out[..., c, d] = m[..., a, b]
        out[..., d, c] = -m[..., a, b]
    return out


def split_blocks(reduced: np.ndarray) -> dict[str, np.ndarray]:
    """Orthogonal projection of a reduced tensor onto the seven blocks.

    Returns full (6, 2, 4) arrays that sum to the input exactly.
    """
    parts = {label: np.zeros_like(reduced) for label in LABELS}
    a = reduced[:2]  # (u, alpha, beta): V (x) V (x) H
    sym = 0.5 * (a + a.transpose(1, 0, 2))
    parts["W1"][:2] = a - sym
    tr = a[0, 0, :] + a[1, 1, :]
    w3 = np.zeros_like(a)
    w3[0, 0, :] = tr / 2.0
    w3[1, 1, :] = tr / 2.0
    parts["W3"][:2] = w3
    parts["W2"][:2] = sym - w3

    c = reduced[2:].transpose(1, 0, 2)  # (alpha, a, beta): V (x) H (x) H
    sym2 = 0.5 * (c + c.transpose(0, 2, 1))
    anti2 = c - sym2
    tr2 = np.einsum("aii->a", c)
    w6 = np.zeros_like(c)
    for i in range(4):
        w6[:, i, i] = tr2 / 4.0
    parts["W6"][2:] = (w6).transpose(1, 0, 2)
    parts["W5"][2:] = (sym2 - w6).transpose(1, 0, 2)
    dual = _dual4(anti2)
    parts["W4plus"][2:] = (0.5 * (anti2 + dual)).transpose(1, 0, 2)
    parts["W4minus"][2:] = (0.5 * (anti2 - dual)).transpose(1, 0, 2)
    return parts


@dataclass(frozen=True, eq=False)
class NaveiraComponents:
    """Norms and projected tensors of the seven irreducible components."""

    norms: dict[str, float]
    parts: dict[str, np.ndarray] = field(repr=False)

    def total_norm(self) -> float:
        return float(np.sqrt(sum(v**2 for v in self.norms.values())))


def naveira_project(t: TorsionTensor, s: Splitting | None = None) -> NaveiraComponents:
    """Project tau onto the seven blocks; s defaults to the tensor's splitting."""
    if s is not None and s is not t.splitting:
        if not np.allclose(s.h_frame, t.splitting.h_frame, atol=1e-12):
            raise ValueError("splitting does not match the tensor's adapted frame")
    parts = split_blocks(t.reduced)
    norms = {label: float(np.linalg.norm(parts[label])) for label in LABELS}
    return NaveiraComponents(norms, parts)


@dataclass(frozen=True)
class ClassSignature:
    """The set of components above threshold: norm > tol * max(1, ||tau||)."""

    active: tuple[str, ...]
    tol: float
    norms: dict[str, float] = field(compare=False)

    def key(self) -> str:
        return "+".join(self.active) if self.active else "none"


def signature_from_norms(norms: dict[str, float], tol: float) -> ClassSignature:
    total = float(np.sqrt(sum(v**2 for v in norms.values())))
    cut = tol * max(1.0, total)
    active = tuple(sorted(label for label in LABELS if norms[label] > cut))
    return ClassSignature(active, tol, dict(norms))


def classify(p: OpsPoint, c: ConnectionTable, tol: float = 1e-7) -> ClassSignature:
    comps = naveira_project(intrinsic_torsion(p, c))
    return signature_from_norms(comps.norms, tol)


def tau_rank(t: TorsionTensor, tol: float = 1e-9) -> int:
    """Numerical rank of tau as a linear map T_pM -> V* (x) H*."""
    sv = np.linalg.svd(t.reduced.reshape(6, 8), compute_uv=False)
    if sv.size == 0:
        return 0
    return int(np.sum(sv > tol * max(1.0, sv[0])))


def tau_kernel(t: TorsionTensor, tol: float = 1e-9) -> list[np.ndarray]:
    """Orthonormal basis (standard coordinates) of ker tau; 6 - rank vectors."""
    # reduced.reshape(6, 8).T maps direction coefficients (adapted frame) to
    # V* (x) H*; the kernel is spanned by its trailing right-singular vectors.
    mat = t.reduced.reshape(6, 8)
    _, sv, vt = np.linalg.svd(mat.T, full_matrices=True)
    rank = int(np.sum(sv > tol * max(1.0, sv[0] if sv.size else 1.0)))
    frame = np.vstack([t.splitting.v_frame, t.splitting.h_frame])
    return [vt[i] @ frame for i in range(rank, 6)]


def alternation_check(
    p: OpsPoint, c: ConnectionTable, s: StructureTable
) -> tuple[float, float]:
    """(||alt(nabla w) - dw||, ||alt(nabla *w) - d*w||); zero when torsion-free."""
    w = p.plucker
    dw = ce_differential(w, s)
    alt_w = nabla_form(c, w).alternation()
    star = hodge(w)
    dstar = ce_differential(star, s)
    alt_star = nabla_form(c, star).alternation()
    return norm(alt_w - dw), norm(alt_star - dstar)


def frobenius_integrable_h(p: OpsPoint, s: StructureTable, tol: float = 1e-7) -> bool:
    """The 4-dimensional H distribution is integrable iff d(v1^v2) = 0."""
    return norm(ce_differential(p.plucker, s)) <= tol


def frobenius_integrable_v(p: OpsPoint, s: StructureTable, tol: float = 1e-7) -> bool:
    """The 2-dimensional V distribution is integrable iff d(*(v1^v2)) = 0."""
    return norm(ce_differential(hodge(p.plucker), s)) <= tol


def projector_matrix(label: str) -> np.ndarray:
    """The 48x48 matrix of one block projector on the reduced space."""
    mat = np.zeros((48, 48))
    for col in range(48):
        basis = np.zeros(48)
        basis[col] = 1.0
        mat[:, col] = split_blocks(basis.reshape(6, 2, 4))[label].reshape(48)
    return mat


def coupled_stabilizer_element(rng: np.random.Generator) -> np.ndarray:
    """Sample the stabilizer of tau(e5^e6): (SU(2)_- x SO(2)) x SO(2) coupled.

    The anti-self-dual SU(2) acts on K fixing beta2 and beta3; the two
    circles are coupled by rotating (beta2, beta3) by theta (the flow of
    J1 at parameter theta/2) while rotating (e5, e6) by the same theta.
    """
    from scipy.linalg import expm

    from .ops import J1, form_to_matrix
    from .exterior import parse_form

    asd = [
        form_to_matrix(parse_form(lit)).T
        for lit in ("e12 -1 e34", "e13 +1 e24", "e14 -1 e23")
    ]
    a = rng.standard_normal(3)
    theta = float(rng.uniform(0.0, 2.0 * np.pi))
    g = expm(a[0] * asd[0] + a[1] * asd[1] + a[2] * asd[2]) @ expm(0.5 * theta * J1)
    out = np.eye(6)
    out[:4, :4] = g[:4, :4]
    ct, st = np.cos(theta), np.sin(theta)
    out[4, 4], out[4, 5], out[5, 4], out[5, 5] = ct, -st, st, ct
    return out
