"""The Iwasawa Lie algebra and its invariant calculus.

Structure equations are stored as the value of d on each coframe generator.
The Chevalley-Eilenberg differential extends them to all grades by the
Leibniz rule, and the Levi-Civita connection of the invariant metric is
produced by the Koszul formula for a left-invariant orthonormal frame.

Sign conventions (pinned; the connection acceptance test depends on them):

* de^k(e_i, e_j) = -e^k([e_i, e_j]),
* 2-forms evaluate as e^{ij}(e_i, e_j) = 1,
* the connection is stored on the coframe:
  nabla[i][j][k] = (nabla_{e_i} e^j)(e_k)   (all indices 0-based here).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exterior import DIM, KForm, basis_form, hodge, norm, parse_form, wedge

IWASAWA_JSON = {"d": {"e5": "+1 e13 +1 e42", "e6": "+1 e14 +1 e23"}}


class StructureTable:
    """d on the six generators of a 6-dimensional nilpotent coframe."""

    __slots__ = ("d_of_generator",)

    def __init__(self, d_of_generator: Sequence[KForm]):
        forms = tuple(d_of_generator)
        if len(forms) != DIM:
            raise ValueError(f"need {DIM} generator differentials, got {len(forms)}")
        for f in forms:
            if f.grade != 2:
                raise ValueError("generator differentials must be 2-forms")
        self.d_of_generator = forms

    @classmethod
    def iwasawa(cls, exact: bool = True) -> "StructureTable":
        return cls.from_json(IWASAWA_JSON, exact=exact)

    @classmethod
    def abelian(cls) -> "StructureTable":
        return cls([KForm.zero(2)] * DIM)

    @classmethod
    def from_json(cls, obj, exact: bool = True) -> "StructureTable":
        """Schema: {"d": {"e5": "+1 e13 +1 e42", ...}}; omitted generators closed."""
        if isinstance(obj, str):
            obj = json.loads(obj)
        table = obj.get("d", {})
        forms = []
        for k in range(1, DIM + 1):
            literal = table.get(f"e{k}")
            forms.append(
                KForm.zero(2) if literal is None else parse_form(literal, exact=exact)
            )
        return cls(forms)

    def to_json(self) -> dict:
        from .exterior import format_form

        d = {
            f"e{k + 1}": format_form(f)
            for k, f in enumerate(self.d_of_generator)
            if not f.is_zero()
        }
        return {"d": d}

    def jacobi_defects(self) -> list[float]:
        """Norm of d(d e^k) for each generator; all zero iff Jacobi holds."""
        return [norm(ce_differential(f, self)) for f in self.d_of_generator]

    def is_integrable(self, tol: float = 0.0) -> bool:
        return all(defect <= tol for defect in self.jacobi_defects())


def ce_differential(a: KForm, s: StructureTable) -> KForm:
    """Chevalley-Eilenberg differential, extended to all grades by Leibniz.

    d(e^{i1...ik}) = sum_j (-1)^{j-1} (d e^{ij}) ^ e^{i1...^ij...ik}; the
    grade-2 factor commutes past 1-forms, so it can be moved to the front.
    A top-grade input returns the zero form.
    """
    if a.grade >= DIM:
        return KForm.zero(DIM)
    result = KForm.zero(a.grade + 1)
    for key, val in a.coeffs.items():
        for pos, idx in enumerate(key):
            dgen = s.d_of_generator[idx - 1]
            if dgen.is_zero():
                continue
            rest = KForm(a.grade - 1, {key[:pos] + key[pos + 1:]: val})
            sign = -1 if pos % 2 else 1
            result = result + sign * wedge(dgen, rest)
    return result


class ConnectionTable:
    """Levi-Civita derivatives of the coframe as a 6x6x6 scalar table.

    nabla[i][j][k] = (nabla_{e_i} e^j)(e_k), 0-based; scalars may be exact.
    Metric compatibility reads nabla[i][j][k] = -nabla[i][k][j].
    """

    __slots__ = ("nabla", "_coframe_derivs", "_array")

    def __init__(self, nabla):
        table = tuple(tuple(tuple(row) for row in plane) for plane in nabla)
        if len(table) != DIM or any(
            len(p) != DIM or any(len(r) != DIM for r in p) for p in table
        ):
            raise ValueError("connection table must be 6x6x6")
        object.__setattr__(self, "nabla", table)
        object.__setattr__(self, "_coframe_derivs", {})
        object.__setattr__(self, "_array", None)

    def __setattr__(self, name, value):
        raise AttributeError("ConnectionTable is immutable")

    def entry(self, i: int, j: int, k: int):
        return self.nabla[i][j][k]

    def coframe_derivative(self, i: int, j: int) -> KForm:
        """nabla_{e_i} e^j as a 1-form (0-based i, j)."""
        key = (i, j)
        cached = self._coframe_derivs.get(key)
        if cached is None:
            row = self.nabla[i][j]
            cached = KForm(1, {(k + 1,): row[k] for k in range(DIM) if row[k] != 0})
            self._coframe_derivs[key] = cached
        return cached

    def as_array(self) -> np.ndarray:
        if self._array is None:
            arr = np.array(
                [[[float(v) for v in row] for row in plane] for plane in self.nabla]
            )
            object.__setattr__(self, "_array", arr)
        return self._array

    def as_float(self) -> "ConnectionTable":
        return ConnectionTable(
            [[[float(v) for v in row] for row in plane] for plane in self.nabla]
        )


def levi_civita(s: StructureTable) -> ConnectionTable:
    """Koszul construction for a left-invariant orthonormal coframe.

    Brackets are recovered from d via c_ijk = <[e_i,e_j], e_k> = -de^k(e_i,e_j),
    then 2 Gamma_ijk = c_ijk - c_jki + c_kij and nabla[i][j][k] = -Gamma_{ikj}.
    Exact input scalars give an exact table.
    """
    half = Fraction(1, 2)
    c = [[[0] * DIM for _ in range(DIM)] for _ in range(DIM)]
    for k in range(DIM):
        dk = s.d_of_generator[k]
        for i in range(DIM):
            for j in range(DIM):
                val = dk(i + 1, j + 1)
                if val != 0:
                    c[i][j][k] = -val
    gamma = [[[0] * DIM for _ in range(DIM)] for _ in range(DIM)]
    for i in range(DIM):
        for j in range(DIM):
            for k in range(DIM):
                raw = c[i][j][k] - c[j][k][i] + c[k][i][j]
                if raw != 0:
                    gamma[i][j][k] = half * raw
    nabla = [
        [[-gamma[i][k][j] for k in range(DIM)] for j in range(DIM)]
        for i in range(DIM)
    ]
    return ConnectionTable(nabla)


@dataclass(frozen=True)
class CoTensorField:
    """An invariant tensor in T* (x) Lambda^k: one grade-k form per frame slot."""

    grade: int
    frame_forms: tuple

    def __post_init__(self):
        if len(self.frame_forms) != DIM:
            raise ValueError(f"need {DIM} frame slots")
        for f in self.frame_forms:
            if f.grade != self.grade:
                raise ValueError("slot grade mismatch")

    def norm_sq(self) -> float:
        from .exterior import norm_sq as fns

        return float(sum(fns(f) for f in self.frame_forms))

    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq()))

    def alternation(self) -> KForm:
        """sum_i e^i ^ (slot i); equals d of the underlying form when torsion-free."""
        acc = KForm.zero(self.grade + 1)
        for i, f in enumerate(self.frame_forms):
            if not f.is_zero():
                acc = acc + wedge(basis_form(i + 1), f)
        return acc

    def hodge(self) -> "CoTensorField":
        return CoTensorField(DIM - self.grade, tuple(hodge(f) for f in self.frame_forms))


def nabla_form(c: ConnectionTable, a: KForm) -> CoTensorField:
    """Covariant derivative of an invariant form, one slot per frame direction.

    nabla_{e_i} e^{i1...ik} = sum_j (-1)^{j-1} (nabla_{e_i} e^{ij}) ^ e^{...^ij...},
    the sign coming from moving the derived 1-form to the front.
    """
    if a.grade < 1:
        raise ValueError("nabla_form needs grade >= 1")
    slots = []
    for i in range(DIM):
        acc = KForm.zero(a.grade)
        for key, val in a.coeffs.items():
            for pos, idx in enumerate(key):
                dcov = c.coframe_derivative(i, idx - 1)
                if dcov.is_zero():
                    continue
                rest = KForm(a.grade - 1, {key[:pos] + key[pos + 1:]: val})
                sign = -1 if pos % 2 else 1
                acc = acc + sign * wedge(dcov, rest)
        slots.append(acc)
    return CoTensorField(a.grade, tuple(slots))
