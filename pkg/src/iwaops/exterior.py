"""Exterior algebra over oriented Euclidean R^6.

Forms are sparse: a map from strictly increasing index tuples (entries in
1..6) to coefficients.  Coefficients may be exact ``fractions.Fraction``
(used when reproducing connection tables) or floats (used in sweeps);
every operation preserves whatever scalar type it is handed.

Conventions, fixed once for the whole package:

* orientation: e1^e2^...^e6 is positive;
* evaluation: a basis k-form acts on frame vectors as the determinant,
  so e^{ij}(e_i, e_j) = 1 for i < j;
* the coframe basis multi-vectors are orthonormal for ``inner``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DegreeOverflow, FormError, FormParseError, GradeMismatch

DIM = 6
_FULL = tuple(range(1, DIM + 1))


def sort_with_sign(indices: Iterable[int]):
    """Sort a tuple of indices, returning (sign, sorted tuple).

    The sign is that of the sorting permutation; repeated indices give
    sign 0 (nilpotency of the wedge).
    """
    seq = list(indices)
    sign = 1
    # insertion sort; k <= 6 so quadratic cost is irrelevant
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(seq, seq[1:]):
        if a == b:
            return 0, tuple(seq)
    return sign, tuple(seq)


class KForm:
    """A degree-k exterior form with sparse coefficients.

    ``coeffs`` maps strictly increasing tuples to scalars; absent keys mean
    zero.  Instances are immutable by convention: all operations return new
    forms, so they are safe to share across worker threads.
    """

    __slots__ = ("grade", "coeffs")

    def __init__(self, grade: int, coeffs: Mapping | None = None):
        if not 0 <= grade <= DIM:
            raise FormError(f"grade must be in 0..{DIM}, got {grade}")
        clean = {}
        for key, val in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != grade:
                raise FormError(f"key {key} has length {len(key)}, grade is {grade}")
            if any(not 1 <= i <= DIM for i in key):
                raise FormError(f"indices must lie in 1..{DIM}: {key}")
            if any(a >= b for a, b in zip(key, key[1:])):
                raise FormError(f"indices must be strictly increasing: {key}")
            if val != 0:
                clean[key] = val
        object.__setattr__(self, "grade", grade)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("KForm is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, grade: int) -> "KForm":
        return cls(grade, {})

    @classmethod
    def from_terms(cls, grade: int, terms: Mapping) -> "KForm":
        """Build a form from (possibly unsorted) index tuples, fixing signs."""
        acc: dict = {}
        for key, val in terms.items():
            sign, skey = sort_with_sign(key)
            if sign == 0:
                continue
            acc[skey] = acc.get(skey, 0) + sign * val
        return cls(grade, acc)

    # -- ring structure --------------------------------------------------------

    def __add__(self, other: "KForm") -> "KForm":
        if self.grade != other.grade:
            raise GradeMismatch(f"cannot add grades {self.grade} and {other.grade}")
        acc = dict(self.coeffs)
        for key, val in other.coeffs.items():
            acc[key] = acc.get(key, 0) + val
        return KForm(self.grade, acc)

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __neg__(self) -> "KForm":
        return KForm(self.grade, {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, scalar) -> "KForm":
        return KForm(self.grade, {k: v * scalar for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KForm)
            and self.grade == other.grade
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.grade, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"KForm({self.grade}, {format_form(self)!r})"

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, *frame_indices: int):
        """Evaluate on frame vectors e_{i1}, ..., e_{ik} (1-based indices)."""
        if len(frame_indices) != self.grade:
            raise GradeMismatch(
                f"grade-{self.grade} form evaluated on {len(frame_indices)} vectors"
            )
        sign, key = sort_with_sign(frame_indices)
        if sign == 0:
            return 0
        return sign * self.coeffs.get(key, 0)

    def as_float(self) -> "KForm":
        return KForm(self.grade, {k: float(v) for k, v in self.coeffs.items()})

    def as_exact(self) -> "KForm":
        return KForm(self.grade, {k: Fraction(v) for k, v in self.coeffs.items()})


def basis_form(*indices: int) -> KForm:
    """The basis form e^{i1...ik}; unsorted indices are normalized with sign."""
    return KForm.from_terms(len(indices), {tuple(indices): 1})


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product.  Raises DegreeOverflow above the top degree."""
    grade = a.grade + b.grade
    if grade > DIM:
        raise DegreeOverflow(f"wedge of grades {a.grade} and {b.grade} exceeds {DIM}")
    acc: dict = {}
    for ka, va in a.coeffs.items():
        for kb, vb in b.coeffs.items():
            sign, key = sort_with_sign(ka + kb)
            if sign == 0:
                continue
            acc[key] = acc.get(key, 0) + sign * va * vb
    return KForm(grade, acc)


def hodge(a: KForm) -> KForm:
    """Hodge star for the orthonormal coframe, orientation e^{1...6} > 0."""
    acc = {}
    for key, val in a.coeffs.items():
        comp = tuple(i for i in _FULL if i not in key)
        sign, _ = sort_with_sign(key + comp)
        acc[comp] = sign * val
    return KForm(DIM - a.grade, acc)


def interior(v, a: KForm) -> KForm:
    """Interior product i_v a for a covector v (sequence of 6 components).

    Antiderivation of degree -1; a grade-0 input yields the zero form.
    """
    comps = list(v)
    if len(comps) != DIM:
        raise FormError(f"covector needs {DIM} components, got {len(comps)}")
    if a.grade == 0:
        return KForm.zero(0)
    acc: dict = {}
    for key, val in a.coeffs.items():
        for pos, idx in enumerate(key):
            c = comps[idx - 1]
            if c == 0:
                continue
            rest = key[:pos] + key[pos + 1:]
            sign = -1 if pos % 2 else 1
            acc[rest] = acc.get(rest, 0) + sign * c * val
    return KForm(a.grade - 1, acc)


def inner(a: KForm, b: KForm):
    """Inner product; the basis multi-indices are orthonormal."""
    if a.grade != b.grade:
        raise GradeMismatch(f"inner of grades {a.grade} and {b.grade}")
    small, large = (a.coeffs, b.coeffs) if len(a.coeffs) <= len(b.coeffs) else (b.coeffs, a.coeffs)
    total = 0
    for key, val in small.items():
        other = large.get(key)
        if other is not None:
            total += val * other
    return total


def norm_sq(a: KForm):
    return inner(a, a)


def norm(a: KForm) -> float:
    return math.sqrt(float(norm_sq(a)))


def is_simple(a: KForm, tol: float = 1e-9) -> bool:
    """True iff the 2-form is decomposable: ||a^a|| <= tol * ||a||^2."""
    if a.grade != 2:
        raise GradeMismatch(f"is_simple needs a 2-form, got grade {a.grade}")
    return norm(wedge(a, a)) <= tol * float(norm_sq(a))


# -- form literals -------------------------------------------------------------
#
# Grammar: a whitespace-separated sum of terms `[sign] [coefficient] eIJ...`,
# e.g. "e56", "+1.0 e13 -1.0 e24", "1/2 e12 + e34".  Indices need not be
# ascending; the parser normalizes the order with the permutation sign.

_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?P<coeff>\d+/\d+|(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)?"
    r"\s*\*?\s*e(?P<idx>\d+)"
)


def parse_form(text: str, exact: bool = False) -> KForm:
    """Parse a form literal.  With exact=True coefficients become Fractions."""
    pos = 0
    terms = []
    text = text.strip()
    if not text or text == "0":
        raise FormParseError("empty form literal")
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if m is None:
            raise FormParseError(f"cannot parse form literal at {text[pos:]!r}")
        pos = m.end()
        sign = -1 if m.group("sign") == "-" else 1
        coeff_str = m.group("coeff")
        if coeff_str is None:
            coeff = Fraction(sign) if exact else float(sign)
        elif exact:
            coeff = sign * Fraction(coeff_str)
        else:
            coeff = sign * (
                float(Fraction(coeff_str)) if "/" in coeff_str else float(coeff_str)
            )
        idx = tuple(int(ch) for ch in m.group("idx"))
        if any(not 1 <= i <= DIM for i in idx):
            raise FormParseError(f"index out of range 1..{DIM} in e{m.group('idx')}")
        if len(set(idx)) != len(idx):
            raise FormParseError(f"repeated index in e{m.group('idx')}")
        terms.append((idx, coeff))
    if pos != len(text):
        raise FormParseError(f"trailing junk in form literal: {text[pos:]!r}")
    grade = len(terms[0][0])
    if any(len(idx) != grade for idx, _ in terms):
        raise FormParseError("mixed grades in form literal")
    acc: dict = {}
    for idx, coeff in terms:
        sgn, key = sort_with_sign(idx)
        acc[key] = acc.get(key, 0) + sgn * coeff
    return KForm(grade, acc)


def _scalar_str(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return f"{value:.12g}"


def format_form(a: KForm) -> str:
    """Canonical literal: sorted keys, explicit signs, e.g. '+1 e13 -1 e24'."""
    if a.is_zero():
        return "0"
    parts = []
    for key in sorted(a.coeffs):
        val = a.coeffs[key]
        sign = "-" if (val < 0) else "+"
        mag = _scalar_str(-val if val < 0 else val)
        parts.append(f"{sign}{mag} e{''.join(str(i) for i in key)}")
    return " ".join(parts)
