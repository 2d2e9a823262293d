"""Exact exterior algebra over (n+1)-dimensional rational space.

Multivectors are sparse maps from strictly increasing 1-based index
tuples to exact scalars (int or Fraction).  The scalar product makes the
basis monomials orthonormal, contraction is the adjoint of wedging, and
the Hodge star is contraction into the volume form.  All operations are
exact; norms are only ever materialised as enclosures of the square root
of the exact squared norm.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import linalg
from .numerics import RealEnclosure

Scalar = Union[int, Fraction]
IndexTuple = Tuple[int, ...]


class DimensionMismatch(ValueError):
    """Operands live in different ambient dimensions or degrees."""


def merge_sign(left: IndexTuple, right: IndexTuple) -> int:
    """Sign of sorting the concatenation left+right (0 if indices repeat)."""
    inversions = 0
    for i in left:
        for j in right:
            if i == j:
                return 0
            if i > j:
                inversions += 1
    return -1 if inversions & 1 else 1


class Multivector:
    """Element of the degree-r exterior power of (n+1)-space."""

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim: int, degree: int, coeffs: Optional[Dict[IndexTuple, Scalar]] = None):
        if not 0 <= degree <= dim:
            raise ValueError(f"degree {degree} out of range for dimension {dim}")
        self.dim = dim
        self.degree = degree
        clean: Dict[IndexTuple, Scalar] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index tuple {idx} has wrong length for degree {degree}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index tuple {idx} is not strictly increasing")
            if idx and not (1 <= idx[0] and idx[-1] <= dim):
                raise ValueError(f"index {idx} outside 1..{dim}")
            if c != 0:
                clean[idx] = c
        self.coeffs = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> "Multivector":
        return cls(dim, degree, {})

    @classmethod
    def scalar(cls, dim: int, value: Scalar) -> "Multivector":
        return cls(dim, 0, {(): value})

    @classmethod
    def basis(cls, dim: int, indices: Iterable[int]) -> "Multivector":
        idx = tuple(indices)
        return cls(dim, len(idx), {idx: 1})

    @classmethod
    def from_vector(cls, components: Sequence[Scalar]) -> "Multivector":
        dim = len(components)
        return cls(dim, 1, {(i + 1,): c for i, c in enumerate(components) if c != 0})

    @classmethod
    def top(cls, dim: int) -> "Multivector":
        return cls.basis(dim, range(1, dim + 1))

    # -- basics -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.degree == other.degree
            and all(Fraction(v) == Fraction(other.coeffs.get(k, 0)) for k, v in self.coeffs.items())
            and all(k in self.coeffs for k in other.coeffs)
        )

    def __hash__(self):
        return hash((self.dim, self.degree, tuple(sorted((k, Fraction(v)) for k, v in self.coeffs.items()))))

    def __repr__(self) -> str:
        if self.is_zero():
            return f"Multivector({self.dim}, deg={self.degree}, 0)"
        terms = " + ".join(f"{v}*e{''.join(map(str, k))}" for k, v in sorted(self.coeffs.items()))
        return f"Multivector({self.dim}, deg={self.degree}, {terms})"

    def items(self) -> List[Tuple[IndexTuple, Scalar]]:
        return sorted(self.coeffs.items())

    def coefficient(self, idx: IndexTuple) -> Scalar:
        return self.coeffs.get(tuple(idx), 0)

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check_same_space(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Multivector(self.dim, self.degree, out)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __neg__(self) -> "Multivector":
        return Multivector(self.dim, self.degree, {k: -v for k, v in self.coeffs.items()})

    def scale(self, s: Scalar) -> "Multivector":
        if s == 0:
            return Multivector.zero(self.dim, self.degree)
        return Multivector(self.dim, self.degree, {k: v * s for k, v in self.coeffs.items()})

    def _check_same_space(self, other: "Multivector", same_degree: bool = True):
        if self.dim != other.dim:
            raise DimensionMismatch(f"ambient dimensions differ: {self.dim} vs {other.dim}")
        if same_degree and self.degree != other.degree:
            raise DimensionMismatch(f"degrees differ: {self.degree} vs {other.degree}")

    # -- integrality ------------------------------------------------------

    def is_integer(self) -> bool:
        return all(Fraction(v).denominator == 1 for v in self.coeffs.values())

    def content(self) -> int:
        """gcd of the (integer) coefficients; 0 for the zero multivector."""
        g = 0
        for v in self.coeffs.values():
            f = Fraction(v)
            if f.denominator != 1:
                raise ValueError("content of a non-integer multivector")
            g = gcd(g, abs(int(f)))
        return g

    def is_primitive(self) -> bool:
        return self.content() == 1

    def primitive_part(self) -> "Multivector":
        """Divide out the content and normalise the leading sign to +."""
        if self.is_zero():
            raise ValueError("zero multivector has no primitive part")
        g = self.content()
        items = {k: int(Fraction(v)) // g for k, v in self.coeffs.items()}
        lead = items[min(items)]
        if lead < 0:
            items = {k: -v for k, v in items.items()}
        return Multivector(self.dim, self.degree, items)

    # -- the exterior operations ------------------------------------------

    def wedge(self, other: "Multivector") -> "Multivector":
        self._check_same_space(other, same_degree=False)
        r, s = self.degree, other.degree
        if r + s > self.dim:
            return Multivector.zero(self.dim, min(r + s, self.dim))
        out: Dict[IndexTuple, Scalar] = {}
        for i_idx, a in self.coeffs.items():
            for j_idx, b in other.coeffs.items():
                sign = merge_sign(i_idx, j_idx)
                if sign == 0:
                    continue
                key = tuple(sorted(i_idx + j_idx))
                out[key] = out.get(key, 0) + sign * a * b
        return Multivector(self.dim, r + s, out)

    def dot(self, other: "Multivector") -> Scalar:
        self._check_same_space(other)
        small, large = (self.coeffs, other.coeffs)
        if len(large) < len(small):
            small, large = large, small
        total: Scalar = 0
        for k, v in small.items():
            w = large.get(k)
            if w is not None:
                total += v * w
        return total

    def norm_sq(self) -> Scalar:
        return self.dot(self)

    def norm(self, prec: int = 128) -> RealEnclosure:
        return RealEnclosure.point(Fraction(self.norm_sq())).sqrt(prec)

    def contract(self, other: "Multivector") -> "Multivector":
        """Internal product self ⌟ other (degree of self <= degree of other).

        Adjoint of wedging: dot(Z, self ⌟ other) = dot(Z ∧ self, other)
        for every Z of the complementary degree.
        """
        self._check_same_space(other, same_degree=False)
        s, r = self.degree, other.degree
        if s > r:
            raise DimensionMismatch(f"cannot contract degree {s} into degree {r}")
        out: Dict[IndexTuple, Scalar] = {}
        for j_idx, b in self.coeffs.items():
            j_set = set(j_idx)
            for i_idx, a in other.coeffs.items():
                if not j_set.issubset(i_idx):
                    continue
                k_idx = tuple(x for x in i_idx if x not in j_set)
                sign = merge_sign(k_idx, j_idx)
                out[k_idx] = out.get(k_idx, 0) + sign * a * b
        return Multivector(self.dim, r - s, out)

    def hodge(self) -> "Multivector":
        """Hodge dual: contraction into the volume form."""
        return self.contract(Multivector.top(self.dim))

    # -- serialization ------------------------------------------------------

    def to_payload(self) -> dict:
        return {
            "ambient_dim": self.dim,
            "degree": self.degree,
            "coeffs": [[list(k), str(Fraction(v))] for k, v in self.items()],
        }

    @classmethod
    def from_payload(cls, d: dict) -> "Multivector":
        coeffs = {}
        for k, v in d["coeffs"]:
            f = Fraction(v)
            coeffs[tuple(int(i) for i in k)] = int(f) if f.denominator == 1 else f
        return cls(int(d["ambient_dim"]), int(d["degree"]), coeffs)


def wedge(x: Multivector, y: Multivector) -> Multivector:
    return x.wedge(y)


def dot(x: Multivector, y: Multivector) -> Scalar:
    return x.dot(y)


def norm_sq(x: Multivector) -> Scalar:
    return x.norm_sq()


def contract(y: Multivector, x: Multivector) -> Multivector:
    return y.contract(x)


def hodge(x: Multivector) -> Multivector:
    return x.hodge()


def contraction_compose_check(y: Multivector, y2: Multivector, x: Multivector) -> bool:
    """(y ∧ y2) ⌟ x  ==  y ⌟ (y2 ⌟ x), checked exactly."""
    if y.degree + y2.degree > x.degree:
        raise DimensionMismatch("combined contraction degree exceeds target degree")
    return y.wedge(y2).contract(x) == y.contract(y2.contract(x))


def wedge_kernel(x: Multivector) -> List[List[int]]:
    """Primitive integer basis of {v : v ∧ x = 0}."""
    rows = []
    images = []
    for i in range(1, x.dim + 1):
        images.append(Multivector.basis(x.dim, (i,)).wedge(x))
    keys = sorted({k for img in images for k in img.coeffs})
    if not keys:
        # x wedges everything to zero (degree n or the zero vector handled upstream)
        return [[int(i == j) for j in range(x.dim)] for i in range(x.dim)]
    for k in keys:
        rows.append([Fraction(img.coeffs.get(k, 0)) for img in images])
    return linalg.integer_kernel_basis(rows, x.dim)


def basis_multivectors(dim: int, degree: int) -> List[Multivector]:
    """All basis monomials of the given degree, in lexicographic order."""
    from itertools import combinations

    return [Multivector.basis(dim, c) for c in combinations(range(1, dim + 1), degree)]


# ---------------------------------------------------------------------------
# enclosure-valued operations
#
# A vector with RealEnclosure components (typically the homogeneous vector
# of a point with irrational coordinates) is wedged into / contracted from
# an exact multivector; the result is a dict of enclosure coefficients.


def wedge_vector_enclosures(y: Sequence[RealEnclosure], x: Multivector) -> Dict[IndexTuple, RealEnclosure]:
    """Coefficients of y ∧ x for an enclosure vector y (component i ↔ index i+1)."""
    if len(y) != x.dim:
        raise DimensionMismatch("vector length does not match ambient dimension")
    out: Dict[IndexTuple, RealEnclosure] = {}
    for i_idx, a in x.coeffs.items():
        for pos in range(x.dim):
            j = pos + 1
            sign = merge_sign((j,), i_idx)
            if sign == 0:
                continue
            key = tuple(sorted((j,) + i_idx))
            term = y[pos] * (sign * a)
            out[key] = out[key] + term if key in out else term
    return out


def contract_vector_enclosures(y: Sequence[RealEnclosure], x: Multivector) -> Dict[IndexTuple, RealEnclosure]:
    """Coefficients of y ⌟ x for an enclosure vector y."""
    if len(y) != x.dim:
        raise DimensionMismatch("vector length does not match ambient dimension")
    out: Dict[IndexTuple, RealEnclosure] = {}
    for i_idx, a in x.coeffs.items():
        for j in i_idx:
            k_idx = tuple(v for v in i_idx if v != j)
            sign = merge_sign(k_idx, (j,))
            term = y[j - 1] * (sign * a)
            out[k_idx] = out[k_idx] + term if k_idx in out else term
    return out


def dot_vector_enclosures(y: Sequence[RealEnclosure], x: Multivector) -> RealEnclosure:
    """y · x for an enclosure vector y and an exact degree-1 multivector x."""
    if x.degree != 1:
        raise DimensionMismatch("dot_vector_enclosures needs a degree-1 multivector")
    total = RealEnclosure.point(0)
    for (j,), a in x.coeffs.items():
        total = total + y[j - 1] * a
    return total


def enclosure_coeffs_norm_sq(coeffs: Dict[IndexTuple, RealEnclosure]) -> RealEnclosure:
    total = RealEnclosure.point(0)
    for enc in coeffs.values():
        total = total + enc.square()
    return total
