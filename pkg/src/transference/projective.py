"""Rational projective subspaces, heights, and projective distances.

A d-dimensional rational subvariety of P^n is stored through the
primitive integer Plücker vector of its (d+1)-dimensional linear cone in
(n+1)-space; its height is the Euclidean norm of that vector.  Distances
between points, and from a point to a subvariety, are quotients of wedge
norms, evaluated as enclosures when coordinates are irrational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from . import linalg
from .exterior import (
    Multivector,
    enclosure_coeffs_norm_sq,
    wedge_kernel,
    wedge_vector_enclosures,
)
from .numerics import (
    PrecisionExhausted,
    RealDescription,
    RealEnclosure,
    eval_description,
    precision_ladder,
)


class DependentVectors(ValueError):
    """Input vectors were linearly dependent where independence is required."""


@dataclass(frozen=True)
class ThetaPoint:
    """A point of R^n with homogeneous coordinate vector (1, t_1, ..., t_n).

    Coordinates are real-number descriptions, evaluated to enclosures on
    demand.  Whether 1, t_1, ..., t_n are independent over the rationals
    is certified (or waived) by the catalog, not here.
    """

    coords: Tuple[RealDescription, ...]

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def dim(self) -> int:
        return self.n + 1

    def y_enclosures(self, prec: int) -> List[RealEnclosure]:
        return [RealEnclosure.point(1)] + [eval_description(c, prec) for c in self.coords]

    def y_norm_sq(self, prec: int) -> RealEnclosure:
        total = RealEnclosure.point(1)
        for c in self.coords:
            total = total + eval_description(c, prec).square()
        return total

    def has_rational_coordinate(self) -> bool:
        return any(c.is_rational() for c in self.coords)

    def to_dict(self) -> dict:
        return {"coords": [c.to_dict() for c in self.coords]}


@dataclass(frozen=True)
class ProjectiveDistance:
    """Distance value |x ∧ y| / (|x| |y|) with its exact squared pieces."""

    value: RealEnclosure
    numerator_sq: Optional[Fraction] = None
    denominator_sq: Optional[Fraction] = None


@dataclass(frozen=True)
class RationalSubspace:
    """Rational d-dimensional projective subvariety via Plücker coordinates."""

    n: int
    dim: int
    plucker: Multivector
    decomposable: bool

    def __post_init__(self):
        if not 0 <= self.dim <= self.n - 1:
            raise ValueError(f"subvariety dimension {self.dim} out of range for P^{self.n}")
        if self.plucker.is_zero():
            raise ValueError("Plücker vector must be nonzero")
        if not self.plucker.is_primitive():
            raise ValueError("Plücker vector must be primitive")
        if self.plucker.degree != self.dim + 1:
            raise ValueError("Plücker degree must be dim + 1")
        if self.plucker.dim != self.n + 1:
            raise ValueError("ambient dimension mismatch")

    def height_sq(self) -> int:
        return int(self.plucker.norm_sq())

    def height(self, prec: int = 128) -> RealEnclosure:
        return RealEnclosure.point(self.height_sq()).sqrt(prec)

    def basis(self) -> List[List[int]]:
        """Primitive integer basis of the represented linear cone."""
        if not self.decomposable:
            raise ValueError("subspace stored with a non-decomposable Plücker vector")
        return wedge_kernel(self.plucker)

    def to_dict(self) -> dict:
        return {"n": self.n, "dim": self.dim, "plucker": self.plucker.to_payload()}


def subspace_from_basis(vectors: Sequence[Sequence[int]]) -> RationalSubspace:
    """Subspace spanned by d+1 independent integer vectors of (n+1)-space."""
    if not vectors:
        raise DependentVectors("empty basis")
    dim_ambient = len(vectors[0])
    if linalg.rank(vectors) != len(vectors):
        raise DependentVectors("basis vectors are linearly dependent")
    x = Multivector.from_vector(vectors[0])
    for v in vectors[1:]:
        x = x.wedge(Multivector.from_vector(v))
    return RationalSubspace(
        n=dim_ambient - 1,
        dim=len(vectors) - 1,
        plucker=x.primitive_part(),
        decomposable=True,
    )


def subspace_from_plucker(x: Multivector) -> RationalSubspace:
    """Subspace (or non-decomposable locus marker) from an integer multivector."""
    if x.is_zero():
        raise ValueError("zero multivector does not define a subspace")
    prim = x.primitive_part()
    dec, _ = is_decomposable(prim)
    return RationalSubspace(n=x.dim - 1, dim=x.degree - 1, plucker=prim, decomposable=dec)


def is_decomposable(x: Multivector) -> Tuple[bool, List[List[int]]]:
    """Wedge-kernel decomposability test; returns (flag, kernel basis)."""
    if x.is_zero():
        raise ValueError("zero multivector")
    if x.degree in (0, 1, x.dim - 1, x.dim):
        kernel = wedge_kernel(x)
        return True, kernel
    kernel = wedge_kernel(x)
    return len(kernel) == x.degree, kernel


def proj_distance(p: Sequence[Union[int, Fraction]], q: Sequence[Union[int, Fraction]]) -> ProjectiveDistance:
    """Projective distance between two exactly-given homogeneous points."""
    if all(c == 0 for c in p) or all(c == 0 for c in q):
        raise ValueError("zero vector is not a projective point")
    pf = [Fraction(c) for c in p]
    qf = [Fraction(c) for c in q]
    num_sq = Fraction(0)
    for i in range(len(pf)):
        for j in range(i + 1, len(pf)):
            minor = pf[i] * qf[j] - pf[j] * qf[i]
            num_sq += minor * minor
    den_sq = sum(c * c for c in pf) * sum(c * c for c in qf)
    value = (RealEnclosure.point(num_sq) / RealEnclosure.point(den_sq)).sqrt(128)
    return ProjectiveDistance(value=value, numerator_sq=num_sq, denominator_sq=den_sq)


def dist_theta_subspace(
    theta: ThetaPoint,
    subspace: RationalSubspace,
    target_bits: int = 64,
    start_prec: int = 64,
    precision_cap: int = 4096,
) -> RealEnclosure:
    """Enclosure of |y ∧ X| / (|y| |X|), refined to the requested width."""
    if subspace.n != theta.n:
        raise ValueError("point and subspace live in different projective spaces")
    x = subspace.plucker
    x_norm_sq = Fraction(x.norm_sq())
    for prec in precision_ladder(max(start_prec, target_bits), precision_cap):
        y = theta.y_enclosures(prec)
        num_sq = enclosure_coeffs_norm_sq(wedge_vector_enclosures(y, x))
        den_sq = theta.y_norm_sq(prec) * x_norm_sq
        value = (num_sq / den_sq).sqrt(prec)
        if value.width <= Fraction(1, 1 << target_bits):
            return value
    raise PrecisionExhausted(
        f"distance enclosure did not reach width 2^-{target_bits} below the precision cap"
    )


def theta_error_primal(theta: ThetaPoint, x: Multivector, prec: int) -> RealEnclosure:
    """Squared wedge error |y ∧ X|^2 as an enclosure."""
    y = theta.y_enclosures(prec)
    return enclosure_coeffs_norm_sq(wedge_vector_enclosures(y, x))
