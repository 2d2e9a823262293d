"""Exact-arithmetic toolkit for Diophantine approximation exponents.

The package computes exterior-algebra and geometry-of-numbers objects
(wedge/contraction/Hodge calculus, Plücker heights, projective distances,
compound convex bodies, successive minima), estimates ordinary and
uniform approximation exponents for concrete points, and validates the
classical transference inequalities (Khintchine's principle and its
uniform refinements) on those estimates, including constructive
going-up / going-down witness extraction.
"""

from .numerics import (
    Certificate,
    ExtendedReal,
    PrecisionExhausted,
    RealEnclosure,
    certify_le,
    eval_description,
)
from .exterior import Multivector, contract, dot, hodge, norm_sq, wedge

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ExtendedReal",
    "Multivector",
    "PrecisionExhausted",
    "RealEnclosure",
    "certify_le",
    "contract",
    "dot",
    "eval_description",
    "hodge",
    "norm_sq",
    "wedge",
    "__version__",
]
