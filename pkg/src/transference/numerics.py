"""Arbitrary-precision real enclosures with outward rounding.

Every real quantity in this package is either an exact rational or a
:class:`RealEnclosure`: a closed interval with rational endpoints that
certifiably contains the value in question.  Inequality decisions go
through :func:`certify_le`, which never guesses: it answers TRUE or FALSE
only when the enclosures separate, and UNDECIDED otherwise so the caller
can refine and retry at higher precision.

Evaluation of described reals (:func:`eval_description`) always rounds
outward onto a dyadic grid, so enclosures at increasing precision are
nested and their widths obey the 2**-precision bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

Rational = Union[int, Fraction]

DEFAULT_PRECISION_CAP = 4096

#: Natural log of 2, enough digits for report formatting.
LN2 = 0.6931471805599453


class PrecisionExhausted(Exception):
    """A decision stayed undecided at the configured precision cap."""


class InvalidDescription(ValueError):
    """Malformed description of a real number."""


class RefinementFailure(Exception):
    """An isolating interval failed to isolate a root (no sign change)."""


class Certificate(Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNDECIDED = "UNDECIDED"


def precision_ladder(start: int = 64, cap: int = DEFAULT_PRECISION_CAP) -> Iterator[int]:
    """Yield doubling working precisions up to the cap."""
    p = start
    while p <= cap:
        yield p
        p *= 2


# ---------------------------------------------------------------------------
# exact integer helpers


def inth_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, k >= 1, exactly."""
    if n < 0:
        raise ValueError("inth_root of negative number")
    if k < 1:
        raise ValueError("root order must be >= 1")
    if n == 0:
        return 0
    if k == 1:
        return n
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def floor_log2(x: Fraction) -> int:
    """Exact floor(log2(x)) for x > 0."""
    if x <= 0:
        raise ValueError("floor_log2 requires a positive argument")
    a, b = x.numerator, x.denominator
    t = a.bit_length() - b.bit_length()
    # a/b lies in [2**(t-1), 2**(t+1)); settle which side of 2**t.
    if t >= 0:
        return t if a >= (b << t) else t - 1
    return t if (a << -t) >= b else t - 1


def round_down(x: Fraction, prec: int) -> Fraction:
    """Largest multiple of 2**-prec that is <= x."""
    return Fraction((x.numerator << prec) // x.denominator, 1 << prec)


def round_up(x: Fraction, prec: int) -> Fraction:
    """Smallest multiple of 2**-prec that is >= x."""
    return Fraction(-((-x.numerator << prec) // x.denominator), 1 << prec)


def exact_sqrt(x: Fraction) -> Optional[Fraction]:
    """sqrt(x) if x is the square of a rational, else None."""
    if x < 0:
        return None
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def sqrt_down(x: Fraction, prec: int) -> Fraction:
    """Dyadic lower bound of sqrt(x) at 2**-prec resolution (x >= 0)."""
    if x < 0:
        raise ValueError("sqrt of negative number")
    a, b = x.numerator, x.denominator
    return Fraction(inth_root((a << (2 * prec)) * b, 2) // b, 1 << prec)


def sqrt_up(x: Fraction, prec: int) -> Fraction:
    """Dyadic upper bound of sqrt(x) at 2**-prec resolution (x >= 0)."""
    lo = sqrt_down(x, prec)
    if lo * lo == x:
        return lo
    return lo + Fraction(1, 1 << prec)


def _log2_lower(x: Fraction, prec: int) -> Fraction:
    """Shift-and-square log2 with floor rounding.

    Guarantee: result <= log2(x) <= result + 2**(1-prec).  The working
    width prec+16 keeps the accumulated squaring error under one emitted
    bit for any prec below the precision cap.
    """
    if x <= 0:
        raise ValueError("log2 requires a positive argument")
    e = floor_log2(x)
    m = x / (1 << e) if e >= 0 else x * (1 << -e)
    w = prec + 16
    m = round_down(m, w)
    bits = 0
    for _ in range(prec):
        m = round_down(m * m, w)
        bits <<= 1
        if m >= 2:
            bits |= 1
            m = m / 2
    return e + Fraction(bits, 1 << prec)


def log2_down(x: Fraction, prec: int) -> Fraction:
    return _log2_lower(x, prec + 1)


def log2_up(x: Fraction, prec: int) -> Fraction:
    return _log2_lower(x, prec + 1) + Fraction(1, 1 << prec)


def pow_down(x: Fraction, e: Fraction, prec: int) -> Fraction:
    """Dyadic lower bound of x**e for x > 0 and rational e."""
    if x <= 0:
        raise ValueError("pow requires a positive base")
    p, q = e.numerator, e.denominator
    t = x ** p  # exact rational
    if q == 1:
        return round_down(t, prec)
    a, b = t.numerator, t.denominator
    return Fraction(inth_root((a << (prec * q)) * b ** (q - 1), q) // b, 1 << prec)


def pow_up(x: Fraction, e: Fraction, prec: int) -> Fraction:
    lo = pow_down(x, e, prec)
    q = e.denominator
    if lo ** q == x ** e.numerator:
        return lo
    return lo + Fraction(1, 1 << prec)


# ---------------------------------------------------------------------------
# enclosures


class RealEnclosure:
    """Closed interval [lo, hi] with exact rational endpoints.

    Addition, subtraction and multiplication are exact; division by an
    interval away from zero is exact as well.  sqrt/log2/pow round
    outward at an explicit precision.  ``prec`` records the precision an
    enclosure was requested at (None for derived values).
    """

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: Rational, hi: Rational, prec: Optional[int] = None):
        lo = Fraction(lo)
        hi = Fraction(hi)
        if lo > hi:
            raise ValueError(f"invalid enclosure [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    @classmethod
    def point(cls, x: Rational, prec: Optional[int] = None) -> "RealEnclosure":
        x = Fraction(x)
        return cls(x, x, prec)

    # -- queries ------------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def exact(self) -> Fraction:
        if not self.is_point():
            raise ValueError("enclosure is not a point")
        return self.lo

    def contains(self, x: Rational) -> bool:
        return self.lo <= x <= self.hi

    def contains_enclosure(self, other: "RealEnclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_positive(self) -> bool:
        return self.lo > 0

    def strictly_negative(self) -> bool:
        return self.hi < 0

    def __repr__(self) -> str:
        return f"RealEnclosure({self.lo}, {self.hi})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RealEnclosure)
            and self.lo == other.lo
            and self.hi == other.hi
        )

    def __hash__(self):
        return hash((self.lo, self.hi))

    # -- exact arithmetic ----------------------------------------------

    @staticmethod
    def _coerce(x: Union["RealEnclosure", Rational]) -> "RealEnclosure":
        if isinstance(x, RealEnclosure):
            return x
        return RealEnclosure.point(x)

    def __add__(self, other):
        o = self._coerce(other)
        return RealEnclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RealEnclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RealEnclosure(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("division by an enclosure containing zero")
        inv = RealEnclosure(1 / o.hi, 1 / o.lo)
        return self * inv

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealEnclosure(Fraction(0), max(-self.lo, self.hi))

    def square(self) -> "RealEnclosure":
        a = abs(self)
        return RealEnclosure(a.lo * a.lo, a.hi * a.hi)

    def intersect(self, other: "RealEnclosure") -> "RealEnclosure":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("empty intersection of enclosures")
        return RealEnclosure(lo, hi)

    def hull(self, other: "RealEnclosure") -> "RealEnclosure":
        return RealEnclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    # -- rounded operations ---------------------------------------------

    def round_out(self, prec: int) -> "RealEnclosure":
        """Round endpoints outward onto the 2**-prec dyadic grid."""
        return RealEnclosure(round_down(self.lo, prec), round_up(self.hi, prec), prec)

    def sqrt(self, prec: int = 128) -> "RealEnclosure":
        if self.hi < 0:
            raise ValueError("sqrt of a negative enclosure")
        lo = max(self.lo, Fraction(0))
        rlo = exact_sqrt(lo)
        rhi = rlo if self.hi == lo else exact_sqrt(self.hi)
        return RealEnclosure(
            rlo if rlo is not None else sqrt_down(lo, prec),
            rhi if rhi is not None else sqrt_up(self.hi, prec),
        )

    def log2(self, prec: int = 64) -> "RealEnclosure":
        if self.lo <= 0:
            raise ValueError("log2 of an enclosure touching zero")
        return RealEnclosure(log2_down(self.lo, prec), log2_up(self.hi, prec))

    def pow(self, e: Fraction, prec: int = 128) -> "RealEnclosure":
        """x**e for a positive enclosure and rational exponent."""
        if self.lo <= 0:
            raise ValueError("pow of an enclosure touching zero")
        e = Fraction(e)
        if e >= 0:
            return RealEnclosure(pow_down(self.lo, e, prec), pow_up(self.hi, e, prec))
        return RealEnclosure(pow_down(self.hi, e, prec), pow_up(self.lo, e, prec))


def enclosure_sum(items: Sequence[RealEnclosure]) -> RealEnclosure:
    total = RealEnclosure.point(0)
    for it in items:
        total = total + it
    return total


def certify_le(a: RealEnclosure, b: RealEnclosure) -> Certificate:
    """Certified comparison a <= b on enclosures."""
    if a.hi <= b.lo:
        return Certificate.TRUE
    if a.lo > b.hi:
        return Certificate.FALSE
    return Certificate.UNDECIDED


# ---------------------------------------------------------------------------
# extended reals


class ExtendedReal:
    """A real enclosure or positive infinity.

    Infinity compares greater than every finite enclosure; it shows up as
    the value of exponents realised by arbitrarily good approximations.
    """

    __slots__ = ("enclosure",)

    def __init__(self, enclosure: Optional[RealEnclosure]):
        self.enclosure = enclosure

    @classmethod
    def infinity(cls) -> "ExtendedReal":
        return cls(None)

    @classmethod
    def finite(cls, enc: Union[RealEnclosure, Rational]) -> "ExtendedReal":
        return cls(RealEnclosure._coerce(enc))

    @property
    def is_infinite(self) -> bool:
        return self.enclosure is None

    def exact(self) -> Fraction:
        if self.is_infinite:
            raise ValueError("infinite value has no rational representation")
        return self.enclosure.exact()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtendedReal):
            return NotImplemented
        if self.is_infinite or other.is_infinite:
            return self.is_infinite and other.is_infinite
        return self.enclosure == other.enclosure

    def __hash__(self):
        return hash(self.enclosure)

    def __repr__(self) -> str:
        return "ExtendedReal(+inf)" if self.is_infinite else f"ExtendedReal({self.enclosure!r})"


def certify_le_extended(a: ExtendedReal, b: ExtendedReal) -> Certificate:
    if b.is_infinite:
        return Certificate.TRUE
    if a.is_infinite:
        return Certificate.FALSE
    return certify_le(a.enclosure, b.enclosure)


# ---------------------------------------------------------------------------
# described reals


class RealDescription:
    """Finite description of a real number, evaluable at any precision."""

    kind: str = "abstract"

    def _raw_eval(self, prec: int) -> RealEnclosure:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def is_rational(self) -> bool:
        return False


@dataclass(frozen=True)
class RationalDescription(RealDescription):
    value: Fraction
    kind = "rational"

    def _raw_eval(self, prec: int) -> RealEnclosure:
        return RealEnclosure.point(self.value)

    def to_dict(self) -> dict:
        return {"kind": "rational", "value": str(self.value)}

    def is_rational(self) -> bool:
        return True


@dataclass(frozen=True)
class DecimalDescription(RealDescription):
    """Finite decimal literal, kept as its exact rational value."""

    literal: str
    kind = "decimal"

    @property
    def value(self) -> Fraction:
        return Fraction(self.literal)

    def _raw_eval(self, prec: int) -> RealEnclosure:
        return RealEnclosure.point(self.value)

    def to_dict(self) -> dict:
        return {"kind": "decimal", "value": self.literal}

    def is_rational(self) -> bool:
        return True


def poly_eval(coeffs: Sequence[int], x: Fraction) -> Fraction:
    """Evaluate sum(coeffs[i] * x**i) exactly (ascending coefficients)."""
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class AlgebraicDescription(RealDescription):
    """Real algebraic number: integer polynomial plus isolating interval.

    The polynomial is given by ascending integer coefficients and must
    change sign across the interval; bisection then refines the root.
    """

    coeffs: tuple
    interval_lo: Fraction
    interval_hi: Fraction
    kind = "algebraic"

    def __post_init__(self):
        if len(self.coeffs) < 2 or self.coeffs[-1] == 0:
            raise InvalidDescription("polynomial must have positive degree")
        if self.interval_lo >= self.interval_hi:
            raise InvalidDescription("isolating interval is empty")

    def _raw_eval(self, prec: int) -> RealEnclosure:
        lo, hi = self.interval_lo, self.interval_hi
        slo = _sign(poly_eval(self.coeffs, lo))
        shi = _sign(poly_eval(self.coeffs, hi))
        if slo == 0:
            return RealEnclosure.point(lo)
        if shi == 0:
            return RealEnclosure.point(hi)
        if slo == shi:
            raise RefinementFailure(
                "interval does not isolate a root: no sign change across it"
            )
        target = Fraction(1, 1 << (prec + 1))
        while hi - lo > target:
            mid = (lo + hi) / 2
            smid = _sign(poly_eval(self.coeffs, mid))
            if smid == 0:
                return RealEnclosure.point(mid)
            if smid == slo:
                lo = mid
            else:
                hi = mid
        return RealEnclosure(lo, hi)

    def to_dict(self) -> dict:
        return {
            "kind": "algebraic",
            "min_poly": list(self.coeffs),
            "interval": [str(self.interval_lo), str(self.interval_hi)],
        }


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class ExponentSchedule:
    """Strictly increasing integer exponents a_1 < a_2 < ... for series.

    Two generated families are supported: ``power`` (a_k = ratio**k) and
    ``factorial`` (a_k = k!).  Both have a_{k+1}/a_k >= 2 from k = 1 on.
    """

    family: str
    ratio: int = 0

    def __post_init__(self):
        if self.family == "power":
            if self.ratio < 2:
                raise InvalidDescription("power schedule needs ratio >= 2")
        elif self.family != "factorial":
            raise InvalidDescription(f"unknown schedule family {self.family!r}")

    def term(self, k: int) -> int:
        if k < 1:
            raise InvalidDescription("schedule index starts at 1")
        if self.family == "power":
            return self.ratio ** k
        return math.factorial(k)

    def to_dict(self) -> dict:
        d = {"family": self.family}
        if self.family == "power":
            d["ratio"] = self.ratio
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExponentSchedule":
        return cls(family=d["family"], ratio=int(d.get("ratio", 0)))


@dataclass(frozen=True)
class LacunarySeriesDescription(RealDescription):
    """Value of the series sum_k base**(-a_k) for a sparse exponent schedule."""

    base: int
    schedule: ExponentSchedule
    kind = "lacunary"

    def __post_init__(self):
        if self.base < 2:
            raise InvalidDescription("series base must be >= 2")
        if self.schedule.term(2) <= self.schedule.term(1):
            raise InvalidDescription("exponent schedule must strictly increase")

    def truncation_order(self, prec: int) -> int:
        """Smallest K with tail bound 2*base**-a_{K+1} <= 2**-(prec+2)."""
        log2_base = self.base.bit_length() - 1  # floor(log2 base), safe side
        k = 1
        while self.schedule.term(k + 1) * log2_base < prec + 3:
            k += 1
        return k

    def partial_sum(self, order: int) -> Fraction:
        return sum(
            (Fraction(1, self.base ** self.schedule.term(k)) for k in range(1, order + 1)),
            Fraction(0),
        )

    def tail_bound(self, order: int) -> Fraction:
        return Fraction(2, self.base ** self.schedule.term(order + 1))

    def _raw_eval(self, prec: int) -> RealEnclosure:
        order = self.truncation_order(prec)
        s = self.partial_sum(order)
        return RealEnclosure(s, s + self.tail_bound(order))

    def to_dict(self) -> dict:
        return {"kind": "lacunary", "base": self.base, "schedule": self.schedule.to_dict()}


@dataclass(frozen=True)
class PowerDescription(RealDescription):
    """Integer power of another described real (e.g. the square of a series).

    Not one of the four primitive forms; it exists so catalog points like
    (x, x**2) share a single underlying description.
    """

    base: RealDescription
    exponent: int
    kind = "power"

    def __post_init__(self):
        if self.exponent < 2:
            raise InvalidDescription("power description needs exponent >= 2")

    def _raw_eval(self, prec: int) -> RealEnclosure:
        guard = 2 * self.exponent + 2
        while True:
            enc = eval_description(self.base, prec + guard)
            acc = enc
            for _ in range(self.exponent - 1):
                acc = acc * enc
            if acc.width <= Fraction(1, 1 << (prec + 1)):
                return acc
            guard *= 2

    def to_dict(self) -> dict:
        return {"kind": "power", "base": self.base.to_dict(), "exponent": self.exponent}

    def is_rational(self) -> bool:
        return self.base.is_rational()


def description_from_dict(d: dict) -> RealDescription:
    kind = d.get("kind")
    if kind == "rational":
        return RationalDescription(Fraction(d["value"]))
    if kind == "decimal":
        return DecimalDescription(d["value"])
    if kind == "algebraic":
        lo, hi = d["interval"]
        return AlgebraicDescription(tuple(int(c) for c in d["min_poly"]), Fraction(lo), Fraction(hi))
    if kind == "lacunary":
        return LacunarySeriesDescription(int(d["base"]), ExponentSchedule.from_dict(d["schedule"]))
    if kind == "power":
        return PowerDescription(description_from_dict(d["base"]), int(d["exponent"]))
    raise InvalidDescription(f"unknown description kind {kind!r}")


def eval_description(desc: RealDescription, precision_bits: int) -> RealEnclosure:
    """Enclosure of width <= 2**-precision_bits containing the described real."""
    if precision_bits < 1:
        raise InvalidDescription("precision_bits must be positive")
    raw = desc._raw_eval(precision_bits)
    out = raw.round_out(precision_bits + 2)
    assert out.width <= Fraction(1, 1 << precision_bits)
    return RealEnclosure(out.lo, out.hi, precision_bits)
