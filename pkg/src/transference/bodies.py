"""Parametric convex bodies, their compounds, and successive minima.

The two body families are the approximation body (bounded vector norm,
small wedge with the point's homogeneous vector) and its dual (bounded
vector norm, small scalar product).  Computationally each family is
represented by its comparable parallelepiped: an intersection of slabs
|form(x)| <= scale whose defining matrix is unimodular, so volumes are
exact and the comparability constant kappa is measured, never assumed.

Compound bodies of order k live in the k-th exterior power; they are the
parallelepipeds spanned by wedge products of the base parallelepiped's
vertex directions, decomposed exactly through the triangular structure
of that generator basis.

Successive minima are computed exactly by complete enumeration
(Fincke-Pohst over a certified surrogate quadratic form) or enclosed via
LLL reduction with rigorous two-sided bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import linalg
from .exterior import IndexTuple, Multivector, merge_sign
from .numerics import (
    Certificate,
    PrecisionExhausted,
    RealEnclosure,
    certify_le,
    sqrt_down,
    sqrt_up,
)
from .projective import ThetaPoint
from .reduction import (
    BudgetExceeded,
    enumerate_quadratic,
    gram_in_basis,
    gram_of_rows,
    gram_schmidt_data,
    lll_reduce,
)

Vec = List[int]


class InvariantViolation(Exception):
    """A certified violation of a theorem-level invariant (should not happen)."""


class UncertifiedSearchBound(Exception):
    """The supplied enumeration bound provably may miss minima witnesses."""


class BodyKind(str, Enum):
    PRIMAL = "PRIMAL"
    DUAL = "DUAL"
    BOX = "BOX"
    COMPOUND = "COMPOUND"


@dataclass(frozen=True)
class ScalePower:
    """Positive scale sqrt(base_sq) ** exponent, kept in exact form.

    Covers both exact rational scales (exponent 1, base_sq = x^2) and the
    irrational parameter values H^e arising from a record of squared norm
    base_sq = H^2.
    """

    base_sq: Fraction
    exponent: Fraction

    def __post_init__(self):
        if self.base_sq <= 0:
            raise ValueError("scale base must be positive")

    @classmethod
    def exact(cls, x: Union[int, Fraction]) -> "ScalePower":
        x = Fraction(x)
        if x <= 0:
            raise ValueError("scale must be positive")
        return cls(x * x, Fraction(1))

    @classmethod
    def root_power(cls, base_sq: Union[int, Fraction], exponent: Fraction) -> "ScalePower":
        return cls(Fraction(base_sq), Fraction(exponent))

    def exact_value(self) -> Optional[Fraction]:
        e = self.exponent
        if e.denominator == 1 and int(e) % 2 == 0:
            return self.base_sq ** (int(e) // 2)
        num_r = math.isqrt(self.base_sq.numerator)
        den_r = math.isqrt(self.base_sq.denominator)
        if num_r * num_r == self.base_sq.numerator and den_r * den_r == self.base_sq.denominator:
            root = Fraction(num_r, den_r)
            if e.denominator == 1:
                return root ** int(e)
        return None

    def sq(self, prec: int = 128) -> RealEnclosure:
        ev = self.exact_value()
        if ev is not None:
            return RealEnclosure.point(ev * ev)
        return RealEnclosure.point(self.base_sq).pow(self.exponent, prec)

    def value(self, prec: int = 128) -> RealEnclosure:
        ev = self.exact_value()
        if ev is not None:
            return RealEnclosure.point(ev)
        return RealEnclosure.point(self.base_sq).pow(self.exponent / 2, prec)

    def __mul__(self, other: "ScalePower") -> "ScalePower":
        a, b = self.exact_value(), other.exact_value()
        if a is not None and b is not None:
            return ScalePower.exact(a * b)
        if self.base_sq == other.base_sq:
            return ScalePower(self.base_sq, self.exponent + other.exponent)
        if a == 1:
            return other
        if b == 1:
            return self
        raise ValueError("cannot combine scales over different irrational bases")

    def pow(self, k: int) -> "ScalePower":
        return ScalePower(self.base_sq, self.exponent * k)

    def to_dict(self) -> dict:
        return {"base_sq": str(self.base_sq), "exponent": str(self.exponent)}


#: A slab |<coeffs, x>| <= scale; coefficients are enclosures.
FormRow = Tuple[List[RealEnclosure], ScalePower]


def _enc_dict_vector(vec: Sequence[RealEnclosure]) -> Dict[IndexTuple, RealEnclosure]:
    return {(i + 1,): c for i, c in enumerate(vec)}


def _wedge_enc_dicts(
    a: Dict[IndexTuple, RealEnclosure], b: Dict[IndexTuple, RealEnclosure]
) -> Dict[IndexTuple, RealEnclosure]:
    out: Dict[IndexTuple, RealEnclosure] = {}
    for ia, ca in a.items():
        for ib, cb in b.items():
            sign = merge_sign(ia, ib)
            if sign == 0:
                continue
            key = tuple(sorted(ia + ib))
            term = (ca * cb) * sign
            out[key] = out[key] + term if key in out else term
    return out


def _basis_enc_vector(dim: int, pos: int) -> List[RealEnclosure]:
    return [RealEnclosure.point(int(i == pos)) for i in range(dim)]


@dataclass(frozen=True)
class BodySpec:
    """A symmetric convex body from the two parametric families, a box,
    or a compound of one of the families."""

    kind: BodyKind
    theta: Optional[ThetaPoint] = None
    u: Optional[ScalePower] = None
    v: Optional[ScalePower] = None
    order: int = 1
    base_kind: Optional[BodyKind] = None
    half_widths: Optional[Tuple[Fraction, ...]] = None

    # -- dimensions ------------------------------------------------------

    @property
    def space_dim(self) -> int:
        """Dimension of the vector space the body lives in."""
        if self.kind is BodyKind.BOX:
            return len(self.half_widths)
        n1 = self.theta.n + 1
        if self.kind is BodyKind.COMPOUND:
            return math.comb(n1, self.order)
        return n1

    @property
    def monomials(self) -> List[IndexTuple]:
        """Coordinate order for compound bodies (lexicographic monomials)."""
        if self.kind is not BodyKind.COMPOUND:
            return [(i + 1,) for i in range(self.space_dim)]
        return list(combinations(range(1, self.theta.n + 2), self.order))

    def vector_to_multivector(self, x: Sequence[int]) -> Multivector:
        monos = self.monomials
        degree = len(monos[0])
        dim = self.theta.n + 1 if self.theta is not None else self.space_dim
        return Multivector(dim, degree, {m: c for m, c in zip(monos, x) if c != 0})

    # -- generator directions ---------------------------------------------

    def _directions(self, prec: int) -> Tuple[Dict[IndexTuple, RealEnclosure], List[Dict[IndexTuple, RealEnclosure]], ScalePower, ScalePower]:
        """Special direction and the n plain directions of the base
        parallelepiped, with their scales (special first)."""
        base = self.base_kind if self.kind is BodyKind.COMPOUND else self.kind
        n = self.theta.n
        y = self.theta.y_enclosures(prec)
        if base is BodyKind.PRIMAL:
            special = _enc_dict_vector(y)
            plains = [_enc_dict_vector(_basis_enc_vector(n + 1, j)) for j in range(1, n + 1)]
            return special, plains, self.u, self.v
        if base is BodyKind.DUAL:
            special = _enc_dict_vector(_basis_enc_vector(n + 1, 0))
            plains = []
            for j in range(1, n + 1):
                vec = _basis_enc_vector(n + 1, j)
                vec[0] = -y[j]
                plains.append(_enc_dict_vector(vec))
            return special, plains, self.v, self.u
        raise ValueError(f"body kind {base} has no parallelepiped directions")

    def generators(self, prec: int = 128) -> List[Tuple[Dict[IndexTuple, RealEnclosure], ScalePower]]:
        """Vertex generators (direction, scale); for compounds these are the
        wedge products of `order` base directions with multiplied scales."""
        if self.kind is BodyKind.BOX:
            return [
                (_enc_dict_vector(_basis_enc_vector(self.space_dim, i)), ScalePower.exact(c))
                for i, c in enumerate(self.half_widths)
            ]
        special, plains, s_scale, p_scale = self._directions(prec)
        if self.kind in (BodyKind.PRIMAL, BodyKind.DUAL):
            return [(special, s_scale)] + [(p, p_scale) for p in plains]
        k = self.order
        out = []
        for idx in combinations(range(len(plains)), k):
            acc = plains[idx[0]]
            for i in idx[1:]:
                acc = _wedge_enc_dicts(acc, plains[i])
            out.append((acc, p_scale.pow(k)))
        for idx in combinations(range(len(plains)), k - 1):
            acc = special
            for i in idx:
                acc = _wedge_enc_dicts(acc, plains[i])
            out.append((acc, s_scale * p_scale.pow(k - 1)))
        return out

    # -- defining slabs -----------------------------------------------------

    def form_rows(self, prec: int = 128) -> List[FormRow]:
        """Slab forms |<row, x>| <= scale defining the parallelepiped.

        The form matrix is unimodular by construction, which makes the
        volume formula exact.
        """
        n1 = self.space_dim
        if self.kind is BodyKind.BOX:
            return [
                (_basis_enc_vector(n1, i), ScalePower.exact(c))
                for i, c in enumerate(self.half_widths)
            ]
        n = self.theta.n
        y = self.theta.y_enclosures(prec)
        if self.kind is BodyKind.PRIMAL:
            rows: List[FormRow] = [(_basis_enc_vector(n1, 0), self.u)]
            for i in range(1, n + 1):
                coeffs = _basis_enc_vector(n1, i)
                coeffs[0] = y[i]
                coeffs[i] = RealEnclosure.point(-1)
                rows.append((coeffs, self.v))
            return rows
        if self.kind is BodyKind.DUAL:
            rows = [(list(y), self.v)]
            for i in range(1, n + 1):
                rows.append((_basis_enc_vector(n1, i), self.u))
            return rows
        if self.kind is BodyKind.COMPOUND:
            return self._compound_rows(prec)
        raise ValueError(f"unknown body kind {self.kind}")

    def _compound_rows(self, prec: int) -> List[FormRow]:
        special, plains, s_scale, p_scale = self._directions(prec)
        k = self.order
        monos = self.monomials
        pos = {m: i for i, m in enumerate(monos)}
        n1 = len(monos)
        b_scale = s_scale * p_scale.pow(k - 1)
        a_scale = p_scale.pow(k)
        special_monos = [m for m in monos if 1 in m]
        pure_monos = [m for m in monos if 1 not in m]
        base = self.base_kind

        # wedge products of plain directions (for DUAL) or of the special
        # direction with plains (for PRIMAL); exact unit pivots by design
        rows: List[FormRow] = []
        if base is BodyKind.PRIMAL:
            # b_J reads the coefficient at the monomial (1,)+J directly
            special_gen: Dict[IndexTuple, Dict[IndexTuple, RealEnclosure]] = {}
            for idx in combinations(range(len(plains)), k - 1):
                acc = special
                for i in idx:
                    acc = _wedge_enc_dicts(acc, plains[i])
                key = (1,) + tuple(i + 2 for i in idx)
                special_gen[key] = acc
            for m in special_monos:
                coeffs = [RealEnclosure.point(0)] * n1
                coeffs[pos[m]] = RealEnclosure.point(1)
                rows.append((coeffs, b_scale))
            for m in pure_monos:
                coeffs = [RealEnclosure.point(0)] * n1
                coeffs[pos[m]] = RealEnclosure.point(1)
                for skey, gen in special_gen.items():
                    c = gen.get(m)
                    if c is not None:
                        coeffs[pos[skey]] = coeffs[pos[skey]] - c
                rows.append((coeffs, a_scale))
            return rows
        # DUAL: a_I reads pure monomials directly; b_J subtracts the
        # special components of the plain-direction wedges
        plain_gen: Dict[IndexTuple, Dict[IndexTuple, RealEnclosure]] = {}
        for idx in combinations(range(len(plains)), k):
            acc = plains[idx[0]]
            for i in idx[1:]:
                acc = _wedge_enc_dicts(acc, plains[i])
            key = tuple(i + 2 for i in idx)
            plain_gen[key] = acc
        for m in pure_monos:
            coeffs = [RealEnclosure.point(0)] * n1
            coeffs[pos[m]] = RealEnclosure.point(1)
            rows.append((coeffs, a_scale))
        for m in special_monos:
            coeffs = [RealEnclosure.point(0)] * n1
            coeffs[pos[m]] = RealEnclosure.point(1)
            for pkey, gen in plain_gen.items():
                c = gen.get(m)
                if c is not None:
                    coeffs[pos[pkey]] = coeffs[pos[pkey]] - c
            rows.append((coeffs, b_scale))
        return rows

    # -- metric data ---------------------------------------------------------

    def gauge_sq(self, x: Sequence[int], prec: int = 128) -> RealEnclosure:
        """Squared gauge: max over slabs of form(x)^2 / scale^2."""
        best: Optional[RealEnclosure] = None
        for coeffs, scale in self.form_rows(prec):
            val = RealEnclosure.point(0)
            for c, xi in zip(coeffs, x):
                if xi:
                    val = val + c * xi
            q = val.square() / scale.sq(prec)
            best = q if best is None else RealEnclosure(max(best.lo, q.lo), max(best.hi, q.hi))
        return best

    def volume(self, prec: int = 128) -> RealEnclosure:
        vol = RealEnclosure.point(1)
        for _, scale in self.form_rows(prec):
            vol = vol * scale.value(prec) * 2
        return vol

    def sup_radius(self, prec: int = 128) -> RealEnclosure:
        """R with |x|_inf <= R * gauge(x) for every x (certified upper)."""
        gens = self.generators(prec)
        monos = set()
        for gen, _ in gens:
            monos.update(gen.keys())
        best = RealEnclosure.point(0)
        for m in monos:
            total = RealEnclosure.point(0)
            for gen, scale in gens:
                c = gen.get(m)
                if c is not None:
                    total = total + abs(c) * scale.value(prec)
            best = RealEnclosure(max(best.lo, total.lo), max(best.hi, total.hi))
        return best

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "order": self.order}
        if self.base_kind is not None:
            d["base_kind"] = self.base_kind.value
        if self.u is not None:
            d["u"] = self.u.to_dict()
            d["v"] = self.v.to_dict()
        if self.half_widths is not None:
            d["half_widths"] = [str(c) for c in self.half_widths]
        return d


def _check_scales(u: ScalePower, v: ScalePower):
    # V <= U, certified; equal exponents over the same base compare exactly
    if u.base_sq == v.base_sq and u.base_sq >= 1:
        if v.exponent > u.exponent and u.base_sq > 1:
            raise ValueError("V <= U violated")
        return
    cert = certify_le(v.value(128), u.value(128))
    if cert is Certificate.FALSE:
        raise ValueError("V <= U violated")


def primal_body(theta: ThetaPoint, u: ScalePower, v: ScalePower) -> BodySpec:
    _check_scales(u, v)
    return BodySpec(kind=BodyKind.PRIMAL, theta=theta, u=u, v=v)


def dual_body(theta: ThetaPoint, u: ScalePower, v: ScalePower) -> BodySpec:
    _check_scales(u, v)
    return BodySpec(kind=BodyKind.DUAL, theta=theta, u=u, v=v)


def box_body(half_widths: Sequence[Union[int, Fraction]]) -> BodySpec:
    hw = tuple(Fraction(c) for c in half_widths)
    if any(c <= 0 for c in hw):
        raise ValueError("box half-widths must be positive")
    return BodySpec(kind=BodyKind.BOX, half_widths=hw)


def compound_body(base: BodySpec, order: int) -> BodySpec:
    """Order-k compound: parallelepiped on wedge products of the base's
    vertex directions."""
    if base.kind not in (BodyKind.PRIMAL, BodyKind.DUAL):
        raise ValueError("compound base must be PRIMAL or DUAL")
    if not 1 <= order <= base.theta.n + 1:
        raise ValueError(f"invalid compound order {order}")
    if order == 1:
        return base
    return BodySpec(
        kind=BodyKind.COMPOUND,
        theta=base.theta,
        u=base.u,
        v=base.v,
        order=order,
        base_kind=base.kind,
    )


# ---------------------------------------------------------------------------
# successive minima


@dataclass
class MinimaProfile:
    lambdas: List[RealEnclosure]
    witnesses: List[Vec]
    method: str
    body: BodySpec
    certification: dict = field(default_factory=dict)

    def witness_multivectors(self) -> List[Multivector]:
        return [self.body.vector_to_multivector(w) for w in self.witnesses]

    def lambda_product(self, prec: int = 128) -> RealEnclosure:
        prod = RealEnclosure.point(1)
        for lam in self.lambdas:
            prod = prod * lam
        return prod

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "body": self.body.to_dict(),
            "lambdas": [[str(l.lo), str(l.hi)] for l in self.lambdas],
            "witnesses": [list(w) for w in self.witnesses],
            "certification": {k: str(v) for k, v in self.certification.items()},
        }


def _surrogate_data(body: BodySpec, prec: int):
    """Midpoint quadratic form plus the rigorous inflation factor.

    For every x: surrogate(x) <= sum_i (gauge(x) * f_i)^2, where the f_i
    account for coefficient enclosure widths and scale enclosure spread.
    Returns (gram, sum_f_sq, rows, r_inf_hi).
    """
    rows = body.form_rows(prec)
    m = body.space_dim
    r_inf_hi = body.sup_radius(prec).hi
    gram_rows = []
    sum_f_sq = Fraction(0)
    for coeffs, scale in rows:
        mids = [c.midpoint for c in coeffs]
        delta = sum((c.width / 2 for c in coeffs), Fraction(0))
        s_sq = scale.sq(prec)
        s_lo = sqrt_down(s_sq.lo, 64)
        s_hi = sqrt_up(s_sq.hi, 64)
        if s_lo <= 0:
            raise PrecisionExhausted("scale enclosure touches zero; raise precision")
        f = (s_hi + delta * r_inf_hi) / s_lo
        sum_f_sq += f * f
        gram_rows.append((mids, s_lo * s_lo))
    return gram_of_rows(gram_rows, m), sum_f_sq, rows, r_inf_hi


def _certified_order_key(body, cands, prec, precision_cap):
    """Gauge enclosures refined until distinct candidates separate or are
    exact ties; returns list of (enclosure, vec) sorted soundly."""
    def sort_key(t):
        g, x = t
        return (g.lo, g.hi, max(abs(v) for v in x), sum(v * v for v in x), x)

    scored = [(body.gauge_sq(x, prec), x) for x in cands]
    p = prec
    while p <= precision_cap:
        scored.sort(key=sort_key)
        unresolved = False
        for (ga, _), (gb, _) in zip(scored, scored[1:]):
            if ga.hi > gb.lo and ga != gb:
                unresolved = True
                break
        if not unresolved:
            return scored
        p *= 2
        scored = [(body.gauge_sq(x, p), x) for _, x in scored]
    # unresolved overlaps at the cap: keep the sound order by lower bound;
    # selection below hulls overlapping values, so the result stays honest
    scored.sort(key=sort_key)
    return scored


def minima_exhaustive(
    body: BodySpec,
    search_bound: Optional[int] = None,
    prec: int = 96,
    precision_cap: int = 4096,
    node_budget: int = 2_000_000,
    check_minkowski: bool = True,
) -> MinimaProfile:
    """Exact successive minima of the body over the integer lattice.

    Completeness: unit vectors give a certified upper bound G on the last
    minimum; the surrogate quadratic form inflated by the enclosure slack
    covers every point of gauge <= G, and Fincke-Pohst enumerates that
    region exhaustively.
    """
    m = body.space_dim
    while True:
        gram, sum_f_sq, rows, r_inf_hi = _surrogate_data(body, prec)
        if sum_f_sq <= Fraction(2) * m:
            break
        prec *= 2
        if prec > precision_cap:
            raise PrecisionExhausted("surrogate slack would not settle below the cap")

    # upper bound on the last minimum from any m independent vectors; an
    # LLL basis of the surrogate keeps the enumeration region near-optimal
    seed_basis = lll_reduce(gram, delta=Fraction(3, 4))
    g_sq_hi = max(body.gauge_sq(b, prec).hi for b in seed_basis)

    margin = Fraction(1) + Fraction(1, 1 << 16)
    bound = g_sq_hi * sum_f_sq * margin
    cands = enumerate_quadratic(gram, bound, node_budget=node_budget)

    scored = _certified_order_key(body, cands, prec, precision_cap)

    witnesses: List[Vec] = []
    lambdas_sq: List[RealEnclosure] = []
    for g_sq, x in scored:
        if len(witnesses) == m:
            break
        if witnesses and linalg.rank(witnesses + [x]) == len(witnesses):
            continue
        witnesses.append(list(x))
        lambdas_sq.append(g_sq)
    if len(witnesses) < m:
        raise InvariantViolation("enumeration missed independent witnesses")

    # hull overlapping neighbours so each reported enclosure contains the
    # true lambda even if the exact order between near-ties stayed open
    for i in range(1, m):
        if lambdas_sq[i].lo < lambdas_sq[i - 1].lo:
            lambdas_sq[i] = lambdas_sq[i].hull(lambdas_sq[i - 1])
    lambdas = [l.sqrt(prec) for l in lambdas_sq]

    required = lambdas[-1].hi * r_inf_hi
    if search_bound is not None and Fraction(search_bound) < required:
        raise UncertifiedSearchBound(
            f"search bound {search_bound} below certified requirement {required}"
        )

    cert = {
        "gauge_upper_bound_sq": g_sq_hi,
        "surrogate_inflation": sum_f_sq,
        "candidates": len(cands),
        "required_sup_bound": required,
        "precision_bits": prec,
    }
    profile = MinimaProfile(
        lambdas=lambdas, witnesses=witnesses, method="EXHAUSTIVE", body=body, certification=cert
    )
    if check_minkowski:
        status = verify_minkowski(profile, prec=prec, precision_cap=precision_cap)
        cert["minkowski"] = status
    return profile


def verify_minkowski(profile: MinimaProfile, prec: int = 128, precision_cap: int = 4096) -> str:
    """Check 2^m/m! <= prod(lambda_i) * vol <= 2^m on the profile."""
    m = profile.body.space_dim
    low = Fraction(2**m, math.factorial(m))
    high = Fraction(2**m)
    p = prec
    while True:
        prod = profile.lambda_product(p) * profile.body.volume(p)
        c1 = certify_le(RealEnclosure.point(low), prod)
        c2 = certify_le(prod, RealEnclosure.point(high))
        if c1 is Certificate.FALSE or c2 is Certificate.FALSE:
            raise InvariantViolation(
                f"second-theorem product bound failed: product in [{prod.lo}, {prod.hi}]"
            )
        if c1 is Certificate.TRUE and c2 is Certificate.TRUE:
            return "HOLDS"
        p *= 2
        if p > precision_cap:
            return "UNDECIDED"


def minima_reduced(
    body: BodySpec,
    prec: int = 96,
    precision_cap: int = 4096,
    delta: Fraction = Fraction(99, 100),
) -> MinimaProfile:
    """Two-sided minima enclosures from an LLL-reduced basis.

    Bounds used (all exact): lambda_j <= max_{i<=j} gauge(b_i) for the
    basis sorted by gauge, and lambda_j >= sqrt(min_{i>=j} B_i / sum f^2)
    where B_i are the Gram-Schmidt norms of the surrogate form and the
    f-factors absorb the surrogate-vs-true slack.  The nominal reduction
    quality constant 2^((m-1)/2) is logged alongside.
    """
    m = body.space_dim
    while True:
        gram, sum_f_sq, rows, r_inf_hi = _surrogate_data(body, prec)
        if sum_f_sq <= Fraction(2) * m:
            break
        prec *= 2
        if prec > precision_cap:
            raise PrecisionExhausted("surrogate slack would not settle below the cap")

    basis = lll_reduce(gram, delta=delta)
    mu, gs_norms = gram_schmidt_data(gram_in_basis(gram, basis))

    lower_sq = []
    for j in range(m):
        lower_sq.append(min(gs_norms[j:]) / sum_f_sq)

    gauges = [(body.gauge_sq(b, prec).sqrt(prec), b) for b in basis]
    gauges.sort(key=lambda t: (t[0].hi, t[0].lo, t[1]))

    lambdas = []
    witnesses = []
    running_hi = Fraction(0)
    for j, (g, b) in enumerate(gauges):
        running_hi = max(running_hi, g.hi)
        lo = sqrt_down(lower_sq[j], 64)
        lambdas.append(RealEnclosure(min(lo, running_hi), running_hi))
        witnesses.append(list(b))

    cert = {
        "reduction_delta": delta,
        "nominal_quality_c_m": f"2^({m - 1}/2)",
        "surrogate_inflation": sum_f_sq,
        "precision_bits": prec,
    }
    return MinimaProfile(
        lambdas=lambdas, witnesses=witnesses, method="REDUCED", body=body, certification=cert
    )


# ---------------------------------------------------------------------------
# compound comparability (Mahler)


@dataclass
class ComparabilityInstance:
    body: BodySpec
    order: int
    ratio: RealEnclosure

    def to_dict(self) -> dict:
        return {
            "body": self.body.to_dict(),
            "order": self.order,
            "ratio": [str(self.ratio.lo), str(self.ratio.hi)],
        }


@dataclass
class ComparabilityReport:
    instances: List[ComparabilityInstance] = field(default_factory=list)

    @property
    def kappa_observed(self) -> Fraction:
        k = Fraction(1)
        for inst in self.instances:
            k = max(k, inst.ratio.hi, 1 / inst.ratio.lo)
        return k

    def to_dict(self) -> dict:
        return {
            "kappa_observed": str(self.kappa_observed),
            "instances": [i.to_dict() for i in self.instances],
        }


def mahler_check(
    base: BodySpec,
    order: int,
    report: Optional[ComparabilityReport] = None,
    prec: int = 96,
    node_budget: int = 2_000_000,
) -> ComparabilityInstance:
    """First minimum of the order-k compound against the product of the
    base body's first k minima; the ratio goes into the report."""
    base_profile = minima_exhaustive(base, prec=prec, node_budget=node_budget, check_minkowski=False)
    comp = compound_body(base, order)
    comp_profile = minima_exhaustive(comp, prec=prec, node_budget=node_budget, check_minkowski=False)
    prod = RealEnclosure.point(1)
    for lam in base_profile.lambdas[:order]:
        prod = prod * lam
    ratio = comp_profile.lambdas[0] / prod
    inst = ComparabilityInstance(body=base, order=order, ratio=ratio)
    if report is not None:
        report.instances.append(inst)
    return inst
