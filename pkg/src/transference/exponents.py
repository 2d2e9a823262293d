"""Empirical estimation of approximation exponents.

Ordinary exponents are estimated from best-approximation staircases:
for a geometric grid of norm thresholds T, the exact minimiser of the
error functional (wedge norm for the primal form, contraction norm for
the dual form) over nonzero integer multivectors of norm at most T.
Uniform exponents are estimated from the exact minimum of the classical
coordinate systems over sup-norm boxes, reported as grid evidence only
(a finite grid cannot certify a for-all-large-X statement).

All minimisers are certified: enumeration runs over a surrogate
quadratic form whose inflation against the true forms is accounted for
explicitly, so no candidate can be missed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .bodies import BodyKind, BodySpec, ScalePower, compound_body, dual_body, minima_reduced, primal_body
from .exterior import (
    IndexTuple,
    Multivector,
    contract_vector_enclosures,
    wedge_vector_enclosures,
)
from .numerics import (
    Certificate,
    PrecisionExhausted,
    RealEnclosure,
    certify_le,
    pow_down,
    sqrt_up,
)
from .projective import ThetaPoint
from .reduction import enumerate_quadratic, gram_of_rows, lll_reduce, quadratic_value

Vec = List[int]


class DegenerateRecord(Exception):
    """An approximation error was certified zero, contradicting the
    independence assumption (a rational coordinate slipped in)."""


# ---------------------------------------------------------------------------
# records


@dataclass
class ApproximationRecord:
    """One integer multivector with its exact norm and error data."""

    kind: str  # "primal" | "dual"
    d: int
    theta: ThetaPoint
    x: Multivector
    norm_sq: Fraction
    error_sq: RealEnclosure
    prec: int = 128

    @property
    def degree(self) -> int:
        return self.x.degree

    def refresh(self, prec: int) -> "ApproximationRecord":
        err = record_error_sq(self.theta, self.x, self.kind, prec)
        return ApproximationRecord(self.kind, self.d, self.theta, self.x, self.norm_sq, err, prec)

    def instant_exponent(self, prec: int = 64) -> Optional[RealEnclosure]:
        """Enclosure of -log error / log norm; None when the norm is 1."""
        if self.norm_sq <= 1:
            return None
        err = self.error_sq
        if err.hi == 0:
            raise DegenerateRecord("error is exactly zero")
        p = max(self.prec, prec)
        while err.lo <= 0:
            p *= 2
            if p > 1 << 16:
                raise DegenerateRecord("error enclosure would not separate from zero")
            err = record_error_sq(self.theta, self.x, self.kind, p)
        log_err = err.log2(prec)
        log_norm = RealEnclosure.point(self.norm_sq).log2(prec)
        return (-log_err) / log_norm

    def to_dict(self) -> dict:
        inst = self.instant_exponent()
        return {
            "kind": self.kind,
            "d": self.d,
            "multivector": self.x.to_payload(),
            "norm_sq": str(self.norm_sq),
            "error_sq": [str(self.error_sq.lo), str(self.error_sq.hi)],
            "instant_exponent": None if inst is None else [str(inst.lo), str(inst.hi)],
        }


def record_error_sq(theta: ThetaPoint, x: Multivector, kind: str, prec: int) -> RealEnclosure:
    y = theta.y_enclosures(prec)
    if kind == "primal":
        coeffs = wedge_vector_enclosures(y, x)
    elif kind == "dual":
        coeffs = contract_vector_enclosures(y, x)
    else:
        raise ValueError(f"unknown record kind {kind!r}")
    total = RealEnclosure.point(0)
    for c in coeffs.values():
        total = total + c.square()
    return total


def make_record(theta: ThetaPoint, x: Multivector, kind: str, d: int, prec: int = 128) -> ApproximationRecord:
    return ApproximationRecord(
        kind=kind,
        d=d,
        theta=theta,
        x=x,
        norm_sq=Fraction(x.norm_sq()),
        error_sq=record_error_sq(theta, x, kind, prec),
        prec=prec,
    )


# ---------------------------------------------------------------------------
# exact minimisation of an error functional under a norm bound


def _error_rows(theta: ThetaPoint, degree: int, kind: str, prec: int):
    """Rows of the error functional over multivector coordinates."""
    dim = theta.n + 1
    y = theta.y_enclosures(prec)
    monos = list(combinations(range(1, dim + 1), degree))
    per_mono = []
    for m in monos:
        base = Multivector.basis(dim, m)
        if kind == "primal":
            per_mono.append(wedge_vector_enclosures(y, base))
        else:
            per_mono.append(contract_vector_enclosures(y, base))
    target_keys = sorted({k for d in per_mono for k in d})
    rows = []
    zero = RealEnclosure.point(0)
    for key in target_keys:
        rows.append([d.get(key, zero) for d in per_mono])
    return monos, rows


def _row_midpoints_and_delta(rows):
    mids = []
    deltas = []
    for row in rows:
        mids.append([c.midpoint for c in row])
        deltas.append(sum((c.width / 2 for c in row), Fraction(0)))
    return mids, deltas


def error_sq_of_coords(rows, x: Sequence[int]) -> RealEnclosure:
    total = RealEnclosure.point(0)
    for row in rows:
        val = RealEnclosure.point(0)
        for c, xi in zip(row, x):
            if xi:
                val = val + c * xi
        total = total + val.square()
    return total


def exact_min_error(
    theta: ThetaPoint,
    d: int,
    kind: str,
    norm_bound_sq: Fraction,
    prec: int = 128,
    precision_cap: int = 4096,
    node_budget: int = 4_000_000,
) -> Tuple[Multivector, RealEnclosure]:
    """Certified minimiser of the error over nonzero X with |X|^2 <= bound.

    Ties resolve to the lexicographically smallest canonical coefficient
    vector.  Completeness comes from enumerating a surrogate quadratic
    ball that provably covers every feasible candidate at least as good
    as the best one found by reduction.
    """
    n = theta.n
    degree = d + 1 if kind == "primal" else n - d
    dim = n + 1
    n_coords = math.comb(dim, degree)
    t_sq = Fraction(norm_bound_sq)
    if t_sq < 1:
        raise ValueError("norm bound must allow at least the unit multivectors")

    while True:
        monos, rows = _error_rows(theta, degree, kind, prec)
        mids, deltas = _row_midpoints_and_delta(rows)
        # inflation: |surrogate - true| <= Delta * |x|_inf <= Delta * T
        delta_total_sq = sum((dd * dd for dd in deltas), Fraction(0))
        t_hi = sqrt_up(t_sq, 32)

        # starter value: best basis monomial
        best_x = None
        best_err = None
        for j, m in enumerate(monos):
            e = [0] * n_coords
            e[j] = 1
            err = error_sq_of_coords(rows, e)
            if best_err is None or err.hi < best_err.hi:
                best_err, best_x = err, e

        # iterative reduction passes to pull the scale down
        v_sq = best_err.hi if best_err.hi > 0 else Fraction(1, 1 << (2 * prec))
        for _ in range(60):
            gram = gram_of_rows([(mid, v_sq) for mid in mids], n_coords)
            for i in range(n_coords):
                gram[i][i] += Fraction(1, t_sq)
            improved = False
            for cand in lll_reduce(gram, delta=Fraction(3, 4)):
                if sum(c * c for c in cand) > t_sq:
                    continue
                err = error_sq_of_coords(rows, cand)
                if err.hi * 4 < v_sq:
                    v_sq = max(err.hi, Fraction(1, 1 << (4 * precision_cap)))
                    best_err, best_x = err, list(cand)
                    improved = True
                    break
                if err.hi < best_err.hi:
                    best_err, best_x = err, list(cand)
            if not improved:
                break

        if best_err.hi == 0:
            raise DegenerateRecord("reduction produced an exactly-zero error")

        # check the inflation is negligible at the achieved scale, else refine
        if delta_total_sq * t_sq * 256 > best_err.hi:
            prec *= 2
            if prec > precision_cap:
                raise PrecisionExhausted("error-form precision would exceed the cap")
            continue

        # complete enumeration: any feasible x with error <= best has
        # |x|^2/T^2 <= 1 and surrogate_err^2 <= (err + Delta T)^2 <= best*(17/16)^2
        bound = Fraction(1) + Fraction(289, 256) + Fraction(1, 256)
        gram = gram_of_rows([(mid, best_err.hi) for mid in mids], n_coords)
        for i in range(n_coords):
            gram[i][i] += Fraction(1, t_sq)
        cands = [c for c in enumerate_quadratic(gram, bound, node_budget=node_budget)
                 if sum(v * v for v in c) <= t_sq]
        canon = best_x if next(v for v in best_x if v) > 0 else [-v for v in best_x]
        if canon not in cands:
            cands.append(canon)

        scored = [(error_sq_of_coords(rows, c), c) for c in cands]
        # certified argmin with lexicographic tie-breaking; also separate
        # the minimum from zero so logarithms are well-defined downstream
        p = prec
        while True:
            min_hi = min(e.hi for e, _ in scored)
            front = [(e, c) for e, c in scored if e.lo <= min_hi]
            settled = len(front) == 1 or all(e == front[0][0] for e, _ in front)
            if settled and min(e.lo for e, _ in front) > 0:
                break
            if min_hi == 0:
                raise DegenerateRecord("minimal error is exactly zero (dependent coordinates)")
            if p >= precision_cap:
                break
            p *= 2
            _, rows_p = _error_rows(theta, degree, kind, p)
            scored = [(error_sq_of_coords(rows_p, c), c) for _, c in scored]
        min_hi = min(e.hi for e, _ in scored)
        front = sorted([(e, c) for e, c in scored if e.lo <= min_hi], key=lambda t: t[1])
        err_enc = RealEnclosure(min(e.lo for e, _ in scored), min_hi)
        chosen = front[0][1]
        x = Multivector(dim, degree, {m: c for m, c in zip(monos, chosen) if c != 0})
        if err_enc.hi == 0:
            raise DegenerateRecord("minimal error is exactly zero (dependent coordinates)")
        return x, err_enc


# ---------------------------------------------------------------------------
# staircases


def staircase_filter(records: Sequence[ApproximationRecord]) -> List[ApproximationRecord]:
    """Keep strictly increasing norms with strictly decreasing errors."""
    ordered = sorted(records, key=lambda r: (r.norm_sq, r.error_sq.hi))
    out: List[ApproximationRecord] = []
    seen = set()
    for rec in ordered:
        key = (rec.norm_sq, rec.x)
        if key in seen:
            continue
        seen.add(key)
        if not out:
            out.append(rec)
            continue
        last = out[-1]
        if rec.norm_sq <= last.norm_sq:
            continue
        if rec.error_sq.hi < last.error_sq.lo:
            out.append(rec)
    return out


def merge_staircases(*lists: Sequence[ApproximationRecord]) -> List[ApproximationRecord]:
    """Associative, order-independent merge of search windows."""
    allrecs = [r for lst in lists for r in lst]
    return staircase_filter(allrecs)


def _thresholds(height_limit: int, ratio: int = 2) -> List[int]:
    out = []
    t = ratio
    while t < height_limit:
        out.append(t)
        t *= ratio
    out.append(height_limit)
    return out


def record_search_primal(
    theta: ThetaPoint,
    d: int,
    height_limit: int,
    mode: str = "EXHAUSTIVE",
    prec: int = 128,
    node_budget: int = 4_000_000,
) -> List[ApproximationRecord]:
    """Best-approximation staircase for the wedge-error system at level d."""
    if not 0 <= d <= theta.n - 1:
        raise ValueError(f"level d={d} out of range for n={theta.n}")
    return _record_search(theta, d, "primal", height_limit, mode, prec, node_budget)


def record_search_dual(
    theta: ThetaPoint,
    d: int,
    height_limit: int,
    mode: str = "EXHAUSTIVE",
    prec: int = 128,
    node_budget: int = 4_000_000,
) -> List[ApproximationRecord]:
    """Staircase for the contraction-error system at level d (degree n-d)."""
    if not 0 <= d <= theta.n - 1:
        raise ValueError(f"level d={d} out of range for n={theta.n}")
    return _record_search(theta, d, "dual", height_limit, mode, prec, node_budget)


def _record_search(theta, d, kind, height_limit, mode, prec, node_budget):
    records: List[ApproximationRecord] = []
    omega_hint = Fraction(d + 1, theta.n - d)
    for t in _thresholds(height_limit):
        t_sq = Fraction(t) * t
        if mode == "EXHAUSTIVE":
            x, err = exact_min_error(theta, d, kind, t_sq, prec=prec, node_budget=node_budget)
            rec = ApproximationRecord(kind, d, theta, x, Fraction(x.norm_sq()), err, prec)
        elif mode == "REDUCED":
            rec = _reduced_record(theta, d, kind, t, omega_hint, prec)
            if rec is None:
                continue
        else:
            raise ValueError(f"unknown search mode {mode!r}")
        records.append(rec)
        inst = rec.instant_exponent()
        if inst is not None and inst.lo > omega_hint:
            omega_hint = rec_rational_exponent(rec)
    return staircase_filter(records)


def rec_rational_exponent(rec: ApproximationRecord, denominator: int = 64) -> Fraction:
    """Rational snapshot of a record's instant exponent (rounded down)."""
    inst = rec.instant_exponent()
    if inst is None:
        raise ValueError("record has unit norm")
    return Fraction(math.floor(inst.lo * denominator), denominator)


def primal_body_parameters(norm_sq: Fraction, omega: Fraction, d: int) -> Tuple[ScalePower, ScalePower]:
    """Body parameters from an approximation of squared norm H^2 at level d:
    U = H^((d w + d + 1)/(d+1)), V = H^(-w/(d+1)); the defining identities
    U V^d = H and V^(d+1) = H^-w are asserted on the exponents."""
    e_u = Fraction(d * omega + d + 1, d + 1)
    e_v = Fraction(-omega, d + 1)
    assert e_u + d * e_v == 1
    assert (d + 1) * e_v == -omega
    return ScalePower.root_power(norm_sq, e_u), ScalePower.root_power(norm_sq, e_v)


def dual_body_parameters(norm_sq: Fraction, omega: Fraction, d: int, n: int) -> Tuple[ScalePower, ScalePower]:
    """Dual-side parameters: U = H^(1/(n-d)), V = H^(-((n-d)w + n-d-1)/(n-d));
    identities U^(n-d) = H and U^(n-d-1) V = H^-w are asserted."""
    k = n - d
    e_u = Fraction(1, k)
    e_v = Fraction(-(k * omega + k - 1), k)
    assert k * e_u == 1
    assert (k - 1) * e_u + e_v == -omega
    return ScalePower.root_power(norm_sq, e_u), ScalePower.root_power(norm_sq, e_v)


def _reduced_record(theta, d, kind, t, omega_hint, prec) -> Optional[ApproximationRecord]:
    n = theta.n
    h_sq = Fraction(t) * t
    omega = max(omega_hint, Fraction(-1))
    if kind == "primal":
        u, v = primal_body_parameters(h_sq, omega, d)
        body = compound_body(primal_body(theta, u, v), d + 1)
    else:
        u, v = dual_body_parameters(h_sq, omega, d, n)
        body = compound_body(dual_body(theta, u, v), n - d)
    profile = minima_reduced(body, prec=prec)
    x = profile.witness_multivectors()[0]
    return make_record(theta, x, kind, d, prec)


# ---------------------------------------------------------------------------
# estimates


@dataclass
class ExponentEstimate:
    """Lower-bound evidence for one exponent."""

    which: Tuple[str, object]  # ("ordinary", d) | ("uniform", 0) | ("uniform", "top")
    lower_bound_lo: Fraction
    lower_bound_hi: Optional[Fraction]  # None encodes +infinity
    records: List[ApproximationRecord] = field(default_factory=list)
    search_height_sq: Fraction = Fraction(0)
    trend: List[float] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)
    grid: List[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "which": [str(self.which[0]), str(self.which[1])],
            "lower_bound": [str(self.lower_bound_lo),
                            "inf" if self.lower_bound_hi is None else str(self.lower_bound_hi)],
            "search_height_sq": str(self.search_height_sq),
            "trend": self.trend,
            "flags": sorted(self.flags),
            "grid": self.grid,
            "records": [r.to_dict() for r in self.records],
        }


def estimate_omega(records: Sequence[ApproximationRecord], trend_window: int = 5) -> ExponentEstimate:
    """Running supremum of instant exponents over a staircase."""
    if not records:
        raise ValueError("cannot estimate from an empty record list")
    insts = []
    for rec in records:
        inst = rec.instant_exponent()
        if inst is not None:
            insts.append(inst)
    if not insts:
        raise ValueError("no record with norm > 1")
    lo = max(e.lo for e in insts)
    hi = max(e.hi for e in insts)
    running = []
    cur = None
    for e in insts:
        cur = e.lo if cur is None else max(cur, e.lo)
        running.append(cur)
    flags = []
    window = running[-trend_window:]
    if len(window) >= 2 and all(a < b for a, b in zip(window, window[1:])):
        flags.append("NONCONVERGED")
    return ExponentEstimate(
        which=("ordinary", records[-1].d),
        lower_bound_lo=lo,
        lower_bound_hi=hi,
        records=list(records),
        search_height_sq=max(r.norm_sq for r in records),
        trend=[float(e.midpoint) for e in insts[-trend_window:]],
        flags=flags,
    )


def uniform_min_error(
    theta: ThetaPoint,
    which: object,
    box_bound: int,
    prec: int = 128,
    precision_cap: int = 4096,
    node_budget: int = 4_000_000,
) -> Tuple[Vec, RealEnclosure]:
    """Exact minimum of the classical error system over the sup-norm box.

    which = 0: simultaneous system max_i |x_0 t_i - x_i|; which = "top":
    the linear form |x_0 + x_1 t_1 + ... + x_n t_n|.  Returns the squared
    error of the best nonzero box point (sup-norm <= box_bound).
    """
    n = theta.n
    dim = n + 1
    x_bound = int(box_bound)
    if x_bound < 1:
        raise ValueError("box bound must be >= 1")

    while True:
        y = theta.y_enclosures(prec)
        if which == 0:
            err_rows = []
            for i in range(1, n + 1):
                row = [RealEnclosure.point(0)] * dim
                row[0] = y[i]
                row[i] = RealEnclosure.point(-1)
                err_rows.append(row)
        elif which == "top":
            err_rows = [list(y)]
        else:
            raise ValueError(f"unknown uniform system {which!r}")
        mids, deltas = _row_midpoints_and_delta(err_rows)
        delta_total_sq = sum((dd * dd for dd in deltas), Fraction(0))

        def true_err_sq(x):
            # max of |row(x)| over rows, squared (the sup-norm system)
            best = None
            for row in err_rows:
                val = RealEnclosure.point(0)
                for c, xi in zip(row, x):
                    if xi:
                        val = val + c * xi
                q = val.square()
                best = q if best is None else RealEnclosure(max(best.lo, q.lo), max(best.hi, q.hi))
            return best

        t_sq = Fraction(x_bound) ** 2
        best_x, best_err = None, None
        for j in range(dim):
            e = [0] * dim
            e[j] = 1
            err = true_err_sq(e)
            if best_err is None or err.hi < best_err.hi:
                best_err, best_x = err, e

        v_sq = best_err.hi if best_err.hi > 0 else Fraction(1, 1 << (2 * prec))
        for _ in range(60):
            gram = gram_of_rows([(mid, v_sq) for mid in mids], dim)
            for i in range(dim):
                gram[i][i] += Fraction(1, t_sq)
            improved = False
            for cand in lll_reduce(gram, delta=Fraction(3, 4)):
                if max(abs(c) for c in cand) > x_bound:
                    continue
                err = true_err_sq(cand)
                if err.hi * 4 < v_sq:
                    v_sq = max(err.hi, Fraction(1, 1 << (4 * precision_cap)))
                    best_err, best_x = err, list(cand)
                    improved = True
                    break
                if err.hi < best_err.hi:
                    best_err, best_x = err, list(cand)
            if not improved:
                break

        if best_err.hi == 0:
            raise DegenerateRecord("uniform system hit an exact zero")
        if delta_total_sq * t_sq * dim * 256 > best_err.hi:
            prec *= 2
            if prec > precision_cap:
                raise PrecisionExhausted("uniform-system precision would exceed the cap")
            continue

        # box membership: sum x_i^2/x_bound^2 <= dim; error rows: each
        # |row| <= best -> surrogate sum <= rows*(best*(17/16))^2
        n_rows = len(mids)
        bound = Fraction(dim) + Fraction(n_rows) * Fraction(289, 256) + Fraction(1, 256)
        gram = gram_of_rows([(mid, best_err.hi) for mid in mids], dim)
        for i in range(dim):
            gram[i][i] += Fraction(1, t_sq)
        cands = [c for c in enumerate_quadratic(gram, bound, node_budget=node_budget)
                 if max(abs(v) for v in c) <= x_bound]
        canon = best_x if next(v for v in best_x if v) > 0 else [-v for v in best_x]
        if canon not in cands:
            cands.append(canon)

        def rescore(p):
            yy = theta.y_enclosures(p)
            if which == 0:
                rows_p = []
                for i in range(1, n + 1):
                    row = [RealEnclosure.point(0)] * dim
                    row[0] = yy[i]
                    row[i] = RealEnclosure.point(-1)
                    rows_p.append(row)
            else:
                rows_p = [list(yy)]
            def err_of(x):
                best = None
                for row in rows_p:
                    val = RealEnclosure.point(0)
                    for c, xi in zip(row, x):
                        if xi:
                            val = val + c * xi
                    q = val.square()
                    best = q if best is None else RealEnclosure(max(best.lo, q.lo), max(best.hi, q.hi))
                return best
            return err_of

        scored = [(true_err_sq(c), c) for c in cands]
        p = prec
        while True:
            min_hi = min(e.hi for e, _ in scored)
            front = [(e, c) for e, c in scored if e.lo <= min_hi]
            settled = len(front) == 1 or all(e == front[0][0] for e, _ in front)
            if settled and min(e.lo for e, _ in front) > 0:
                break
            if min_hi == 0:
                raise DegenerateRecord("uniform system hit an exact zero")
            if p >= precision_cap:
                break
            p *= 2
            err_of = rescore(p)
            scored = [(err_of(c), c) for _, c in scored]
        min_hi = min(e.hi for e, _ in scored)
        front = sorted([(e, c) for e, c in scored if e.lo <= min_hi], key=lambda t: t[1])
        err_enc = RealEnclosure(min(e.lo for e, _ in scored), min_hi)
        if err_enc.hi == 0:
            raise DegenerateRecord("uniform system hit an exact zero")
        return front[0][1], err_enc


def estimate_uniform(
    theta: ThetaPoint,
    which: object,
    grid: Sequence[int],
    mode: str = "EXHAUSTIVE",
    tail_window: int = 4,
    prec: int = 128,
    log_prec: int = 64,
) -> ExponentEstimate:
    """Grid estimate of a uniform exponent: min over the grid tail of
    -log m(X) / log X.  Flagged HEURISTIC-UNIFORM: a finite grid can only
    sample the for-all-large-X quantifier."""
    if which not in (0, "top"):
        raise ValueError("which must be 0 or 'top'")
    if not grid:
        raise ValueError("empty grid")
    grid = sorted(set(int(g) for g in grid))
    if grid[0] < 2:
        raise ValueError("grid values must be >= 2")
    per_grid = []
    for g in grid:
        x, err_sq = uniform_min_error(theta, which, g, prec=prec)
        per_grid.append((g, x, err_sq))
    tail = per_grid[-tail_window:]
    los, his = [], []
    for g, _, err_sq in tail:
        log_err = err_sq.log2(log_prec)
        log_x = RealEnclosure.point(Fraction(g) ** 2).log2(log_prec)
        inst = (-log_err) / log_x
        los.append(inst.lo)
        his.append(inst.hi)
    return ExponentEstimate(
        which=("uniform", which),
        lower_bound_lo=min(los),
        lower_bound_hi=min(his),
        search_height_sq=Fraction(grid[-1]) ** 2,
        trend=[float((a + b) / 2) for a, b in zip(los, his)],
        flags=["HEURISTIC-UNIFORM"],
        grid=list(grid),
    )
