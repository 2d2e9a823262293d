"""Exact lattice reduction and enumeration for rational quadratic forms.

The lattice is always Z^m; geometry enters through a positive definite
Gram matrix with Fraction entries.  LLL runs in exact rational
arithmetic (the Gram matrix is cleared to integers first, which only
rescales the form), and Fincke-Pohst enumeration returns provably all
integer vectors inside a quadratic-form ball.  No floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from .numerics import sqrt_up

Vec = List[int]
FracMatrix = List[List[Fraction]]


class BudgetExceeded(Exception):
    """An enumeration or reduction exceeded its node budget."""


def identity_basis(m: int) -> List[Vec]:
    return [[int(i == j) for j in range(m)] for i in range(m)]


def _integerized(gram: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    """Scale a rational Gram matrix by the lcm of denominators (exact)."""
    scale = 1
    for row in gram:
        for x in row:
            d = Fraction(x).denominator
            scale = scale * d // math.gcd(scale, d)
    return [[int(Fraction(x) * scale) for x in row] for row in gram]


def _form_value(gram, u: Vec, v: Vec):
    total = 0
    for i, ui in enumerate(u):
        if ui:
            row = gram[i]
            total += ui * sum(row[j] * vj for j, vj in enumerate(v) if vj)
    return total


def gram_in_basis(gram, basis: Sequence[Vec]) -> List[List[Fraction]]:
    return [[Fraction(_form_value(gram, u, v)) for v in basis] for u in basis]


def gram_schmidt_data(gram: Sequence[Sequence[Fraction]]) -> Tuple[FracMatrix, List[Fraction]]:
    """Exact Gram-Schmidt coefficients mu and squared GS norms B."""
    m = len(gram)
    mu = [[Fraction(0)] * m for _ in range(m)]
    B = [Fraction(0)] * m
    for i in range(m):
        for j in range(i):
            num = Fraction(gram[i][j]) - sum(mu[i][k] * mu[j][k] * B[k] for k in range(j))
            if B[j] == 0:
                raise ValueError("Gram matrix is not positive definite")
            mu[i][j] = num / B[j]
        B[i] = Fraction(gram[i][i]) - sum(mu[i][k] ** 2 * B[k] for k in range(i))
        if B[i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
    return mu, B


def lll_reduce(
    gram: Sequence[Sequence[Fraction]],
    delta: Fraction = Fraction(99, 100),
    max_iterations: int = 200_000,
) -> List[Vec]:
    """LLL-reduced basis of Z^m under the given form; returns basis rows.

    Exact arithmetic throughout; `delta` is the Lovász parameter.  The
    returned rows are a unimodular transform of the identity basis.
    """
    igram = _integerized(gram)
    m = len(igram)
    basis = identity_basis(m)

    def ip(i: int, j: int) -> int:
        return _form_value(igram, basis[i], basis[j])

    # cached exact GSO of the current basis
    def gso():
        return gram_schmidt_data(gram_in_basis(igram, basis))

    mu, B = gso()
    k = 1
    iterations = 0
    while k < m:
        iterations += 1
        if iterations > max_iterations:
            raise BudgetExceeded("LLL iteration budget exceeded")
        # size-reduce b_k against b_{k-1}, ..., b_0 with incremental mu updates
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                basis[k] = [a - r * b for a, b in zip(basis[k], basis[j])]
                for jp in range(j):
                    mu[k][jp] -= r * mu[j][jp]
                mu[k][j] -= r
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            mu, B = gso()
            k = max(k - 1, 1)
    return basis


def _int_range(center: Fraction, radius_sq: Fraction) -> Tuple[int, int]:
    """Exact integer interval {y : (y - center)^2 <= radius_sq}."""
    if radius_sq < 0:
        return 1, 0
    r_hi = sqrt_up(radius_sq, 16)
    lo = math.ceil(center - r_hi)
    hi = math.floor(center + r_hi)
    while lo <= hi and (lo - center) ** 2 > radius_sq and lo < center:
        lo += 1
    while lo <= hi and (hi - center) ** 2 > radius_sq and hi > center:
        hi -= 1
    if lo > hi or (lo - center) ** 2 > radius_sq or (hi - center) ** 2 > radius_sq:
        return 1, 0
    return lo, hi


def enumerate_quadratic(
    gram: Sequence[Sequence[Fraction]],
    bound: Fraction,
    node_budget: int = 2_000_000,
    pre_reduce: bool = True,
) -> List[Vec]:
    """All nonzero x in Z^m with x^T G x <= bound, one per ± pair.

    Complete by construction: Fincke-Pohst over an exact Gram-Schmidt
    decomposition, preprocessed by LLL for efficiency.  Vectors are
    returned with their first nonzero coordinate positive, sorted.
    """
    m = len(gram)
    bound = Fraction(bound)
    if bound < 0:
        return []
    if pre_reduce:
        basis = lll_reduce(gram, delta=Fraction(3, 4))
    else:
        basis = identity_basis(m)
    red_gram = gram_in_basis(gram, basis)
    mu, B = gram_schmidt_data(red_gram)

    results: List[Vec] = []
    y = [0] * m
    nodes = 0

    def dfs(level: int, remaining: Fraction):
        nonlocal nodes
        if level < 0:
            if any(y):
                x = [0] * m
                for i, yi in enumerate(y):
                    if yi:
                        row = basis[i]
                        for j in range(m):
                            x[j] += yi * row[j]
                results.append(x)
            return
        center = -sum(mu[j][level] * y[j] for j in range(level + 1, m))
        lo, hi = _int_range(center, remaining / B[level])
        for yi in range(lo, hi + 1):
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded("enumeration node budget exceeded")
            y[level] = yi
            used = B[level] * (yi - center) ** 2
            dfs(level - 1, remaining - used)
        y[level] = 0

    dfs(m - 1, bound)

    canonical = set()
    out = []
    for x in results:
        first = next(v for v in x if v != 0)
        if first < 0:
            x = [-v for v in x]
        t = tuple(x)
        if t not in canonical:
            canonical.add(t)
            out.append(list(t))
    out.sort()
    return out


def quadratic_value(gram: Sequence[Sequence[Fraction]], x: Vec) -> Fraction:
    return Fraction(_form_value(gram, x, x))


def gram_of_rows(rows: Sequence[Tuple[Sequence[Fraction], Fraction]], m: int) -> FracMatrix:
    """Gram matrix of the form sum_i (<c_i, x> / s_i)^2 from (c_i, s_i^2) rows."""
    g = [[Fraction(0)] * m for _ in range(m)]
    for coeffs, scale_sq in rows:
        for i in range(m):
            ci = Fraction(coeffs[i])
            if ci == 0:
                continue
            for j in range(i, m):
                cj = Fraction(coeffs[j])
                if cj == 0:
                    continue
                g[i][j] += ci * cj / scale_sq
    for i in range(m):
        for j in range(i):
            g[i][j] = g[j][i]
    return g
