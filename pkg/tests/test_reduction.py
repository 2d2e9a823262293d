import random
from fractions import Fraction
from itertools import product

import pytest

from transference.reduction import (
    BudgetExceeded,
    enumerate_quadratic,
    gram_in_basis,
    gram_of_rows,
    gram_schmidt_data,
    identity_basis,
    lll_reduce,
    quadratic_value,
)


def random_pd_gram(rng, m, spread=6):
    """Random positive definite integer Gram via A^T A with unit diagonal boost."""
    a = [[rng.randint(-spread, spread) for _ in range(m)] for _ in range(m)]
    g = [[sum(a[k][i] * a[k][j] for k in range(m)) for j in range(m)] for i in range(m)]
    for i in range(m):
        g[i][i] += 1
    return [[Fraction(x) for x in row] for row in g]


def brute_force_short(gram, bound):
    # valid window because the test Grams are A^T A + I, so Q(x) >= |x|^2
    m = len(gram)
    import math

    w = math.isqrt(int(bound)) + 1
    out = []
    for x in product(range(-w, w + 1), repeat=m):
        if all(v == 0 for v in x):
            continue
        if quadratic_value(gram, list(x)) <= bound:
            first = next(v for v in x if v != 0)
            t = tuple(-v for v in x) if first < 0 else x
            out.append(t)
    return sorted(set(out))


def test_gram_schmidt_positive_definite():
    rng = random.Random(5)
    for _ in range(20):
        g = random_pd_gram(rng, rng.randint(2, 5))
        mu, B = gram_schmidt_data(g)
        assert all(b > 0 for b in B)
        # product of B equals det of the Gram
        from transference.linalg import det

        prod = Fraction(1)
        for b in B:
            prod *= b
        assert prod == det(g)


def test_gram_schmidt_rejects_semidefinite():
    g = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]]
    with pytest.raises(ValueError):
        gram_schmidt_data(g)


def test_lll_unimodular_and_reduced():
    rng = random.Random(11)
    for _ in range(20):
        m = rng.randint(2, 5)
        g = random_pd_gram(rng, m)
        basis = lll_reduce(g)
        from transference.linalg import det

        d = det([[Fraction(v) for v in row] for row in basis])
        assert abs(d) == 1
        # Lovász condition holds on the reduced basis
        mu, B = gram_schmidt_data(gram_in_basis(g, basis))
        for k in range(1, m):
            assert B[k] >= (Fraction(99, 100) - mu[k][k - 1] ** 2) * B[k - 1]
            for j in range(k):
                assert abs(mu[k][j]) <= Fraction(1, 2)


def test_lll_finds_short_vector_two_scale():
    # lattice with a deliberately skewed form: x0^2/10^6 + (x0*7/10 - x1)^2 * 10^6
    rows = [
        ([Fraction(1), Fraction(0)], Fraction(10**6)),
        ([Fraction(7, 10), Fraction(-1)], Fraction(1, 10**6)),
    ]
    g = gram_of_rows(rows, 2)
    basis = lll_reduce(g)
    values = [quadratic_value(g, b) for b in basis]
    assert min(values) <= 1  # (10, 7) has tiny form value
    assert [10, 7] in [b if b[0] > 0 else [-v for v in b] for b in basis] or min(values) < 1


def test_enumerate_matches_brute_force():
    rng = random.Random(17)
    for _ in range(25):
        m = rng.randint(2, 4)
        g = random_pd_gram(rng, m, spread=3)
        bound = Fraction(rng.randint(1, 30))
        got = enumerate_quadratic(g, bound)
        expected = brute_force_short(g, bound)
        assert sorted(map(tuple, got)) == expected
        for x in got:
            assert quadratic_value(g, x) <= bound


def test_enumerate_canonical_signs():
    g = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    got = enumerate_quadratic(g, Fraction(1))
    assert got == [[0, 1], [1, 0]]


def test_enumerate_budget():
    g = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    with pytest.raises(BudgetExceeded):
        enumerate_quadratic(g, Fraction(10**8), node_budget=100)


def test_gram_of_rows_value():
    rows = [
        ([Fraction(1), Fraction(2)], Fraction(4)),
        ([Fraction(0), Fraction(1)], Fraction(9)),
    ]
    g = gram_of_rows(rows, 2)
    x = [3, -1]
    direct = Fraction((3 - 2) ** 2, 4) + Fraction(1, 9)
    assert quadratic_value(g, x) == direct
