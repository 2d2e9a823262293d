import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest

from transference import linalg
from transference.exterior import (
    DimensionMismatch,
    Multivector,
    basis_multivectors,
    contract,
    contraction_compose_check,
    dot,
    hodge,
    merge_sign,
    wedge,
    wedge_kernel,
)


def random_vector(rng, dim, bound=9):
    return [rng.randint(-bound, bound) for _ in range(dim)]


def random_multivector(rng, dim, degree, bound=9, terms=None):
    monos = list(combinations(range(1, dim + 1), degree))
    coeffs = {}
    for mono in monos if terms is None else rng.sample(monos, min(terms, len(monos))):
        coeffs[mono] = rng.randint(-bound, bound)
    return Multivector(dim, degree, coeffs)


def contraction_shuffle_oracle(ys, xs):
    """Contraction of decomposables via the explicit shuffle sum.

    Sum over substitutions sigma of {1..r} with sigma(1) < ... < sigma(r-s)
    of sgn(sigma) * prod_j (y_j . x_sigma(r-s+j)) * x_sigma(1) ^ ... ^ x_sigma(r-s).
    """
    r, s = len(xs), len(ys)
    dim = xs[0].dim
    result = Multivector.zero(dim, r - s)
    for tail in permutations(range(r), s):
        head = tuple(i for i in range(r) if i not in tail)
        # head stays sorted; sign of the permutation (head, tail) of 0..r-1
        perm = head + tail
        inv = sum(1 for a in range(r) for b in range(a + 1, r) if perm[a] > perm[b])
        sign = -1 if inv & 1 else 1
        coeff = Fraction(1)
        for j, t in enumerate(tail):
            coeff *= Fraction(ys[j].dot(xs[t]))
        if coeff == 0:
            continue
        term = Multivector.scalar(dim, sign * coeff)
        for h in head:
            term = term.wedge(xs[h])
        result = result + term
    return result


def test_merge_sign():
    assert merge_sign((1,), (2,)) == 1
    assert merge_sign((2,), (1,)) == -1
    assert merge_sign((1,), (1,)) == 0
    assert merge_sign((2, 3), (1,)) == 1  # two inversions


def test_wedge_alternation():
    e1 = Multivector.basis(3, (1,))
    assert e1.wedge(e1).is_zero()
    v = Multivector.from_vector([3, -2, 5])
    assert v.wedge(v).is_zero()


def test_wedge_linearity_example():
    e1 = Multivector.basis(3, (1,))
    e2 = Multivector.basis(3, (2,))
    assert (e1 + e2).wedge(e2) == e1.wedge(e2)


def test_wedge_minor_example():
    x = Multivector.from_vector([1, 1, 0])
    y = Multivector.from_vector([0, 1, 1])
    w = x.wedge(y)
    assert w.coefficient((1, 2)) == 1
    assert w.coefficient((1, 3)) == 1
    assert w.coefficient((2, 3)) == 1
    assert w.norm_sq() == 3


def test_dot_examples():
    e12 = Multivector.basis(3, (1, 2))
    assert e12.dot(e12) == 1
    w = Multivector.from_vector([1, 1, 0]).wedge(Multivector.from_vector([0, 1, 1]))
    assert e12.dot(w) == 1


def test_norm_sq_examples():
    assert Multivector.zero(4, 2).norm_sq() == 0
    x = Multivector(3, 2, {(1, 2): 1, (2, 3): 1})
    assert x.norm_sq() == 2


def test_contract_single_vector_example():
    e1 = Multivector.basis(3, (1,))
    e12 = Multivector.basis(3, (1, 2))
    res = e1.contract(e12)
    assert res == Multivector(3, 1, {(2,): -1})


def test_contract_equal_degree_is_dot():
    rng = random.Random(23)
    for _ in range(50):
        dim = rng.randint(2, 5)
        deg = rng.randint(1, dim)
        x = random_multivector(rng, dim, deg)
        y = random_multivector(rng, dim, deg)
        c = y.contract(x)
        assert c.degree == 0
        assert c.coefficient(()) == y.dot(x)


def test_contract_degree_error():
    x = Multivector.basis(3, (1,))
    y = Multivector.basis(3, (1, 2))
    with pytest.raises(DimensionMismatch):
        y.contract(x)


def test_cauchy_binet_gram_determinant():
    rng = random.Random(31)
    for _ in range(100):
        dim = rng.randint(2, 6)
        r = rng.randint(1, min(3, dim))
        xs = [random_vector(rng, dim) for _ in range(r)]
        ys = [random_vector(rng, dim) for _ in range(r)]
        X = Multivector.from_vector(xs[0])
        for v in xs[1:]:
            X = X.wedge(Multivector.from_vector(v))
        Y = Multivector.from_vector(ys[0])
        for v in ys[1:]:
            Y = Y.wedge(Multivector.from_vector(v))
        gram = [[sum(a * b for a, b in zip(x, y)) for y in ys] for x in xs]
        assert X.dot(Y) == linalg.det(gram)


def test_contraction_adjoint_law():
    rng = random.Random(37)
    checked = 0
    while checked < 100:
        dim = rng.randint(3, 6)
        r = rng.randint(1, dim)
        s = rng.randint(0, r)
        X = random_multivector(rng, dim, r, terms=3)
        Y = random_multivector(rng, dim, s, terms=3)
        lhs = Y.contract(X)
        for Z in basis_multivectors(dim, r - s):
            assert Z.dot(lhs) == Z.wedge(Y).dot(X)
        checked += 1


def test_contraction_composition_law():
    rng = random.Random(41)
    checked = 0
    while checked < 100:
        dim = rng.randint(3, 6)
        r = rng.randint(2, dim)
        s = rng.randint(0, r - 1)
        s2 = rng.randint(0, r - s)
        X = random_multivector(rng, dim, r, terms=3)
        Y = random_multivector(rng, dim, s, terms=3)
        Y2 = random_multivector(rng, dim, s2, terms=3)
        assert contraction_compose_check(Y, Y2, X)
        checked += 1


def test_contraction_scalar_identity():
    one = Multivector.scalar(4, 1)
    X = Multivector.basis(4, (1, 3, 4))
    assert one.contract(X) == X


def test_contraction_shuffle_sum_oracle():
    rng = random.Random(43)
    for _ in range(60):
        dim = rng.randint(3, 6)
        r = rng.randint(1, min(4, dim))
        s = rng.randint(1, r)
        xs = [Multivector.from_vector(random_vector(rng, dim, 5)) for _ in range(r)]
        ys = [Multivector.from_vector(random_vector(rng, dim, 5)) for _ in range(s)]
        X = xs[0]
        for v in xs[1:]:
            X = X.wedge(v)
        Y = ys[0]
        for v in ys[1:]:
            Y = Y.wedge(v)
        assert Y.contract(X) == contraction_shuffle_oracle(ys, xs)


def test_hodge_examples():
    e1 = Multivector.basis(3, (1,))
    assert e1.hodge() == Multivector.basis(3, (2, 3))
    # shuffle sign: *e2 = -e1^e3 in dim 3
    assert Multivector.basis(3, (2,)).hodge() == Multivector(3, 2, {(1, 3): -1})


def test_hodge_involution_and_isometry():
    rng = random.Random(47)
    for _ in range(100):
        dim = rng.randint(3, 6)
        r = rng.randint(0, dim)
        X = random_multivector(rng, dim, r, terms=4)
        Y = random_multivector(rng, dim, r, terms=4)
        sign = (-1) ** (r * (dim - r))
        assert X.hodge().hodge() == X.scale(sign)
        assert X.hodge().dot(Y.hodge()) == X.dot(Y)
        assert X.hodge().norm_sq() == X.norm_sq()


def test_hodge_duality_law():
    rng = random.Random(53)
    checked = 0
    while checked < 100:
        dim = rng.randint(3, 6)
        r = rng.randint(0, dim)
        s = rng.randint(0, dim - r)
        X = random_multivector(rng, dim, r, terms=3)
        Y = random_multivector(rng, dim, s, terms=3)
        assert Y.wedge(X).hodge() == Y.contract(X.hodge())
        checked += 1


def test_graded_anticommutativity():
    rng = random.Random(59)
    for _ in range(100):
        dim = rng.randint(2, 6)
        r = rng.randint(0, dim)
        s = rng.randint(0, dim - r)
        X = random_multivector(rng, dim, r, terms=3)
        Y = random_multivector(rng, dim, s, terms=3)
        assert X.wedge(Y) == Y.wedge(X).scale((-1) ** (r * s))


def test_wedge_kernel_orthogonal_complement():
    rng = random.Random(61)
    checked = 0
    while checked < 40:
        dim = rng.randint(3, 6)
        r = rng.randint(1, dim - 1)
        vs = [random_vector(rng, dim, 5) for _ in range(r)]
        X = Multivector.from_vector(vs[0])
        for v in vs[1:]:
            X = X.wedge(Multivector.from_vector(v))
        if X.is_zero():
            continue
        kernel = wedge_kernel(X.hodge())
        # kernel of v ^ (*X) is the orthogonal complement of span(vs)
        assert len(kernel) + linalg.rank(vs) == dim
        for w in kernel:
            for v in vs:
                assert sum(a * b for a, b in zip(v, w)) == 0
        checked += 1


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Multivector.basis(3, (1,)).wedge(Multivector.basis(4, (1,)))
    with pytest.raises(DimensionMismatch):
        Multivector.basis(3, (1,)).dot(Multivector.basis(3, (1, 2)))


def test_primitive_part():
    X = Multivector(3, 2, {(1, 2): -4, (1, 3): -8})
    P = X.primitive_part()
    assert P == Multivector(3, 2, {(1, 2): 1, (1, 3): 2})
    assert P.is_primitive()
    assert X.content() == 4


def test_payload_roundtrip():
    rng = random.Random(67)
    for _ in range(20):
        X = random_multivector(rng, 5, rng.randint(0, 5), terms=4)
        assert Multivector.from_payload(X.to_payload()) == X
