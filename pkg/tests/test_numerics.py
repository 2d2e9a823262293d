import random
from fractions import Fraction

import mpmath
import pytest

from transference.numerics import (
    AlgebraicDescription,
    Certificate,
    DecimalDescription,
    ExponentSchedule,
    ExtendedReal,
    InvalidDescription,
    LacunarySeriesDescription,
    PowerDescription,
    RationalDescription,
    RealEnclosure,
    RefinementFailure,
    certify_le,
    certify_le_extended,
    description_from_dict,
    eval_description,
    floor_log2,
    inth_root,
    log2_down,
    log2_up,
    poly_eval,
    pow_down,
    pow_up,
    sqrt_down,
    sqrt_up,
)

CUBE_POLY = (-1, -1, 0, 1)  # x^3 - x - 1, one real root in [1, 2]


def test_inth_root_exact_values():
    assert inth_root(0, 3) == 0
    assert inth_root(26, 3) == 2
    assert inth_root(27, 3) == 3
    assert inth_root(10**30, 2) == 10**15
    rng = random.Random(7)
    for _ in range(200):
        k = rng.randint(1, 9)
        r = rng.randint(0, 10**6)
        n = r**k + rng.randint(0, max(0, (r + 1) ** k - r**k - 1))
        got = inth_root(n, k)
        assert got**k <= n < (got + 1) ** k


def test_floor_log2():
    assert floor_log2(Fraction(1)) == 0
    assert floor_log2(Fraction(1, 2)) == -1
    assert floor_log2(Fraction(3, 2)) == 0
    assert floor_log2(Fraction(1024)) == 10
    rng = random.Random(3)
    for _ in range(300):
        x = Fraction(rng.randint(1, 10**9), rng.randint(1, 10**9))
        e = floor_log2(x)
        assert Fraction(2) ** e <= x < Fraction(2) ** (e + 1)


def test_sqrt_bounds():
    rng = random.Random(11)
    for _ in range(200):
        x = Fraction(rng.randint(0, 10**8), rng.randint(1, 10**4))
        lo = sqrt_down(x, 40)
        hi = sqrt_up(x, 40)
        assert lo * lo <= x <= hi * hi
        assert hi - lo <= Fraction(2, 1 << 40)


def test_log2_bounds_against_mpmath():
    mpmath.mp.prec = 200
    rng = random.Random(5)
    for _ in range(50):
        x = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
        lo = log2_down(x, 48)
        hi = log2_up(x, 48)
        truth = mpmath.log(mpmath.mpf(x.numerator) / x.denominator, 2)
        assert float(lo) <= truth <= float(hi), (x, lo, hi, truth)
        assert hi - lo <= Fraction(1, 1 << 45)


def test_pow_bounds():
    rng = random.Random(13)
    for _ in range(100):
        x = Fraction(rng.randint(1, 1000), rng.randint(1, 1000))
        e = Fraction(rng.randint(-8, 8), rng.randint(1, 6))
        lo = pow_down(x, e, 64)
        hi = pow_up(x, e, 64)
        # certify lo^q <= x^p <= hi^q without leaving the rationals
        p, q = e.numerator, e.denominator
        assert lo**q <= x**p <= hi**q
        assert hi - lo <= Fraction(2, 1 << 64)


def test_enclosure_arithmetic_contains():
    rng = random.Random(17)
    for _ in range(200):
        a = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
        b = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
        ea = RealEnclosure(a - Fraction(1, 64), a + Fraction(1, 128))
        eb = RealEnclosure(b - Fraction(1, 256), b + Fraction(1, 64))
        assert (ea + eb).contains(a + b)
        assert (ea - eb).contains(a - b)
        assert (ea * eb).contains(a * b)
        assert ea.square().contains(a * a)
        assert abs(ea).contains(abs(a))
        if not eb.contains(0):
            assert (ea / eb).contains(a / b)


def test_certify_le():
    one = RealEnclosure.point(1)
    two = RealEnclosure.point(2)
    assert certify_le(one, two) is Certificate.TRUE
    assert certify_le(RealEnclosure.point(3), two) is Certificate.FALSE
    assert certify_le(RealEnclosure(1, Fraction(5, 2)), RealEnclosure(2, 3)) is Certificate.UNDECIDED


def test_certify_le_extended():
    inf = ExtendedReal.infinity()
    fin = ExtendedReal.finite(RealEnclosure.point(10**9))
    assert certify_le_extended(fin, inf) is Certificate.TRUE
    assert certify_le_extended(inf, fin) is Certificate.FALSE
    assert certify_le_extended(inf, inf) is Certificate.TRUE


def test_eval_rational():
    enc = eval_description(RationalDescription(Fraction(1, 3)), 10)
    assert enc.width <= Fraction(1, 1 << 10)
    assert enc.contains(Fraction(1, 3))


def test_eval_decimal():
    enc = eval_description(DecimalDescription("0.1234567890"), 30)
    assert enc.contains(Fraction("0.1234567890"))


def test_eval_algebraic_cube_root():
    desc = AlgebraicDescription(CUBE_POLY, Fraction(1), Fraction(2))
    enc = eval_description(desc, 30)
    assert enc.width <= Fraction(1, 1 << 30)
    # sign-change certificate: the root is bracketed by the enclosure
    assert poly_eval(CUBE_POLY, enc.lo) <= 0 <= poly_eval(CUBE_POLY, enc.hi)
    # literature value of the real root of x^3 - x - 1
    assert enc.contains(Fraction("1.32471795724474602596090885"))


def test_eval_algebraic_rejects_no_sign_change():
    desc = AlgebraicDescription(CUBE_POLY, Fraction(2), Fraction(3))
    with pytest.raises(RefinementFailure):
        eval_description(desc, 10)


def test_eval_lacunary_series():
    desc = LacunarySeriesDescription(2, ExponentSchedule("power", 3))
    enc = eval_description(desc, 20)
    # exact truncation: 2^-3 + 2^-9 + 2^-27
    s3 = Fraction(1, 8) + Fraction(1, 512) + Fraction(1, 2**27)
    assert enc.contains(s3)
    assert enc.width <= Fraction(1, 1 << 20)


def test_schedule_validation():
    with pytest.raises(InvalidDescription):
        ExponentSchedule("power", 1)
    with pytest.raises(InvalidDescription):
        ExponentSchedule("arithmetic", 5)
    fact = ExponentSchedule("factorial")
    assert [fact.term(k) for k in (1, 2, 3, 4)] == [1, 2, 6, 24]


def test_eval_power_description():
    base = LacunarySeriesDescription(2, ExponentSchedule("power", 3))
    sq = PowerDescription(base, 2)
    enc = eval_description(sq, 40)
    base_enc = eval_description(base, 80)
    assert enc.contains(base_enc.lo * base_enc.lo) or enc.contains(base_enc.midpoint**2)
    assert enc.width <= Fraction(1, 1 << 40)


def test_containment_across_precisions():
    descs = [
        RationalDescription(Fraction(22, 7)),
        AlgebraicDescription(CUBE_POLY, Fraction(1), Fraction(2)),
        LacunarySeriesDescription(2, ExponentSchedule("power", 3)),
        PowerDescription(AlgebraicDescription(CUBE_POLY, Fraction(1), Fraction(2)), 2),
    ]
    for desc in descs:
        prev = None
        for p in (8, 16, 32, 64, 128):
            enc = eval_description(desc, p)
            assert enc.width <= Fraction(1, 1 << p)
            if prev is not None:
                assert prev.contains_enclosure(enc), (desc, p)
            prev = enc


def test_description_roundtrip():
    descs = [
        RationalDescription(Fraction(-7, 5)),
        DecimalDescription("0.25"),
        AlgebraicDescription(CUBE_POLY, Fraction(1), Fraction(2)),
        LacunarySeriesDescription(2, ExponentSchedule("power", 3)),
        PowerDescription(LacunarySeriesDescription(10, ExponentSchedule("factorial")), 2),
    ]
    for desc in descs:
        back = description_from_dict(desc.to_dict())
        assert eval_description(back, 20) == eval_description(desc, 20)
