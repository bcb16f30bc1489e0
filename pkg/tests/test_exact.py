from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diophlab.errors import FoldNotApplicable, InvalidSurd, NoSignChange, NotPrime, ValidationError
from diophlab.exact import (
    ContinuedFraction,
    SemiregularCF,
    as_fraction,
    cf_expand,
    cf_value,
    continuant,
    fold,
    fold_identity_rhs,
    is_prime,
    nearest_int_distance,
    padic_norm,
    partial_quotients,
    semiregular_value,
    valuation,
)
from diophlab.reals import (
    Interval,
    PolyRootOracle,
    RationalOracle,
    SurdOracle,
    compare,
    count_roots,
    golden,
    log_interval,
    nth_root_interval,
    sqrt_interval,
    sqrt_oracle,
    surd_cf_stream,
)

quotients = st.lists(st.integers(1, 50), min_size=0, max_size=12)


def euclid(p, q):
    out = []
    while q:
        out.append(p // q)
        p, q = q, p % q
    return out


def test_cf_expand_examples():
    assert cf_expand(Fraction(0)) == ContinuedFraction(0, ())
    assert cf_expand(Fraction(2, 5)).quotients == (2, 2)
    assert cf_expand(Fraction(8, 13)).quotients == (1, 1, 1, 1, 2)
    assert cf_value(ContinuedFraction(3, ())) == 3
    assert cf_value(ContinuedFraction(0, (1, 1, 1, 1, 2))) == Fraction(8, 13)


def test_cf_matches_plain_euclid():
    for q in range(1, 120):
        for p in range(-q, 2 * q):
            cf = cf_expand(Fraction(p, q))
            g = Fraction(p, q)
            assert [cf.b0, *cf.quotients] == euclid(g.numerator, g.denominator)


def test_cf_roundtrip_all_small():
    for q in range(1, 501):
        for a in range(q + 1):
            x = Fraction(a, q)
            cf = cf_expand(x)
            assert cf_value(cf) == x
            assert cf.is_canonical()


@given(st.integers(-10, 10), quotients)
def test_canonical_twin_has_same_value(b0, qs):
    cf = ContinuedFraction(b0, tuple(qs) + (1,))
    assert cf_value(cf.canonical()) == cf_value(cf)


def test_as_fraction_rejects_garbage():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction(" -7 ") == -7
    for bad in ("3/0", "x", "1.5", "1/2/3"):
        with pytest.raises(ValidationError):
            as_fraction(bad)
    with pytest.raises(ValidationError):
        as_fraction(0.5)


@given(quotients)
def test_continuant_reversal(b):
    assert continuant(b) == continuant(b[::-1])


@given(quotients, quotients)
def test_continuant_split(a, b):
    # <a b> = <a><b> + <a without last><b without first>
    if a and b:
        assert continuant(a + b) == continuant(a) * continuant(b) + continuant(a[:-1]) * continuant(b[1:])


def test_continuant_is_denominator():
    assert continuant([]) == 1
    for q in range(2, 200):
        for a in range(1, q):
            if Fraction(a, q).denominator == q:
                assert continuant(partial_quotients(a, q)) == q


def test_fold_identity_random():
    rng = random.Random(7)
    done = 0
    while done < 1000:
        q = rng.randint(2, 5000)
        a = rng.randint(1, q - 1)
        x = Fraction(a, q)
        X = rng.randint(1, 30)
        cf = cf_expand(x)
        seq = fold(cf, X)
        assert continuant(seq) == fold_identity_rhs(cf.quotients, X)
        done += 1


def test_fold_examples_and_errors():
    assert fold(cf_expand(Fraction(1, 2)), 1) == (2, 1, 1, 1)
    assert continuant((2, 1, 1, 1)) == 8
    with pytest.raises(FoldNotApplicable):
        fold(ContinuedFraction(0, (2, 1)), 1)
    with pytest.raises(ValidationError):
        fold(ContinuedFraction(1, (2,)), 1)


def test_primes_and_valuations():
    small = [n for n in range(200) if all(n % d for d in range(2, int(n ** 0.5) + 1)) and n > 1]
    assert [n for n in range(200) if is_prime(n)] == small
    assert is_prime(2 ** 61 - 1)
    assert valuation(48, 2) == 4
    assert padic_norm(48, 2) == Fraction(1, 16)
    assert padic_norm(0, 3) == 0
    with pytest.raises(NotPrime):
        padic_norm(5, 4)


def test_nearest_int_distance():
    assert nearest_int_distance(Fraction(7, 3)) == Fraction(1, 3)
    assert nearest_int_distance(Fraction(-1, 4)) == Fraction(1, 4)
    assert nearest_int_distance(Fraction(5)) == 0


def test_semiregular_values():
    assert semiregular_value(SemiregularCF((2,))) == Fraction(1, 2)
    assert semiregular_value(SemiregularCF((3,))) == Fraction(2, 3)
    assert semiregular_value(SemiregularCF((2, 2))) == Fraction(1, 3)
    with pytest.raises(ValidationError):
        SemiregularCF((1, 3))


# real-number oracles ------------------------------------------------------

def test_interval_arithmetic_contains_truth():
    a = Interval(Fraction(1, 3), Fraction(1, 2))
    b = Interval(Fraction(-2), Fraction(1, 5))
    for x in (Fraction(1, 3), Fraction(5, 12), Fraction(1, 2)):
        for y in (Fraction(-2), Fraction(0), Fraction(1, 5)):
            assert (a * b).contains(x * y)
            assert (a - b).contains(x - y)
    assert a.square().lo == Fraction(1, 9)


@settings(max_examples=40)
@given(st.integers(2, 10 ** 6), st.integers(8, 120))
def test_sqrt_enclosure(n, bits):
    iv = sqrt_interval(n, bits)
    assert iv.lo * iv.lo <= n <= iv.hi * iv.hi
    assert iv.width <= Fraction(1, 1 << bits)


def test_log_and_roots():
    iv = log_interval(2, 80)
    assert Fraction(69314718055994530941, 10 ** 20) < iv.lo < iv.hi < Fraction(69314718055994530943, 10 ** 20)
    r = nth_root_interval(Fraction(2), 11, 64)
    assert r.lo ** 11 <= 2 <= r.hi ** 11


def test_surd_expansions():
    assert surd_cf_stream(0, 2, 1).period == (2,)
    e = sqrt_oracle(7).expansion()
    assert (e.b0, e.period) == (2, (1, 1, 1, 4))
    with pytest.raises(InvalidSurd):
        SurdOracle(0, 9, 1)
    g = golden().enclose(64)
    assert g.lo * g.lo - g.lo - 1 <= 0 <= g.hi * g.hi - g.hi - 1


def test_surd_fixed_point_agrees_with_enclosure():
    x = SurdOracle(-3, 5, -2)
    lo, hi = x.fixed(70)
    assert hi - lo <= 2
    assert 0.3819 < lo / 2 ** 70 < 0.382


def test_poly_root_oracle():
    t = PolyRootOracle((1, 0, -1, -1), (1, 2))
    iv = t.enclose(60)
    assert abs(float(iv.mid) - 1.324717957244746) < 1e-12
    assert count_roots((1, 0, -1, -1), Fraction(-5), Fraction(5)) == 1
    with pytest.raises(NoSignChange):
        PolyRootOracle((1, 0, -1, -1), (2, 3)).enclose(20)


def test_compare_oracles():
    assert compare(sqrt_oracle(2), Fraction(141421, 100000)) == 1
    assert compare(RationalOracle(Fraction(1, 3)), Fraction(1, 3)) == 0
    assert compare(golden(), sqrt_oracle(3)) == -1
