from __future__ import annotations

import math
import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diophlab.errors import ValidationError
from diophlab.exact import SemiregularCF, semiregular_value
from diophlab.minkowski import (
    ZHAB_LAMBDA,
    QuotientSumProfile,
    block_quotients,
    compositions_min2,
    derivative_classify,
    descent_log_ratio,
    distribution_check,
    farey_franel,
    fixed_points,
    fourier_stieltjes,
    g_lambda,
    integral_direct_side,
    integral_inverse_side,
    inverse_question_mark,
    kappa_lambda_scan,
    mediant_descent,
    mirror_quotients,
    question_mark,
    remainder_Rn,
    semiregular_level,
    sparse_quotients,
    stern_brocot,
    stern_brocot_arrays,
    stern_brocot_square_sum,
    totient_sum,
)
from diophlab.reals import CFStreamOracle, SurdOracle, golden

HALF = Fraction(1, 2)

unit_rationals = st.integers(1, 400).flatmap(lambda q: st.integers(0, q).map(lambda a: Fraction(a, q)))


def _all_rationals(q_max):
    for q in range(1, q_max + 1):
        for a in range(q + 1):
            if gcd(a, q) == 1:
                yield Fraction(a, q)


def _const_stream(b0, b):
    def make():
        while True:
            yield b
    return CFStreamOracle(b0, make, f"[{b0};{b},...]")


def test_question_mark_examples():
    assert question_mark(Fraction(1, 2)) == HALF
    assert question_mark(Fraction(1, 3)) == Fraction(1, 4)
    assert question_mark(Fraction(2, 5)) == Fraction(3, 8)
    assert question_mark("0") == 0 and question_mark("1") == 1
    with pytest.raises(ValidationError):
        question_mark(Fraction(3, 2))


def test_question_mark_irrationals():
    # 1/phi = [0;1,1,...] and sqrt 2 - 1 = [0;2,2,...]
    a = question_mark(_const_stream(0, 1), 60)
    assert a.contains(Fraction(2, 3)) and a.width <= Fraction(1, 1 << 59)
    b = question_mark(_const_stream(0, 2), 60)
    assert b.contains(Fraction(2, 5))
    c = question_mark(SurdOracle(-1, 5, 2), 60)  # (sqrt 5 - 1)/2 from a surd stream
    assert c.contains(Fraction(2, 3))


def test_level_identity_exact():
    for n in range(15):
        chk = distribution_check(n)
        assert chk.identity_holds
        assert chk.sup_deviation <= chk.bound


def test_level_arrays_agree_with_fractions():
    for n in range(9):
        p, q = stern_brocot_arrays(n)
        assert [Fraction(int(a), int(b)) for a, b in zip(p, q)] == stern_brocot(n).fractions
    lvl = stern_brocot(14).fractions
    assert len(lvl) == (1 << 14) + 1
    assert all(a < b for a, b in zip(lvl, lvl[1:]))


def test_symmetries_exact():
    for x in _all_rationals(200):
        v = question_mark(x)
        assert question_mark(1 - x) == 1 - v
        assert question_mark(x / (1 + x)) == v / 2


def test_inverse_roundtrip():
    for x in _all_rationals(200):
        assert inverse_question_mark(question_mark(x)) == x
    for n in range(1, 9):
        for j in range(1 << n):
            y = Fraction(j, 1 << n)
            assert question_mark(inverse_question_mark(y)) == y


def test_inverse_at_non_dyadic():
    iv = inverse_question_mark(Fraction(2, 3), 50)
    phi = golden().enclose(200)
    assert iv.lo <= phi.lo - 1 and phi.hi - 1 <= iv.hi
    assert iv.width <= Fraction(1, 1 << 50)


@given(unit_rationals, unit_rationals)
def test_monotone(x, y):
    if x < y:
        assert question_mark(x) < question_mark(y)


def test_fixed_points():
    rep = fixed_points()
    assert rep.exact == [0, HALF, 1]
    assert len(rep.enclosures) == 2
    lo, hi = rep.enclosures
    assert abs(float(lo.mid) - 0.4203723394) < 1e-8
    assert abs(float(hi.mid) - 0.5796276606) < 1e-8
    assert abs(lo.mid + hi.mid - 1) < Fraction(1, 1 << 28)
    for iv in rep.enclosures:
        assert iv.width <= Fraction(1, 1 << 30)
        assert (question_mark(iv.lo) - iv.lo) * (question_mark(iv.hi) - iv.hi) < 0


def test_integral_routes_overlap():
    a = integral_inverse_side().value
    b = integral_direct_side().value
    assert a.lo > 0
    assert a.width < Fraction(2, 10 ** 8)
    assert max(a.lo, b.lo) <= min(a.hi, b.hi)
    assert abs(float(a.mid) - 0.0078867692) < 1e-8


def test_square_sum_exact():
    for n in range(9):
        p, q = stern_brocot_arrays(n)
        N = 1 << n
        brute = sum((Fraction(int(p[j]), int(q[j])) - Fraction(j, N)) ** 2 for j in range(1, N + 1))
        assert stern_brocot_square_sum(n) == brute


def test_remainder_small():
    I = integral_inverse_side()
    for n in range(19):
        r = remainder_Rn(n, I).R
        assert -4 <= r.lo and r.hi <= 4
    with pytest.raises(ValidationError):
        remainder_Rn(19, I)


def test_fourier_coefficients():
    t = fourier_stieltjes(200, level=20)
    assert t.cosine[0] == 1.0
    assert all(abs(s) <= e for s, e in zip(t.sine[1:], t.error[1:]))
    coarse = fourier_stieltjes(50, level=16)
    for k in range(51):
        assert abs(coarse.cosine[k] - t.cosine[k]) <= coarse.error[k] + t.error[k]
    with pytest.raises(ValidationError):
        fourier_stieltjes(10, level=25)


def _totient(n):
    return sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)


def test_farey_and_franel():
    for Q in (1, 2, 7, 30):
        rep = farey_franel(Q)
        assert rep.Phi == totient_sum(Q) == sum(_totient(b) for b in range(1, Q + 1))
        assert rep.adjacency_ok
        fr = rep.fractions()
        assert fr == sorted({Fraction(a, b) for b in range(1, Q + 1) for a in range(b + 1)})
        brute = sum((fr[j] - Fraction(j, rep.Phi)) ** 2 for j in range(1, rep.Phi + 1))
        assert rep.franel == brute


def test_franel_decreases_and_adjacency_holds():
    vals = []
    for Q in (125, 250, 500, 1000):
        rep = farey_franel(Q)
        assert rep.adjacency_ok
        vals.append(rep.franel)
    assert all(b < a for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValidationError):
        farey_franel(10 ** 4 + 1)


def test_quotient_sum_profile_validation():
    QuotientSumProfile([1, 2, 5])
    with pytest.raises(ValidationError):
        QuotientSumProfile([1, 1])
    with pytest.raises(ValidationError):
        QuotientSumProfile([2, 2])


def test_derivative_classification():
    assert derivative_classify(_const_stream(0, 1)).tag == "consistent-with-infinite"
    assert derivative_classify(_const_stream(0, 5)).tag == "consistent-with-zero"
    assert derivative_classify(_const_stream(0, 2)).tag == "inconclusive"
    assert derivative_classify(_const_stream(0, 4)).tag == "inconclusive"


def test_g_half_is_question_mark():
    rng = random.Random(3)
    for _ in range(100):
        q = rng.randint(1, 10 ** 6)
        x = Fraction(rng.randint(0, q), q)
        assert mediant_descent(HALF, x) == question_mark(x)
        assert g_lambda(HALF, x) == question_mark(x)


@settings(max_examples=20)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000)))
def test_g_lambda_at_half_is_lambda(lam):
    assert g_lambda(lam, HALF) == lam
    assert g_lambda(lam, Fraction(1, 3)) == lam * lam


@given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100)), unit_rationals)
def test_g_lambda_reflection(lam, x):
    assert g_lambda(lam, 1 - x) == 1 - g_lambda(1 - lam, x)


def test_g_lambda_interval_lambda():
    v = g_lambda(ZHAB_LAMBDA, Fraction(2, 5), 80)
    lam = ZHAB_LAMBDA.enclose(120).mid
    exact = mediant_descent(lam, Fraction(2, 5))
    assert v.lo - Fraction(1, 1 << 70) <= exact <= v.hi + Fraction(1, 1 << 70)


def test_g_lambda_irrational():
    v = g_lambda(Fraction(1, 3), _const_stream(0, 2), 40)
    lo = g_lambda(Fraction(1, 3), Fraction(12, 29))
    hi = g_lambda(Fraction(1, 3), Fraction(5, 12))
    assert lo <= v.lo and v.hi <= hi


def test_compositions_are_fibonacci():
    fib = [1, 0, 1]
    for _ in range(20):
        fib.append(fib[-1] + fib[-2])
    for n in range(15):
        assert sum(1 for _ in compositions_min2(n)) == fib[n]


def test_semiregular_values_match_towers():
    lvl = semiregular_level(6)
    for v in lvl.values:
        assert 0 < v < 1
    assert lvl.values == sorted(semiregular_value(SemiregularCF(c)) for c in compositions_min2(7))


def test_semiregular_deviation_shrinks():
    d10 = semiregular_level(10).sup_deviation
    d18 = semiregular_level(18).sup_deviation
    assert d18.hi < d10.lo


def test_mirror_symmetry_of_proxy():
    rng = random.Random(5)
    for _ in range(50):
        qs = [rng.randint(1, 6) for _ in range(rng.randint(2, 40))]
        lam = rng.uniform(0.1, 0.9)
        a = descent_log_ratio(lam, qs)[-1]
        b = descent_log_ratio(1 - lam, mirror_quotients(qs))[-1]
        assert math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


def test_test_families_track_slope():
    s = Fraction(43, 10)
    b = block_quotients(s, 4000)
    assert abs(sum(b) / len(b) - float(s)) < 0.01
    sp = sparse_quotients(Fraction(7, 5), 1 << 12)
    assert sum(sp) >= Fraction(7, 5) * (1 << 12)
    assert sp.count(1) > 0.99 * len(sp)


def test_kappa_scan_at_half_brackets_constants():
    scan = kappa_lambda_scan(0.5, [Fraction(13, 10), Fraction(14, 10), Fraction(44, 10), Fraction(45, 10)])
    assert scan.constant_boundary() == (4.0, 5.0)
    assert scan.block_boundary() == (4.4, 4.5)
    assert scan.sparse_boundary() == (1.3, 1.4)
    with pytest.raises(ValidationError):
        kappa_lambda_scan(1.5, [1])
