from __future__ import annotations

import random
import time
from fractions import Fraction
from math import gcd

from diophlab.bestapprox import (
    ApproxMatrix,
    best_approximations,
    check_growth_recurrences,
    growth_exponent,
    naive_best_approximations,
)
from diophlab.discrepancy import corner_oracle, discrepancy, fibonacci_discrepancy_ratios
from diophlab.exact import (
    cf_expand,
    cf_value,
    continuant,
    fold,
    fold_identity_rhs,
    is_prime,
    modinv,
    partial_quotients,
    totatives,
)
from diophlab.exponents import (
    PHI,
    ExponentTuple,
    Quad,
    dim_four_lower,
    jarnik_lower,
    laurent_check,
    reference_constants,
    schmidt_G,
    schmidt_summerer_lower,
    sigma_constants,
)
from diophlab.littlewood import (
    AvoiderCertificate,
    LacunarySequence,
    gallagher_montecarlo,
    lacunary_avoider,
    littlewood_scan,
    mixed_littlewood_scan,
    multi_littlewood_scan,
)
from diophlab.minkowski import (
    distribution_check,
    fixed_points,
    fourier_stieltjes,
    g_lambda,
    integral_inverse_side,
    inverse_question_mark,
    mediant_descent,
    question_mark,
    remainder_Rn,
    semiregular_level,
)
from diophlab.reals import RationalOracle, golden, sqrt_oracle
from diophlab.zaremba import (
    N_k_counts,
    bounded_by_filter,
    coverage,
    enumerate_bounded,
    hensley_fit,
    hyperbola_search,
    is_k_bounded,
)

HALF = Fraction(1, 2)


def _near(iv, printed, tol=Fraction(1, 1000)):
    """An enclosure lies within tol of a printed truncation."""
    printed = Fraction(printed)
    return printed - tol <= iv.lo and iv.hi <= printed + tol


def test_criterion_01_constants(verdict):
    t0 = time.perf_counter()
    c = {r["name"]: r["enclosure"] for r in reference_constants(96)}
    sc = sigma_constants(96)
    checks = []
    for name, key, printed in [
        ("kappa1", "kappa1", "1.388"),
        ("kappa2", "kappa2", "4.401"),
        ("sigma", "sigma", "1.94696"),
        ("omega", "sigma_omega", "3.1103"),
        ("omega_hat", "sigma_omega_hat", "2.2302"),
        ("phi4", "phi4", "1.324"),
        ("growth bound", "sup_norm_growth_bound", "1.28040"),
    ]:
        iv = c[key]
        checks.append((name, _near(iv, printed), f"{float(iv.mid):.9f} vs {printed}"))
    checks.append(("sigma route", abs(sc["sigma"].mid - c["sigma"].mid) < Fraction(1, 10 ** 20), "two routes agree"))
    s1 = c["s1"]
    phi = PHI.enclose(96)
    checks.append(("s(1)=phi", abs(s1.mid - phi.mid) < Fraction(1, 10 ** 9), f"{float(s1.mid):.12f}"))
    g2 = c["schmidt_G_at_2"]
    checks.append(("G(2)=2", g2.lo == g2.hi == 2 and schmidt_G(2).compare(2) == 0, str(g2.lo)))
    verdict(1, "constant reproduction", checks, time.perf_counter() - t0, 5)


def test_criterion_02_exact_core(verdict):
    t0 = time.perf_counter()
    roundtrip = all(cf_value(cf_expand(Fraction(a, q))) == Fraction(a, q)
                    for q in range(1, 501) for a in range(q + 1))
    rng = random.Random(2)
    sym = split = True
    for _ in range(10 ** 4):
        a = [rng.randint(1, 50) for _ in range(rng.randint(1, 12))]
        b = [rng.randint(1, 50) for _ in range(rng.randint(1, 12))]
        sym &= continuant(a) == continuant(a[::-1])
        split &= continuant(a + b) == continuant(a) * continuant(b) + continuant(a[:-1]) * continuant(b[1:])
    folds = 0
    fold_ok = True
    while folds < 1000:
        q = rng.randint(2, 10 ** 6)
        a = rng.randint(1, q - 1)
        if gcd(a, q) != 1:
            continue
        cf = cf_expand(Fraction(a, q))
        X = rng.randint(1, 1000)
        fold_ok &= continuant(fold(cf, X)) == fold_identity_rhs(cf.quotients, X)
        folds += 1
    checks = [
        ("cf roundtrip q<=500", roundtrip, "all a/q"),
        ("continuant symmetry", sym, "10^4 cases"),
        ("continuant split", split, "10^4 cases"),
        ("folding identity", fold_ok, f"{folds} pairs"),
    ]
    verdict(2, "exact core", checks, time.perf_counter() - t0, 30)


def _dense(rows):
    return [[o.enclose(160).mid for o in r] for r in rows]


def test_criterion_03_best_approximation(verdict):
    t0 = time.perf_counter()
    s2, s3, s5, s7 = (sqrt_oracle(d) for d in (2, 3, 5, 7))
    cases = [
        ("1x1 sqrt2", [[s2]], 200),
        ("1x1 golden", [[golden()]], 200),
        ("2x1", [[s2], [s3]], 200),
        ("1x2", [[s2, s3]], 40),
        ("2x2", [[s2, s3], [s5, s7]], 40),
    ]
    checks = []
    for name, rows, M in cases:
        theta = ApproxMatrix(tuple(tuple(r) for r in rows))
        got = [(r.x, r.y) for r in best_approximations(theta, M_max=M)]
        checks.append((f"oracle {name}", got == naive_best_approximations(_dense(rows), M), f"M_max {M}, {len(got)} records"))

    gold = best_approximations(ApproxMatrix.column([golden()]), M_max=10 ** 7, method="convergents")
    fib = [1, 2]
    while fib[-1] + fib[-2] <= 10 ** 7:
        fib.append(fib[-1] + fib[-2])
    scan = best_approximations(ApproxMatrix.column([golden()]), M_max=5000)
    checks.append(("golden Fibonacci", [r.M for r in gold] == fib and [r.M for r in scan] == [f for f in fib if f <= 5000],
                   f"{len(gold)} records"))
    est = growth_exponent(gold[:30]).estimate
    checks.append(("growth at nu=30", abs(est - float(PHI)) < 1e-3, f"{est:.7f}"))

    runs = [
        ("golden", best_approximations(ApproxMatrix.column([golden()]), M_max=10 ** 6, method="convergents"), 1, 2),
        ("sqrt2", best_approximations(ApproxMatrix.column([s2]), M_max=10 ** 6, method="convergents"), 1, 2),
        ("(sqrt2,sqrt3)", best_approximations(ApproxMatrix.column([s2, s3]), M_max=30000), 2, 8),
    ]
    for name, recs, n, K in runs:
        rep = check_growth_recurrences(recs, n=n, K=K)
        checks.append((f"recurrences {name}", rep["ok"], f"n={n} K={K}, {len(recs)} records"))
    verdict(3, "best-approximation oracle", checks, time.perf_counter() - t0, 120)


def test_criterion_04_dominance_grids(verdict):
    t0 = time.perf_counter()
    grid = [Fraction(i, 1000) for i in range(340, 991)]
    shmu = [w for w in grid if dim_four_lower((1, 3), w).compare(jarnik_lower(1, 3, w)) < 0]
    phi2 = Quad.make(Fraction(3, 2), Fraction(1, 2), 5)
    inside = [Fraction(1) + Fraction(i, 1000) for i in range(1, 1619)]
    inside = [w for w in inside if phi2.compare(w) > 0]
    strict = [w for w in inside if dim_four_lower((2, 2), w).compare(w * (w - 1)) <= 0]
    beyond = [Fraction(2619, 1000) + Fraction(i, 10) for i in range(0, 60)]
    above = [w for w in beyond if dim_four_lower((2, 2), w).compare(w * (w - 1)) > 0]
    pts13 = [Fraction(1, 3) + Fraction(i, 20) for i in range(1, 11)]
    pts31 = [Fraction(w) for w in range(4, 14)]
    ss13 = [w for w in pts13 if dim_four_lower((1, 3), w).compare(schmidt_summerer_lower(1, 3, w)) <= 0]
    ss31 = [w for w in pts31 if dim_four_lower((3, 1), w).compare(schmidt_summerer_lower(3, 1, w)) <= 0]
    checks = [
        ("(1,3) vs simultaneous", not shmu, f"{len(grid)} points, {len(shmu)} violations"),
        ("(2,2) > w(w-1) on (1,phi^2)", not strict, f"{len(inside)} points, {len(strict)} violations"),
        ("(2,2) <= w(w-1) beyond", not above, f"{len(beyond)} points, {len(above)} violations"),
        ("(1,3) > Schmidt-Summerer", not ss13, "10 points"),
        ("(3,1) > Schmidt-Summerer", not ss31, "10 points"),
    ]
    verdict(4, "exponent dominance grids", checks, time.perf_counter() - t0, 60)


def test_criterion_05_laurent(verdict):
    t0 = time.perf_counter()
    ok = laurent_check(ExponentTuple(2, HALF, 2, HALF))
    bad = laurent_check(ExponentTuple(2, Fraction(1, 3), 2, HALF))
    checks = [
        ("(2,1/2,2,1/2) passes", ok == [], repr(ok)),
        ("w*=1/3 fails w-relation only", bad == ["w-relation"], repr(bad)),
    ]
    verdict(5, "Laurent four-exponent checker", checks, time.perf_counter() - t0)


def test_criterion_06_zaremba_coverage(verdict):
    t0 = time.perf_counter()
    cov5 = coverage(5, 4096)
    fib = {1, 2}
    a, b = 1, 2
    while b <= 4096:
        a, b = b, a + b
        fib.add(b)
    cov1 = coverage(1, 4096)
    k1 = {q for q in range(1, 4097) if cov1.bitmap[q]} == {f for f in fib if f <= 4096}
    n25 = int(N_k_counts(2, 5).counts[5])
    enum_ok = True
    for k in range(1, 6):
        found: dict = {}
        for a, q, qs in enumerate_bounded(k, 300):
            found.setdefault(q, set()).add(a)
        for q in range(2, 301):
            filt = {a for a in totatives(q) if is_k_bounded(cf_expand(Fraction(a, q)).quotients, k)}
            enum_ok &= found.get(q, set()) == filt == set(bounded_by_filter(k, q))
    checks = [
        ("#Z_5(4096)", cov5.covered == 4096 and cov5.exceptions() == [], f"{cov5.covered}, exceptions {cov5.exceptions()}"),
        ("k=1 is Fibonacci", k1, "q <= 4096"),
        ("N_2(5)", n25 == 2, str(n25)),
        ("enumerator vs cf_expand filter", enum_ok, "q <= 300, k = 1..5"),
    ]
    verdict(6, "Zaremba coverage", checks, time.perf_counter() - t0, 300)


def test_criterion_07_hensley(verdict):
    t0 = time.perf_counter()
    base = [1 << e for e in range(8, 15)]
    doubled = [2 * Q for Q in base]
    table = {k: N_k_counts(k, doubled[-1]) for k in (2, 3, 4, 5)}
    s = [hensley_fit(k, base, table[k]).slope for k in (2, 3, 4, 5)]
    d = [hensley_fit(k, doubled, table[k]).slope for k in (2, 3, 4, 5)]
    moves = [abs(a - b) for a, b in zip(s, d)]
    fmt = ", ".join(f"{x:.4f}" for x in s)
    checks = [
        ("strictly increasing", all(a < b for a, b in zip(s, s[1:])), fmt),
        ("inside (1,2)", all(1 < x < 2 for x in s), fmt),
        ("stable under doubling", max(moves) < 0.05, f"max move {max(moves):.4f}"),
    ]
    verdict(7, "Hensley fit stability", checks, time.perf_counter() - t0, 300)


def test_criterion_08_modular_hyperbola(verdict):
    t0 = time.perf_counter()
    primes = [p for p in range(101, 500) if is_prime(p)]
    missing = []
    valid = True
    for p in primes:
        r = hyperbola_search(p, 1, 5, p, p, first_only=True)
        if not r.found:
            missing.append(p)
            continue
        x1, x2 = r.witnesses[0]
        valid &= x1 * x2 % p == 1
        valid &= max(partial_quotients(x1, p)) <= 5 and max(partial_quotients(x2, p)) <= 5
    small = hyperbola_search(13, 1, 2, 13, 13)
    checks = [
        ("witness for every prime", not missing, f"{len(primes)} primes, missing {missing}"),
        ("witnesses valid", valid, "x1 x2 = 1 mod p, quotients <= 5"),
        ("(5,8) at p=13, k=2", (5, 8) in small.witnesses, str(small.witnesses)),
    ]
    verdict(8, "modular hyperbola", checks, time.perf_counter() - t0, 120)


def test_criterion_09_discrepancy(verdict):
    t0 = time.perf_counter()
    bad_oracle = [(a, q) for q in range(1, 65) for a in range(q) if discrepancy(a, q) != corner_oracle(a, q)]
    asym = 0
    first = None
    inverse_ok = True
    for q in range(2, 257):
        vals = [discrepancy(a, q) for a in range(q)]
        for a in range(1, q):
            if vals[a] != vals[q - a]:
                asym += 1
                first = first or (a, q, vals[a], vals[q - a])
        for a in totatives(q):
            inverse_ok &= vals[a] == vals[modinv(a, q)]
    rows = fibonacci_discrepancy_ratios(20)
    worst = max(r[3] for r in rows)
    info = f"{asym} pairs differ"
    if first:
        a, q, x, y = first
        info += f", e.g. D({a},{q})={x} vs D({q - a},{q})={y}; D(a)=D(a^-1 mod q) holds: {inverse_ok}"
    checks = [
        ("equals corner oracle q<=64", not bad_oracle, f"{len(bad_oracle)} mismatches"),
        ("D(a,q)=D(q-a,q) q<=256", asym == 0, info),
        ("Fibonacci D/log q <= 5", worst <= 5, f"max {worst:.4f}"),
        ("Fibonacci regression lock", abs(worst - 2.164) < 1e-3, f"{worst:.4f} vs 2.164"),
    ]
    verdict(9, "discrepancy exactness", checks, time.perf_counter() - t0, 180)


def _rationals(q_max):
    for q in range(1, q_max + 1):
        for a in range(q + 1):
            if gcd(a, q) == 1:
                yield Fraction(a, q)


def test_criterion_10_minkowski(verdict):
    t0 = time.perf_counter()
    levels = all(distribution_check(n).identity_holds for n in range(15))
    sym = rt = True
    for x in _rationals(200):
        v = question_mark(x)
        sym &= question_mark(1 - x) == 1 - v and question_mark(x / (1 + x)) == v / 2
        rt &= inverse_question_mark(v) == x
    fp = fixed_points(Fraction(1, 1 << 30))
    fp_ok = fp.exact == [0, HALF, 1] and len(fp.enclosures) >= 2
    fp_ok &= all(iv.width <= Fraction(1, 1 << 30) for iv in fp.enclosures)
    I = integral_inverse_side()
    R = [remainder_Rn(n, I).R for n in range(19)]
    worst = max(max(abs(r.lo), abs(r.hi)) for r in R)
    table = fourier_stieltjes(200, level=20)
    sine_ok = all(abs(s) <= e for s, e in zip(table.sine, table.error))
    checks = [
        ("?(xi_{j,n}) = j/2^n", levels, "n <= 14"),
        ("symmetries", sym, "q <= 200"),
        ("inverse roundtrip", rt, "q <= 200"),
        ("fixed points", fp_ok, f"exact {[str(e) for e in fp.exact]} + {len(fp.enclosures)} enclosures"),
        ("I > 0", I.value.lo > 0, f"{float(I.value.mid):.10f}"),
        ("|R_n| <= 4", worst <= 4, f"n <= 18, max {float(worst):.4f}"),
        ("d_0 = 1", table.cosine[0] == 1.0, str(table.cosine[0])),
        ("sine within error", sine_ok, "k <= 200"),
    ]
    verdict(10, "Minkowski suite", checks, time.perf_counter() - t0, 120)


def test_criterion_11_g_lambda(verdict):
    t0 = time.perf_counter()
    rng = random.Random(11)
    agree = True
    for _ in range(100):
        q = rng.randint(1, 10 ** 6)
        x = Fraction(rng.randint(0, q), q)
        agree &= mediant_descent(HALF, x) == question_mark(x)
    lam_ok = True
    for _ in range(20):
        d = rng.randint(2, 10 ** 6)
        lam = Fraction(rng.randint(1, d - 1), d)
        lam_ok &= g_lambda(lam, HALF) == lam
    d10 = semiregular_level(10).sup_deviation
    d18 = semiregular_level(18).sup_deviation
    checks = [
        ("g_1/2 = ?", agree, "100 random rationals"),
        ("g_lambda(1/2) = lambda", lam_ok, "20 random lambda"),
        ("deviation shrinks", d18.hi < d10.lo, f"n=10 {float(d10.mid):.5f}, n=18 {float(d18.mid):.5f}"),
    ]
    verdict(11, "g_lambda family", checks, time.perf_counter() - t0)


def _strictly_decreasing(res):
    qs = res.trace
    ivs = [v for _, v in res.minima]
    return all(a < b for a, b in zip(qs, qs[1:])) and all(b.hi < a.lo for a, b in zip(ivs, ivs[1:]))


def test_criterion_12_littlewood(verdict):
    t0 = time.perf_counter()
    scans = [
        littlewood_scan(sqrt_oracle(2), sqrt_oracle(3), 10 ** 5),
        littlewood_scan(golden(), sqrt_oracle(5), 10 ** 5),
        multi_littlewood_scan([golden()], 10 ** 5),
        mixed_littlewood_scan(sqrt_oracle(2), [3], 10 ** 4),
    ]
    dec = all(_strictly_decreasing(r) for r in scans)
    zero = littlewood_scan(RationalOracle(Fraction(2, 7)), sqrt_oracle(2), 100).best
    zero_mixed = mixed_littlewood_scan(RationalOracle(Fraction(3, 5)), [2], 50).best
    t = LacunarySequence.make([2 ** j for j in range(40)], 2)
    cert = lacunary_avoider(t)
    third = AvoiderCertificate(Fraction(1, 3), Fraction(1, 3), 0, Fraction(1, 3), 0.0)
    Ns = [10 ** 4, 2 * 10 ** 4, 4 * 10 ** 4]
    div = gallagher_montecarlo("q_log", 20, Ns, seed=1)
    conv = gallagher_montecarlo("q_log3", 20, Ns, seed=1)
    checks = [
        ("traces strictly decrease", dec, f"{len(scans)} scans"),
        ("rational input hits zero", zero.lo == zero.hi == 0 and zero_mixed.hi == 0, "2/7 and mixed 3/5"),
        ("avoider inf >= 1/4", cert.inf >= Fraction(1, 4) and cert.verify(t), f"inf {cert.inf}"),
        ("1/3 witness", third.verify(t), "exact"),
        ("divergent medians grow", all(a < b for a, b in zip(div.medians, div.medians[1:])), str(div.medians)),
        ("convergent medians bounded", max(conv.medians) - min(conv.medians) <= 1, str(conv.medians)),
    ]
    verdict(12, "Littlewood and avoider", checks, time.perf_counter() - t0)
