"""The question mark function ?(x), its inverse, Stern-Brocot levels and relatives.

Rational inputs get exact dyadic answers. Irrational inputs are RealOracles and
get certified enclosures. Floating point appears only in the exploratory
tables (Fourier-Stieltjes coefficients, derivative proxies), each of which
carries an explicit error term or an "exploratory" label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import PrecisionExhausted, ValidationError
from .exact import SemiregularCF, as_fraction, cf_expand, semiregular_value
from .reals import (
    CFStreamOracle,
    Interval,
    RealOracle,
    SurdOracle,
    log_interval,
)

Number = Union[Fraction, int]
Lam = Union[Fraction, Interval]


# ---------------------------------------------------------------------------
# quotient streams

def _in_unit(x: Fraction) -> None:
    if not 0 <= x <= 1:
        raise ValidationError(f"x = {x} must lie in [0, 1]")


def _stream(x: RealOracle) -> Optional[Iterator[int]]:
    """Partial quotients b1, b2, ... of an oracle in (0, 1), if it exposes them."""
    if isinstance(x, SurdOracle):
        exp = x.expansion()
        if exp.b0 != 0:
            raise ValidationError(f"{x.describe()} is not in (0, 1)")
        return exp.quotients()
    if isinstance(x, CFStreamOracle):
        if x.b0 != 0:
            raise ValidationError(f"{x.describe()} is not in (0, 1)")
        return x.quotients()
    return None


def _enclosed_prefix(x: RealOracle, count: int, max_bits: int = 1 << 14) -> List[int]:
    """First `count` quotients common to every point of an enclosure of x."""
    bits = 64
    while bits <= max_bits:
        iv = x.enclose(bits)
        a, b = cf_expand(iv.lo), cf_expand(iv.hi)
        if a.b0 == b.b0 == 0:
            prefix = []
            for u, v in zip(a.quotients[:-1], b.quotients[:-1]):
                if u != v:
                    break
                prefix.append(u)
            if len(prefix) >= count:
                return prefix[:count]
        bits *= 2
    raise PrecisionExhausted(f"cannot certify {count} quotients of {x.describe()}")


def quotient_prefix(x: RealOracle, count: int) -> List[int]:
    s = _stream(x)
    if s is None:
        return _enclosed_prefix(x, count)
    return [next(s) for _ in range(count)]


# ---------------------------------------------------------------------------
# ?(x) and its inverse

def _qm_rational(x: Fraction) -> Fraction:
    _in_unit(x)
    if x == 0 or x == 1:
        return x
    total = Fraction(0)
    A = 0
    sign = 1
    for b in cf_expand(x).quotients:
        A += b
        total += sign * Fraction(2, 1 << A)
        sign = -sign
    return total


def question_mark(x: Union[Number, str, RealOracle], precision: int = 64) -> Union[Fraction, Interval]:
    """?(x) = 2^(1-a1) - 2^(1-a1-a2) + ... for x = [0; a1, a2, ...].

    Exact dyadic for rationals; an enclosure of width <= 2^-precision otherwise.
    """
    if not isinstance(x, RealOracle):
        return _qm_rational(as_fraction(x))
    ex = x.exact()
    if ex is not None:
        return _qm_rational(ex)
    s = _stream(x)
    if s is None:
        return _qm_monotone(x, precision)
    total = Fraction(0)
    A, sign = 0, 1
    for count, b in enumerate(s):
        A += b
        total += sign * Fraction(2, 1 << A)
        sign = -sign
        # the alternating tail is at most the next term, 2^(1 - A_{n+1}) <= 2^-A_n
        if A >= precision:
            tail = Fraction(1, 1 << A)
            return Interval(total - tail, total + tail)
        if count > 64 * precision + 64:
            break
    raise PrecisionExhausted("quotient stream exhausted")


def _qm_monotone(x: RealOracle, precision: int, max_bits: int = 1 << 14) -> Interval:
    """[?(lo), ?(hi)] from an enclosure [lo, hi] of x; ? is increasing."""
    bits = precision + 8
    target = Fraction(1, 1 << precision)
    while bits <= max_bits:
        iv = x.enclose(bits)
        lo, hi = max(iv.lo, Fraction(0)), min(iv.hi, Fraction(1))
        out = Interval(_qm_rational(lo), _qm_rational(hi))
        if out.width <= target:
            return out
        bits *= 2
    raise PrecisionExhausted(f"?({x.describe()}) not reached at {precision} bits")


def _sb_search(y: Fraction, depth: int) -> Tuple[Optional[Fraction], Tuple[Fraction, Fraction]]:
    """Descend the Stern-Brocot tree by halving dyadic values.

    Returns (exact preimage or None, bracketing interval after `depth` steps).
    """
    pl, ql, pr, qr = 0, 1, 1, 1
    vl, vr = Fraction(0), Fraction(1)
    if y == 0:
        return Fraction(0), (Fraction(0), Fraction(0))
    if y == 1:
        return Fraction(1), (Fraction(1), Fraction(1))
    for _ in range(depth):
        pm, qm = pl + pr, ql + qr
        vm = (vl + vr) / 2
        if y == vm:
            return Fraction(pm, qm), (Fraction(pm, qm), Fraction(pm, qm))
        if y < vm:
            pr, qr, vr = pm, qm, vm
        else:
            pl, ql, vl = pm, qm, vm
    return None, (Fraction(pl, ql), Fraction(pr, qr))


def inverse_question_mark(y: Union[Number, str, Interval], precision: int = 64,
                          max_depth: int = 1 << 16) -> Union[Fraction, Interval]:
    """m(y), the inverse of ?: exact for dyadic y, an enclosure otherwise."""
    if isinstance(y, Interval):
        lo_y, hi_y = y.lo, y.hi
        if lo_y < 0 or hi_y > 1:
            raise ValidationError("y must lie in [0, 1]")
    else:
        lo_y = hi_y = as_fraction(y)
        _in_unit(lo_y)
        den = lo_y.denominator
        if den & (den - 1) == 0:
            exact, _ = _sb_search(lo_y, den.bit_length() + 1)
            return exact
    target = Fraction(1, 1 << precision)
    depth = 64
    while depth <= max_depth:
        a, (a_lo, _) = _sb_search(lo_y, depth)
        b, (_, b_hi) = _sb_search(hi_y, depth)
        lo = a if a is not None else a_lo
        hi = b if b is not None else b_hi
        if hi - lo <= target:
            return Interval(lo, hi)
        depth *= 2
    raise PrecisionExhausted("inverse not resolved within the depth budget")


# ---------------------------------------------------------------------------
# Stern-Brocot levels

@dataclass
class SternBrocotLevel:
    n: int
    fractions: List[Fraction]

    def __len__(self) -> int:
        return len(self.fractions)


def stern_brocot_arrays(n: int, left: Tuple[int, int] = (0, 1),
                        right: Tuple[int, int] = (1, 1)) -> Tuple[np.ndarray, np.ndarray]:
    """Numerators and denominators of level n between two Farey neighbours."""
    if n < 0:
        raise ValidationError("level must be non-negative")
    p = np.array([left[0], right[0]], dtype=np.int64)
    q = np.array([left[1], right[1]], dtype=np.int64)
    for _ in range(n):
        np_ = np.empty(2 * len(p) - 1, dtype=np.int64)
        nq = np.empty_like(np_)
        np_[0::2], nq[0::2] = p, q
        np_[1::2], nq[1::2] = p[:-1] + p[1:], q[:-1] + q[1:]
        p, q = np_, nq
    return p, q


def stern_brocot(n: int) -> SternBrocotLevel:
    """F_n: F_0 = {0/1, 1/1}, each level inserts the mediants of neighbours."""
    level = [Fraction(0), Fraction(1)]
    if n < 0:
        raise ValidationError("level must be non-negative")
    for _ in range(n):
        nxt = [level[0]]
        for a, b in zip(level, level[1:]):
            nxt.append(Fraction(a.numerator + b.numerator, a.denominator + b.denominator))
            nxt.append(b)
        level = nxt
    return SternBrocotLevel(n, level)


@dataclass
class DistributionCheck:
    n: int
    identity_holds: bool
    sup_deviation: Fraction
    bound: Fraction


def distribution_check(n: int) -> DistributionCheck:
    """Exact ?(xi_{j,n}) = j/2^n and sup_j |j/(2^n+1) - ?(xi_{j,n})|."""
    p, q = stern_brocot_arrays(n)
    N = 1 << n
    ok = True
    dev = Fraction(0)
    for j in range(N + 1):
        v = _qm_rational(Fraction(int(p[j]), int(q[j])))
        if v != Fraction(j, N):
            ok = False
        dev = max(dev, abs(Fraction(j, N + 1) - v))
    return DistributionCheck(n, ok, dev, Fraction(1, N + 1) + Fraction(1, N))


# ---------------------------------------------------------------------------
# Fourier-Stieltjes coefficients

@dataclass
class FourierTable:
    level: int
    n: np.ndarray
    cosine: np.ndarray
    sine: np.ndarray
    error: np.ndarray

    def rows(self) -> List[Dict[str, float]]:
        return [{"n": int(k), "d_n": float(c), "sine": float(s), "error": float(e)}
                for k, c, s, e in zip(self.n, self.cosine, self.sine, self.error)]


def fourier_stieltjes(n_max: int, level: int = 18) -> FourierTable:
    """d_n = integral of cos(2 pi n x) d?(x) against the level-`level` atomic measure.

    Each Stern-Brocot interval carries mass 2^-level exactly, and the integrand
    moves by at most pi n * width across half an interval, so the midpoint rule
    errs by at most pi n 2^-level in total.
    """
    if level > 24:
        raise ValidationError("level must be at most 24")
    p, q = stern_brocot_arrays(level)
    x = p / q
    mid = (x[:-1] + x[1:]) / 2
    mass = 2.0 ** -level
    ns = np.arange(n_max + 1)
    cos = np.empty(n_max + 1)
    sin = np.empty(n_max + 1)
    for k in ns:
        ang = 2 * np.pi * k * mid
        cos[k] = np.cos(ang).sum() * mass
        sin[k] = np.sin(ang).sum() * mass
    cos[0] = 1.0  # total mass
    rounding = 1e-12 + len(mid) * 4e-16 * mass * (1 + ns)
    err = np.pi * ns * mass + rounding
    err[0] = 0.0
    return FourierTable(level, ns, cos, sin, err)


# ---------------------------------------------------------------------------
# fixed points of ?

@dataclass
class FixedPointReport:
    exact: List[Fraction]
    enclosures: List[Interval]
    resolution: Fraction
    partition_level: int

    @property
    def count(self) -> int:
        return len(self.exact) + len(self.enclosures)


def fixed_points(resolution: Fraction = Fraction(1, 1 << 30), partition_level: int = 10) -> FixedPointReport:
    """Solutions of ?(x) = x by sign changes over a Stern-Brocot partition, then bisection."""
    resolution = as_fraction(resolution)
    if resolution < Fraction(1, 1 << 40):
        raise ValidationError("resolution must be at least 2^-40")
    p, q = stern_brocot_arrays(partition_level)
    N = 1 << partition_level
    xs = [Fraction(int(a), int(b)) for a, b in zip(p, q)]
    # on the partition ?(xi_j) = j/2^L exactly
    f = [Fraction(j, N) - xs[j] for j in range(N + 1)]
    exact = [xs[j] for j in range(N + 1) if f[j] == 0]
    found: List[Interval] = []
    for j in range(N):
        if f[j] == 0 or f[j + 1] == 0 or (f[j] > 0) == (f[j + 1] > 0):
            continue
        lo, hi = xs[j], xs[j + 1]
        neg_left = f[j] < 0
        while hi - lo > resolution:
            m = (lo + hi) / 2
            fm = _qm_rational(m) - m
            if fm == 0:
                exact.append(m)
                break
            if (fm < 0) == neg_left:
                lo = m
            else:
                hi = m
        else:
            found.append(Interval(lo, hi))
    return FixedPointReport(sorted(set(exact)), found, resolution, partition_level)


# ---------------------------------------------------------------------------
# the integral of (?(x) - x)^2 and the remainder R_n

_MARGIN = 1e-15


def _chunks(level: int, base: int) -> Iterator[Tuple[int, np.ndarray, np.ndarray]]:
    """Level `level` split into the 2^base subtrees of level `base`."""
    bp, bq = stern_brocot_arrays(base)
    sub = level - base
    for i in range(len(bp) - 1):
        p, q = stern_brocot_arrays(sub, (int(bp[i]), int(bq[i])), (int(bp[i + 1]), int(bq[i + 1])))
        yield i << sub, p, q


def _sq_bounds(lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Bounds of t^2 over t in [lo, hi]."""
    lo, hi = lo - _MARGIN, hi + _MARGIN
    top = np.maximum(lo * lo, hi * hi)
    bot = np.where((lo <= 0) & (hi >= 0), 0.0, np.minimum(lo * lo, hi * hi))
    return bot, top


@dataclass(frozen=True)
class IntegralEnclosure:
    value: Interval
    level: int
    route: str


@lru_cache(maxsize=8)
def integral_inverse_side(level: int = 24) -> IntegralEnclosure:
    """I = integral of (m(y) - y)^2 dy, enclosed cell by cell over dyadic y-cells.

    On [j/2^L, (j+1)/2^L] the inverse m runs monotonically from xi_j to xi_{j+1}.
    """
    lo_sum = hi_sum = 0.0
    N = float(1 << level)
    for off, p, q in _chunks(level, min(level, 10)):
        x = p / q
        j = off + np.arange(len(x) - 1)
        d_lo = x[:-1] - (j + 1) / N
        d_hi = x[1:] - j / N
        bot, top = _sq_bounds(d_lo, d_hi)
        lo_sum += bot.sum()
        hi_sum += top.sum()
    slack = 1e-12
    lo = Fraction(max(lo_sum / N - slack, 0.0))
    hi = Fraction(hi_sum / N + slack)
    return IntegralEnclosure(Interval(lo, hi), level, "inverse")


@lru_cache(maxsize=8)
def integral_direct_side(level: int = 20) -> IntegralEnclosure:
    """The same integral over x-cells [xi_j, xi_{j+1}], where ?(x) lies in [j/2^L, (j+1)/2^L]."""
    lo_sum = hi_sum = 0.0
    N = float(1 << level)
    for off, p, q in _chunks(level, min(level, 10)):
        x = p / q
        w = x[1:] - x[:-1]
        j = off + np.arange(len(x) - 1)
        d_lo = j / N - x[1:]
        d_hi = (j + 1) / N - x[:-1]
        bot, top = _sq_bounds(d_lo, d_hi)
        lo_sum += (bot * w).sum()
        hi_sum += (top * w).sum()
    slack = 1e-12
    return IntegralEnclosure(Interval(Fraction(max(lo_sum - slack, 0.0)), Fraction(hi_sum + slack)),
                             level, "direct")


def stern_brocot_square_sum(n: int) -> Fraction:
    """sum_{j=1}^{2^n} (xi_{j,n} - j/2^n)^2 as an exact rational."""
    p, q = stern_brocot_arrays(n)
    N = 1 << n
    groups: Dict[int, int] = {}
    for j in range(1, N + 1):
        pj, qj = int(p[j]), int(q[j])
        d = pj * N - j * qj
        groups[qj] = groups.get(qj, 0) + d * d
    L = 1
    for qj in groups:
        sq = qj * qj
        L = L // gcd(L, sq) * sq
    num = sum(G * (L // (qj * qj)) for qj, G in groups.items())
    return Fraction(num, L * N * N)


@dataclass
class RemainderRow:
    n: int
    square_sum: Fraction
    R: Interval

    def as_dict(self) -> Dict[str, object]:
        return {"n": self.n, "R_lo": float(self.R.lo), "R_hi": float(self.R.hi)}


def remainder_Rn(n: int, I: Optional[IntegralEnclosure] = None) -> RemainderRow:
    """R_n = sum_j (xi_{j,n} - j/2^n)^2 - 2^n I, with I as a certified enclosure."""
    if not 0 <= n <= 18:
        raise ValidationError("n must lie in [0, 18]")
    if I is None:
        I = integral_inverse_side()
    if I.value.lo <= 0:
        raise PrecisionExhausted("the integral enclosure does not exclude 0")
    S = stern_brocot_square_sum(n)
    return RemainderRow(n, S, Interval.point(S) - I.value * (1 << n))


# ---------------------------------------------------------------------------
# Farey sequences and the Franel sum

def totient_sum(Q: int) -> int:
    phi = list(range(Q + 1))
    for i in range(2, Q + 1):
        if phi[i] == i:
            for k in range(i, Q + 1, i):
                phi[k] -= phi[k] // i
    return sum(phi[1:])


@dataclass
class FareyReport:
    Q: int
    Phi: int
    numerators: np.ndarray
    denominators: np.ndarray  # ascending, starting at 0/1
    franel: Fraction
    adjacency_ok: bool

    def fractions(self) -> List[Fraction]:
        return [Fraction(int(a), int(b)) for a, b in zip(self.numerators, self.denominators)]


def farey_franel(Q: int) -> FareyReport:
    """The Farey list of order Q and sum_{j=1}^{Phi} (r_j - j/Phi)^2 exactly."""
    if not 1 <= Q <= 10 ** 4:
        raise ValidationError("Q must lie in [1, 10^4]")
    ps, qs = [np.zeros(1, dtype=np.int64)], [np.ones(1, dtype=np.int64)]
    for b in range(1, Q + 1):
        a = np.arange(1, b + 1, dtype=np.int64)
        a = a[np.gcd(a, b) == 1]
        ps.append(a)
        qs.append(np.full(len(a), b, dtype=np.int64))
    p, q = np.concatenate(ps), np.concatenate(qs)
    # neighbours differ by at least 1/Q^2, far above double rounding
    order = np.argsort(p / q, kind="stable")
    p, q = p[order], q[order]
    adj = bool(np.all(q[:-1] * p[1:] - p[:-1] * q[1:] == 1))
    Phi = len(p) - 1
    j = np.arange(len(p), dtype=np.int64)
    A: Dict[int, int] = {}
    B: Dict[int, int] = {}
    for b in range(1, Q + 1):
        A[b] = 0
        B[b] = 0
    pl, ql, jl = p.tolist(), q.tolist(), j.tolist()
    for pj, qj, jj in zip(pl[1:], ql[1:], jl[1:]):
        A[qj] += pj * pj
        B[qj] += jj * pj
    L1 = 1
    for b in range(1, Q + 1):
        L1 = L1 // gcd(L1, b) * b
    L2 = L1 * L1
    sum_r2 = Fraction(sum(A[b] * (L2 // (b * b)) for b in A), L2)
    sum_jr = Fraction(sum(B[b] * (L1 // b) for b in B), L1)
    sum_j2 = Fraction(Phi * (Phi + 1) * (2 * Phi + 1), 6)
    franel = sum_r2 - 2 * sum_jr / Phi + sum_j2 / (Phi * Phi)
    return FareyReport(Q, Phi, p, q, franel, adj)


# ---------------------------------------------------------------------------
# derivative classification through S_x(t)

@dataclass
class QuotientSumProfile:
    sums: List[int]

    def __post_init__(self) -> None:
        prev = 0
        for t, s in enumerate(self.sums, 1):
            if s <= prev or s < t:
                raise ValidationError("quotient sums must increase strictly and satisfy S(t) >= t")
            prev = s

    @property
    def t_max(self) -> int:
        return len(self.sums)


def quotient_sum_profile(x: RealOracle, t_max: int) -> QuotientSumProfile:
    out, s = [], 0
    for b in quotient_prefix(x, t_max):
        s += b
        out.append(s)
    return QuotientSumProfile(out)


@lru_cache(maxsize=4)
def kappa_enclosures(bits: int = 64) -> Tuple[Interval, Interval]:
    from .exponents import reference_constants
    rows = {r["name"]: r["enclosure"] for r in reference_constants(bits)}
    return rows["kappa1"], rows["kappa2"]


_LOG2_CACHE: Dict[int, Interval] = {}


def _log2_of(t: int) -> Interval:
    if t not in _LOG2_CACHE:
        _LOG2_CACHE[t] = log_interval(t, 64) / log_interval(2, 64)
    return _LOG2_CACHE[t]


def _cmp(lhs: Interval, rhs: Interval) -> int:
    """-1 if lhs < rhs certainly, 1 if lhs > rhs certainly, else raise."""
    if lhs.hi < rhs.lo:
        return -1
    if lhs.lo > rhs.hi:
        return 1
    if lhs.hi <= rhs.lo:
        return 0
    raise PrecisionExhausted("comparison undecided at the working precision")


@dataclass
class DerivativeClass:
    tag: str  # consistent-with-infinite | consistent-with-zero | inconclusive
    t_max: int
    C: Fraction
    infinite_condition: bool
    zero_condition: bool
    infinite_first_failure: Optional[int]
    zero_first_failure: Optional[int]
    caveat: str = ("finite window: the sufficient conditions quantify over all t, "
                   "so the tag only reports consistency on t <= t_max")


def derivative_classify(x: RealOracle, t_max: int = 1000, C: Number = 10) -> DerivativeClass:
    """Check S_x(t) <= k1 t + log2 t + C (derivative +inf) and S_x(t) >= k2 t - C (derivative 0)."""
    C = as_fraction(C)
    prof = quotient_sum_profile(x, t_max)
    k1, k2 = kappa_enclosures()
    inf_fail = zero_fail = None
    for t, S in enumerate(prof.sums, 1):
        St = Interval.point(S)
        if inf_fail is None:
            bl = t.bit_length()
            # floor(log2 t) <= log2 t <= ceil(log2 t) settles most cases cheaply
            if S <= k1.lo * t + (bl - 1) + C:
                pass
            elif S > k1.hi * t + bl + C:
                inf_fail = t
            elif _cmp(St, k1 * t + _log2_of(t) + C) > 0:
                inf_fail = t
        if zero_fail is None and _cmp(St, k2 * t - C) < 0:
            zero_fail = t
        if inf_fail is not None and zero_fail is not None:
            break
    inf_ok, zero_ok = inf_fail is None, zero_fail is None
    if inf_ok and not zero_ok:
        tag = "consistent-with-infinite"
    elif zero_ok and not inf_ok:
        tag = "consistent-with-zero"
    else:
        tag = "inconclusive"
    return DerivativeClass(tag, t_max, C, inf_ok, zero_ok, inf_fail, zero_fail)


# ---------------------------------------------------------------------------
# the family g_lambda

def _lam_value(lam: Union[Number, str, Interval, RealOracle], bits: int) -> Lam:
    if isinstance(lam, RealOracle):
        ex = lam.exact()
        lam = ex if ex is not None else lam.enclose(bits)
    if isinstance(lam, Interval):
        if lam.lo <= 0 or lam.hi >= 1:
            raise ValidationError("lambda must lie in (0, 1)")
        return lam
    lam = as_fraction(lam)
    if not 0 < lam < 1:
        raise ValidationError("lambda must lie in (0, 1)")
    return lam


def _power(v: Lam, k: int, bits: Optional[int]) -> Lam:
    out = v ** k
    if isinstance(out, Interval) and bits is not None:
        out = out.round_out(bits)
    return out


def _descent_blocks(lam: Lam, blocks: Sequence[int], bits: Optional[int]):
    """Run the block path L^(b1-1) R^(b2) L^(b3) ...; returns (g_left, g_right - g_left)."""
    gl: Lam = Fraction(0) if not isinstance(lam, Interval) else Interval.point(0)
    d: Lam = Fraction(1) if not isinstance(lam, Interval) else Interval.point(1)
    mu = 1 - lam
    for i, b in enumerate(blocks):
        k = b - 1 if i == 0 else b
        if k == 0:
            continue
        if i % 2 == 0:
            d = d * _power(lam, k, bits)
        else:
            shrink = _power(mu, k, bits)
            gl = gl + (1 - shrink) * d
            d = d * shrink
        if bits is not None and isinstance(d, Interval):
            gl, d = gl.round_out(bits), d.round_out(bits)
    return gl, d


def mediant_descent(lam: Lam, x: Fraction, bits: Optional[int] = None) -> Lam:
    """g_lambda at a rational x by walking its Stern-Brocot path.

    A new mediant of neighbours a/b < c/d gets (1-lam) g(a/b) + lam g(c/d).
    """
    _in_unit(x)
    if x == 0 or x == 1:
        return x if not isinstance(lam, Interval) else Interval.point(x)
    qs = list(cf_expand(x).quotients)
    # the path to x ends one step early in its last block, then hits x
    qs[-1] -= 1
    gl, d = _descent_blocks(lam, qs, bits)
    return gl + lam * d


def g_lambda(lam: Union[Number, str, Interval, RealOracle], x: Union[Number, str, RealOracle],
             precision: int = 64) -> Union[Fraction, Interval]:
    """The Denjoy / Tichy-Uitz function; g_{1/2} is ?."""
    bits = precision + 32
    lv = _lam_value(lam, bits)
    if isinstance(x, RealOracle) and x.exact() is not None:
        x = x.exact()
    if not isinstance(x, RealOracle):
        xv = as_fraction(x)
        if lv == Fraction(1, 2):
            return _qm_rational(xv)
        return mediant_descent(lv, xv, bits if isinstance(lv, Interval) else None)
    # irrational: descend along the quotient stream until the bracket is thin
    target = Fraction(1, 1 << precision)
    s = _stream(x)
    if s is None:
        iv = x.enclose(precision + 32)
        lo = g_lambda(lv, max(iv.lo, Fraction(0)), precision)
        hi = g_lambda(lv, min(iv.hi, Fraction(1)), precision)
        lo_v = lo.lo if isinstance(lo, Interval) else lo
        hi_v = hi.hi if isinstance(hi, Interval) else hi
        return Interval(lo_v, hi_v)
    blocks: List[int] = []
    for b in s:
        blocks.append(b)
        gl, d = _descent_blocks(lv, blocks, bits if isinstance(lv, Interval) else None)
        gli = gl if isinstance(gl, Interval) else Interval.point(gl)
        di = d if isinstance(d, Interval) else Interval.point(d)
        out = Interval(gli.lo, (gli + di).hi)
        if out.width <= target:
            return out
        if len(blocks) > 64 * precision:
            break
    raise PrecisionExhausted("g_lambda enclosure did not shrink")


# ---------------------------------------------------------------------------
# semiregular continued fractions

def compositions_min2(total: int) -> Iterator[Tuple[int, ...]]:
    """Compositions of `total` into parts >= 2."""
    if total == 0:
        yield ()
        return
    for first in range(2, total + 1):
        rest = total - first
        if rest == 1:
            continue
        for tail in compositions_min2(rest):
            yield (first,) + tail


ZHAB_LAMBDA = SurdOracle(-3, 5, -2)  # (3 - sqrt 5)/2


@dataclass
class SemiregularReport:
    n: int
    values: List[Fraction]
    sup_deviation: Interval


def semiregular_level(n: int, lam: Union[RealOracle, Number, Interval, None] = None) -> SemiregularReport:
    """Xi_n and the sup distance of its empirical CDF from g_lambda, lambda = (3 - sqrt 5)/2."""
    if not 1 <= n <= 22:
        raise ValidationError("n must lie in [1, 22]")
    lv = _lam_value(ZHAB_LAMBDA if lam is None else lam, 96)
    vals = sorted(semiregular_value(SemiregularCF(c)) for c in compositions_min2(n + 1))
    N = len(vals)
    # g is continuous and increasing, so the sup sits at the jumps of the empirical CDF
    lo = hi = Fraction(0)
    for i, v in enumerate(vals, 1):
        g = mediant_descent(lv, v, 96 if isinstance(lv, Interval) else None)
        g = g if isinstance(g, Interval) else Interval.point(g)
        above, below = Fraction(i, N) - g, g - Fraction(i - 1, N)
        lo = max(lo, above.lo, below.lo)
        hi = max(hi, above.hi, below.hi)
    return SemiregularReport(n, vals, Interval(lo, hi))


# ---------------------------------------------------------------------------
# exploratory derivative proxy for g_lambda

PROXY_LABEL = ("proxy = log(g_lambda-measure of the Stern-Brocot interval / its length) "
               "along the descent path; a design choice, not a derivative")


def descent_log_ratio(lam: float, quotients: Sequence[int]) -> List[float]:
    """The proxy after each complete quotient block of x = [0; b1, b2, ...]."""
    ll, lr = math.log(lam), math.log(1 - lam)
    ql, qr = 1, 1
    nl = nr = 0
    out = []
    for i, b in enumerate(quotients):
        k = b - 1 if i == 0 else b
        if i % 2 == 0:
            qr += k * ql
            nl += k
        else:
            ql += k * qr
            nr += k
        out.append(nl * ll + nr * lr + math.log(ql) + math.log(qr))
    return out


def mirror_quotients(qs: Sequence[int]) -> List[int]:
    """Quotients of 1 - x from those of x in (0, 1)."""
    qs = list(qs)
    if qs[0] == 1:
        return [qs[1] + 1] + qs[2:]
    return [1, qs[0] - 1] + qs[1:]


def block_quotients(slope: Fraction, t_max: int, run: int = 100) -> List[int]:
    """Runs of floor(slope) + 1 followed by runs of floor(slope), mean close to slope."""
    b = math.floor(slope)
    k = round((slope - b) * run)
    out: List[int] = []
    while len(out) < t_max:
        out += [b + 1] * k + [b] * (run - k)
    return out[:t_max]


def sparse_quotients(slope: Fraction, t_max: int) -> List[int]:
    """Ones, with a catch-up quotient at each power of two so that S(t) tracks slope * t."""
    out, S = [], 0
    for t in range(1, t_max + 1):
        b = 1
        if t & (t - 1) == 0:
            b = max(1, math.ceil(slope * t) - S)
        out.append(b)
        S += b
    return out


def _trend(values: Sequence[float]) -> float:
    half = len(values) // 2
    y = np.asarray(values[half:], dtype=float)
    t = np.arange(half, len(values), dtype=float)
    return float(np.polyfit(t, y, 1)[0])


@dataclass
class KappaScan:
    lam: float
    t_max: int
    sparse_t_max: int
    constant: List[Dict[str, object]]
    blocks: List[Dict[str, object]]
    sparse: List[Dict[str, object]]
    label: str = PROXY_LABEL

    @staticmethod
    def _boundary(rows: List[Dict[str, object]]) -> Optional[Tuple[float, float]]:
        for a, b in zip(rows, rows[1:]):
            if a["grows"] and not b["grows"]:
                return (float(a["slope"]), float(b["slope"]))
        return None

    def constant_boundary(self):
        return self._boundary(self.constant)

    def block_boundary(self):
        return self._boundary(self.blocks)

    def sparse_boundary(self):
        return self._boundary(self.sparse)


def kappa_lambda_scan(lam: Union[float, Number], slopes: Sequence[Number], t_max: int = 4000,
                      b_values: Sequence[int] = (1, 2, 3, 4, 5, 6),
                      sparse_t_max: int = 1 << 16) -> KappaScan:
    """Growth or decay of the proxy for three test families, exploratory only.

    constant: x_b = [0; b, b, ...], judged by the late trend.
    blocks: long runs of two neighbouring quotients, the slow-continuant extreme.
    sparse: ones plus rare huge quotients, judged at the last two powers of two.
    """
    lam_f = float(lam)
    if not 0 < lam_f < 1:
        raise ValidationError("lambda must lie in (0, 1)")

    def trend_row(slope, qs):
        tr = descent_log_ratio(lam_f, qs)
        k = _trend(tr)
        return {"slope": float(slope), "trend": k, "final": tr[-1], "grows": k > 0}

    def sparse_row(slope):
        tr = descent_log_ratio(lam_f, sparse_quotients(slope, sparse_t_max))
        top = 1 << (sparse_t_max.bit_length() - 1)
        a, b = tr[top // 2 - 1], tr[top - 1]
        return {"slope": float(slope), "trend": (b - a) / (top // 2), "final": b, "grows": b > a}

    const = [trend_row(b, [b] * t_max) for b in b_values]
    grid = [Fraction(s).limit_denominator(10 ** 6) if isinstance(s, float) else as_fraction(s)
            for s in slopes]
    blk = [trend_row(s, block_quotients(s, t_max)) for s in grid]
    sp = [sparse_row(s) for s in grid]
    return KappaScan(lam_f, t_max, sparse_t_max, const, blk, sp)
