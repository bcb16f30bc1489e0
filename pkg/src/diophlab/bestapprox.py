"""Best approximation vectors, growth and Diophantine exponent estimates."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd, isqrt
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceeded, PrecisionExhausted, TooFewRecords, ValidationError
from .exact import convergents
from .reals import (
    CFStreamOracle,
    Interval,
    PolyRootOracle,
    RationalOracle,
    RealOracle,
    SurdOracle,
    sqrt_interval,
)


@dataclass(frozen=True)
class NormChoice:
    x_norm: str = "sup"
    y_norm: str = "sup"

    def __post_init__(self) -> None:
        for v in (self.x_norm, self.y_norm):
            if v not in ("sup", "euclidean"):
                raise ValidationError(f"unknown norm {v!r}")


SUP = NormChoice()


@dataclass(frozen=True)
class ApproxMatrix:
    """n rows (forms) by m columns (variables) of real oracles."""

    rows: Tuple[Tuple[RealOracle, ...], ...]

    @classmethod
    def column(cls, thetas: Sequence[RealOracle]) -> "ApproxMatrix":
        """m = 1: simultaneous approximation of the given numbers."""
        return cls(tuple((t,) for t in thetas))

    @classmethod
    def row(cls, thetas: Sequence[RealOracle]) -> "ApproxMatrix":
        """n = 1: a single linear form."""
        return cls((tuple(thetas),))

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0])

    def transpose(self) -> "ApproxMatrix":
        return ApproxMatrix(tuple(zip(*self.rows)))


@dataclass(frozen=True)
class BestApproxRecord:
    x: Tuple[int, ...]
    y: Tuple[int, ...]
    M: int  # sup norm of x, or squared Euclidean norm when the x-norm is Euclidean
    zeta: Interval  # sup of |Theta x - y|, or its square for the Euclidean y-norm
    squared: bool = False

    @property
    def size(self) -> float:
        return math.sqrt(self.M) if self.squared else float(self.M)

    def as_dict(self) -> Dict[str, object]:
        return {
            "x": list(self.x),
            "y": list(self.y),
            "M": self.M,
            "zeta_lo": str(self.zeta.lo),
            "zeta_hi": str(self.zeta.hi),
            "zeta": float(self.zeta.mid),
        }


class _Ambiguous(Exception):
    pass


def _scaled_entries(theta: ApproxMatrix, bits: int):
    """Common scale S and integer enclosures lo <= theta*S <= hi per entry."""
    exacts = [[e.exact() for e in row] for row in theta.rows]
    if all(v is not None for row in exacts for v in row):
        S = 1
        for row in exacts:
            for v in row:
                S = S * v.denominator // gcd(S, v.denominator)
        lo = [[int(v * S) for v in row] for row in exacts]
        return S, lo, lo, True
    S = 1 << bits
    lo, hi = [], []
    for row in theta.rows:
        rl, rh = [], []
        for e in row:
            a, b = e.fixed(bits)
            rl.append(a)
            rh.append(b)
        lo.append(rl)
        hi.append(rh)
    return S, lo, hi, False


def _dist_interval(vlo: int, vhi: int, S: int) -> Tuple[int, int, int]:
    """Integer enclosure of ||v/S||*S for v in [vlo, vhi], plus a nearest integer.

    At an exact half the smaller integer is chosen (lexicographic tie rule).
    """
    n = -((S - 2 * vlo) // (2 * S))

    def d(t: int) -> int:
        r = t % S
        return min(r, S - r)

    if 2 * (vhi - vlo) >= S:
        return 0, -(-S // 2), n
    lo = min(d(vlo), d(vhi))
    hi = max(d(vlo), d(vhi))
    if -(-vlo // S) <= vhi // S:
        lo = 0
    if -((S - 2 * vlo) // (2 * S)) <= (2 * vhi - S) // (2 * S):
        hi = -(-S // 2)
    return lo, hi, n


def _zeta(x: Sequence[int], S: int, lo, hi, y_norm: str):
    """(zlo, zhi, y) for the integer vector x."""
    ys = []
    zlo = zhi = 0
    for rl, rh in zip(lo, hi):
        vlo = vhi = 0
        for xi, a, b in zip(x, rl, rh):
            if xi >= 0:
                vlo += xi * a
                vhi += xi * b
            else:
                vlo += xi * b
                vhi += xi * a
        dlo, dhi, n = _dist_interval(vlo, vhi, S)
        ys.append(n)
        if y_norm == "sup":
            zlo, zhi = max(zlo, dlo), max(zhi, dhi)
        else:
            zlo += dlo * dlo
            zhi += dhi * dhi
    return zlo, zhi, tuple(ys)


def _shells(m: int, M_max: int, x_norm: str) -> Iterator[Tuple[int, List[Tuple[int, ...]]]]:
    """Nonzero x (first nonzero coordinate positive) grouped by norm key, increasing."""
    if m == 1:
        for q in range(1, M_max + 1):
            yield q, [(q,)]
        return
    if x_norm == "sup":
        for M in range(1, M_max + 1):
            pts = []
            for x in itertools.product(range(-M, M + 1), repeat=m):
                if max(abs(c) for c in x) != M:
                    continue
                first = next(c for c in x if c)
                if first > 0:
                    pts.append(x)
            yield M, sorted(pts)
        return
    groups: Dict[int, List[Tuple[int, ...]]] = {}
    for x in itertools.product(range(-M_max, M_max + 1), repeat=m):
        k = sum(c * c for c in x)
        if k == 0 or k > M_max * M_max:
            continue
        first = next(c for c in x if c)
        if first > 0:
            groups.setdefault(k, []).append(x)
    for k in sorted(groups):
        yield k, sorted(groups[k])


def _scan(theta: ApproxMatrix, norms: NormChoice, M_max: int, bits: int) -> List[BestApproxRecord]:
    S, lo, hi, exact = _scaled_entries(theta, bits)
    squared = norms.y_norm == "euclidean"
    scale = Fraction(1, S * S) if squared else Fraction(1, S)
    records: List[BestApproxRecord] = []
    best_lo = best_hi = None
    for key, pts in _shells(theta.m, M_max, norms.x_norm):
        cands = []
        for x in pts:
            zlo, zhi, y = _zeta(x, S, lo, hi, norms.y_norm)
            if best_lo is not None and zlo >= best_hi:
                continue  # certainly not better than the current record
            cands.append((zlo, zhi, x, y))
        if not cands:
            continue
        if exact:
            zmin = min(c[0] for c in cands)
            if best_lo is not None and zmin >= best_lo:
                continue
            winner = min(c for c in cands if c[0] == zmin)  # lexicographic tie rule
        else:
            winner = min(cands, key=lambda c: (c[1], c[2]))
            for c in cands:
                if c is not winner and c[0] <= winner[1]:
                    raise _Ambiguous()
            if best_lo is not None and winner[1] >= best_lo:
                raise _Ambiguous()
        zlo, zhi, x, y = winner
        if zhi == 0:
            raise ValidationError(f"matrix has an integral image at x = {x}; it violates the irrationality condition")
        records.append(BestApproxRecord(x, y, key, Interval(zlo * scale, zhi * scale), squared))
        best_lo, best_hi = zlo, zhi
    return records


def _convergent_records(theta: RealOracle, M_max: int, bits: int) -> List[BestApproxRecord]:
    if isinstance(theta, SurdOracle):
        exp = theta.expansion()
        b0, qs = exp.b0, exp.quotients()
    elif isinstance(theta, CFStreamOracle):
        b0, qs = theta.b0, theta.quotients()
    else:
        raise ValidationError("convergent method needs a quotient stream")
    out: List[BestApproxRecord] = []
    for p, q in convergents(b0, qs):
        if q > M_max:
            break
        if out and out[-1].M == q:
            out.pop()
        need = bits + 2 * q.bit_length() + 8
        iv = theta.enclose(need) * q - p
        iv = iv.abs()
        out.append(BestApproxRecord((q,), (p,), q, iv.round_out(need)))
    # the first convergent q = 1 is a record only if p is the nearest integer
    if out and out[0].M == 1:
        iv = theta.enclose(bits + 8)
        n = floor(iv.mid + Fraction(1, 2))
        out[0] = BestApproxRecord((1,), (n,), 1, (iv - n).abs().round_out(bits + 8))
    return out


def best_approximations(
    theta: ApproxMatrix,
    norms: NormChoice = SUP,
    M_max: int = 100,
    precision: int = 128,
    method: str = "enumerate",
) -> List[BestApproxRecord]:
    """All best approximation records with M <= M_max in increasing M.

    ``method='enumerate'`` scans every x with |x| <= M_max. For m = n = 1 and a
    quotient-stream oracle, ``method='convergents'`` lists convergent denominators,
    which are exactly the best approximations by the classical theory.
    """
    if M_max < 1:
        raise ValidationError("M_max must be positive")
    if method == "convergents":
        if theta.m != 1 or theta.n != 1:
            raise ValidationError("convergent method is for a single number")
        return _convergent_records(theta.rows[0][0], M_max, precision)
    bits = max(32, min(precision, 64 + 2 * M_max.bit_length()))
    while True:
        try:
            return _scan(theta, norms, M_max, bits)
        except _Ambiguous:
            if bits >= precision:
                raise PrecisionExhausted(f"tie between candidates not resolved at {precision} bits")
            bits = min(precision, bits * 2)


def naive_best_approximations(theta_values: Sequence[Sequence[Fraction]], M_max: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Reference oracle: test every candidate (x, y) against every other in its box.

    ``theta_values`` are exact rationals (dense approximations of the real
    entries); sup norms on both sides.
    """
    n, m = len(theta_values), len(theta_values[0])
    cands = []
    for x in itertools.product(range(-M_max, M_max + 1), repeat=m):
        if not any(x):
            continue
        first = next(c for c in x if c)
        if first < 0:
            continue
        vals = [sum(t * xi for t, xi in zip(row, x)) for row in theta_values]
        for y in itertools.product(*[(floor(v), floor(v) + 1) for v in vals]):
            err = max(abs(v - yi) for v, yi in zip(vals, y))
            cands.append((max(abs(c) for c in x), err, x, y))
    size = np.array([float(c[0]) for c in cands])
    err = np.array([float(c[1]) for c in cands])
    out = []
    for i, (M, e, x, y) in enumerate(cands):
        inside = (size <= M) & (err <= float(e))
        if int(inside.sum()) == 1:  # only itself (negatives are not listed)
            out.append((x, y))
    out.sort(key=lambda z: max(abs(c) for c in z[0]))
    return out


# growth ---------------------------------------------------------------------

def _log_size(r: BestApproxRecord) -> float:
    return math.log(r.M) / 2 if r.squared else math.log(r.M)


@dataclass
class GrowthReport:
    estimate: float
    literal_min_root: float
    ratios: List[float]
    count: int


def growth_exponent(records: Sequence[BestApproxRecord]) -> GrowthReport:
    """Finite proxy for liminf M_nu^(1/nu).

    The estimate is the minimum over nu in the last half of
    (M_nu / M_h)^(1/(nu - h)) with h = ceil(nu/2); the constant prefactor of
    M_nu cancels, so the proxy converges much faster than M_nu^(1/nu). The
    literal minimum of M_nu^(1/nu) over the same window is reported alongside.
    """
    if len(records) < 10:
        raise TooFewRecords(f"{len(records)} records, need 10")
    logs = [_log_size(r) for r in records]
    N = len(logs)
    lits = [math.exp(logs[i] / (i + 1)) for i in range(N // 2, N)]
    ests = []
    for nu in range(N // 2, N + 1):
        h = (nu + 1) // 2
        if nu - h < 1:
            continue
        ests.append(math.exp((logs[nu - 1] - logs[h - 1]) / (nu - h)))
    ratios = [math.exp(b - a) for a, b in zip(logs, logs[1:])]
    return GrowthReport(min(ests), min(lits), ratios, N)


def check_growth_recurrences(records: Sequence[BestApproxRecord], n: int, K: int) -> Dict[str, object]:
    """Check M_{v+2^(n+1)} >= 2M_{v+1} + M_v and M_{v+K} >= M_{v+1} + M_v."""
    Ms = [r.M for r in records]
    lag = 2 ** (n + 1)
    viol_l = [v + 1 for v in range(len(Ms) - lag) if Ms[v + lag] < 2 * Ms[v + 1] + Ms[v]]
    viol_k = [v + 1 for v in range(len(Ms) - K) if Ms[v + K] < Ms[v + 1] + Ms[v]] if K >= 2 else []
    return {
        "lagarias_window": lag,
        "lagarias_violations": viol_l,
        "contact_window": K,
        "contact_violations": viol_k,
        "ok": not viol_l and not viol_k,
    }


def psi_theta(theta: ApproxMatrix, t: int, precision: int = 128, norms: NormChoice = SUP) -> Interval:
    """min over 0 < |x| <= t of |Theta x - y| (sup norms)."""
    if t < 1:
        raise ValidationError("t must be at least 1")
    recs = best_approximations(theta, norms, t, precision)
    return recs[-1].zeta


# exponents ------------------------------------------------------------------

@dataclass
class ExponentEstimate:
    ordinary: float
    uniform: float
    ordinary_fit: float
    uniform_fit: float
    records_used: int
    first_half: Dict[str, float] = field(default_factory=dict)
    residuals: List[float] = field(default_factory=list)


def _log_inv_zeta(r: BestApproxRecord) -> float:
    z = r.zeta.mid
    v = math.log(z.denominator) - math.log(z.numerator)
    return v / 2 if r.squared else v


def estimate_exponents(records: Sequence[BestApproxRecord]) -> ExponentEstimate:
    """Finite proxies for the ordinary and uniform exponents.

    ``ordinary`` is the max of log(1/zeta_v)/log M_v and ``uniform`` the min of
    log(1/zeta_v)/log M_{v+1}, both over the last half of the records (the
    first half is reported too). These converge like omega + O(1/log M),
    so the least-squares slopes of log(1/zeta_v) against log M_v and against
    log M_{v+1} over all records with M > 1 are returned as ``ordinary_fit``
    and ``uniform_fit``; the slope cancels the constant factor.
    """
    if len(records) < 10:
        raise TooFewRecords(f"{len(records)} records, need 10")
    ls = [_log_size(r) for r in records]
    lz = [_log_inv_zeta(r) for r in records]
    N = len(records)

    def stats(idx: range) -> Tuple[float, float]:
        ords = [lz[i] / ls[i] for i in idx if ls[i] > 0]
        unis = [lz[i] / ls[i + 1] for i in idx if i + 1 < N]
        return max(ords), min(unis)

    last = range(N // 2, N)
    first = range(1, N // 2)
    o, u = stats(last)
    fo, fu = stats(first)
    idx = [i for i in range(N) if ls[i] > 0]
    xs = np.array([ls[i] for i in idx])
    ys = np.array([lz[i] for i in idx])
    slope, icpt = np.polyfit(xs, ys, 1)
    res = [float(v) for v in ys - (slope * xs + icpt)]
    idx_u = [i for i in idx if i + 1 < N]
    uslope = np.polyfit(np.array([ls[i + 1] for i in idx_u]), np.array([lz[i] for i in idx_u]), 1)[0]
    return ExponentEstimate(o, u, float(slope), float(uslope), len(last), {"ordinary": fo, "uniform": fu}, res)


# positive orthant and other domains -------------------------------------------

@dataclass(frozen=True)
class DomainConstraint:
    kind: str = "all"  # all | positive | angular | thurnheer | psi_eps | psi_ml
    rho: Fraction = Fraction(1)
    tau: Fraction = Fraction(0)
    w: Fraction = Fraction(1)
    eps: Fraction = Fraction(1)
    l: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("all", "positive", "angular", "thurnheer", "psi_eps", "psi_ml"):
            raise ValidationError(f"unknown domain {self.kind!r}")
        if self.kind == "angular" and (self.rho <= 1 or self.tau < 0):
            raise ValidationError("angular domain needs rho > 1 and tau >= 0")


def _iroot_floor(n: int, k: int) -> int:
    """floor(n^(1/k)) for n >= 0."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k)))
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _pow_floor(a: int, e: Fraction) -> int:
    """floor(a^e) for a >= 0 and rational e >= 0."""
    return _iroot_floor(a ** e.numerator, e.denominator)


def in_domain(x: Sequence[int], d: DomainConstraint) -> bool:
    """Exact membership test."""
    ax = [abs(c) for c in x]
    if d.kind == "all":
        return True
    if d.kind == "positive":
        return all(c >= 0 for c in x)
    if d.kind == "angular":
        x1, x2 = ax[0], ax[1]
        # |x2| <= |x1|^rho  or  |x1| <= |x2|^tau
        if x2 ** d.rho.denominator <= x1 ** d.rho.numerator:
            return True
        if d.tau == 0:
            return x1 <= 1
        return x1 ** d.tau.denominator <= x2 ** d.tau.numerator
    if d.kind == "thurnheer":
        s = sum(c * c for c in ax[:-1])
        if s <= 1:
            return True
        p, q = d.w.numerator, d.w.denominator
        # |x_m| <= (1+eps) s^(w/2)  <=>  |x_m|^(2q) <= (1+eps)^(2q) s^p
        return Fraction(ax[-1]) ** (2 * q) <= (1 + d.eps) ** (2 * q) * Fraction(s) ** p
    if d.kind == "psi_eps":
        return ax[-1] <= d.eps * max(ax[:-1])
    if d.kind == "psi_ml":
        return max(ax[d.l:], default=0) <= max(ax[: d.l])
    raise ValidationError(d.kind)


def _ceil_pow(a: int, e: Fraction) -> int:
    """Smallest integer c >= 0 with c^e >= a (a >= 0, e > 0)."""
    c = _iroot_floor(a ** e.denominator, e.numerator)
    if c ** e.numerator < a ** e.denominator:
        c += 1
    return c


def _row_rule(a1: int, d: DomainConstraint) -> Tuple[Optional[int], Optional[int]]:
    """For the row |x1| = a1 of a two-variable scan: allowed iff |x2| <= T or |x2| >= L.

    None means no bound of that kind.
    """
    if d.kind in ("all", "positive"):
        return None, None
    if d.kind == "angular":
        T = _pow_floor(a1, d.rho)
        if d.tau == 0:
            return (None, None) if a1 <= 1 else (T, None)
        return T, _ceil_pow(a1, d.tau)
    if d.kind == "thurnheer":
        if a1 <= 1:
            return None, None
        # largest k with k^(2q) <= (1+eps)^(2q) * a1^(2p)
        p, q = d.w.numerator, d.w.denominator
        rhs = (1 + d.eps) ** (2 * q) * Fraction(a1) ** (2 * p)
        k = int(float(1 + d.eps) * a1 ** float(d.w)) + 2
        while Fraction(k) ** (2 * q) > rhs:
            k -= 1
        return k, None
    if d.kind == "psi_eps":
        return floor(d.eps * a1), None
    if d.kind == "psi_ml":
        return a1, None
    raise ValidationError(d.kind)


@dataclass
class PsiPlusReport:
    grid: List[int]
    minima: List[Interval]
    argmins: List[Tuple[int, ...]]
    exponent: float
    domain: DomainConstraint


def _geometric_grid(t_max: int, ratio: float) -> List[int]:
    out, t = {t_max}, 1.0
    while t <= t_max:
        out.add(int(round(t)))
        t *= ratio
    return sorted(out)


def psi_plus_scan(thetas: Sequence[RealOracle], domain: DomainConstraint, t_max: int, precision: int = 128, grid_ratio: float = 1.25) -> PsiPlusReport:
    """Minima of ||theta . x|| over domain points with 0 < max|x_i| <= t on a geometric grid.

    Two-variable scans run row by row in int64 fixed point; each value carries
    a Lipschitz error bound, so every minimum is a certified enclosure.
    """
    m = len(thetas)
    if m < 2:
        raise ValidationError("need at least two numbers")
    if t_max < 1:
        raise ValidationError("t_max must be positive")
    grid = _geometric_grid(t_max, grid_ratio)
    if m != 2:
        return _psi_plus_generic(thetas, domain, grid, precision)
    B = min(precision, 60 - (2 * t_max + 1).bit_length())
    if B < 24:
        raise PrecisionExhausted("t_max too large for the fixed-point scan")
    S = 1 << B
    fx = [t.fixed(B) for t in thetas]
    A = [np.int64(f[0]) for f in fx]
    E = [f[1] - f[0] for f in fx]
    g = np.array(grid, dtype=np.int64)
    best_hi = np.full(len(grid), np.iinfo(np.int64).max, dtype=np.int64)
    best_lo = np.full(len(grid), np.iinfo(np.int64).max, dtype=np.int64)
    argmins: List[Tuple[int, int]] = [(0, 0)] * len(grid)
    k = np.arange(0, t_max + 1, dtype=np.int64)
    big = np.iinfo(np.int64).max
    for x1 in range(0, t_max + 1):
        T, L = _row_rule(x1, domain)
        allowed = np.ones(t_max + 1, dtype=bool)
        if T is not None:
            allowed = k <= T
            if L is not None:
                allowed |= k >= L
        signs = (1,) if (domain.kind == "positive" or x1 == 0) else (1, -1)
        hi_row = np.full(t_max + 1, big, dtype=np.int64)
        lo_row = np.full(t_max + 1, big, dtype=np.int64)
        arg_sign = np.ones(t_max + 1, dtype=np.int64)
        base = np.int64(x1) * A[0]
        err = x1 * E[0] + k * E[1]
        for sg in signs:
            v = base + sg * k * A[1]
            r = np.mod(v, S)
            d = np.minimum(r, S - r)
            h = np.where(allowed, d + err, big)
            lw = np.where(allowed, np.maximum(d - err, 0), big)
            better = h < hi_row
            arg_sign = np.where(better, sg, arg_sign)
            hi_row = np.minimum(hi_row, h)
            lo_row = np.minimum(lo_row, lw)
        if x1 == 0:
            hi_row[0] = lo_row[0] = big
        cm_hi = np.minimum.accumulate(hi_row)
        cm_lo = np.minimum.accumulate(lo_row)
        live = g >= x1
        idx = g[live]
        cand_hi, cand_lo = cm_hi[idx], cm_lo[idx]
        pos = np.nonzero(live)[0]
        improved = cand_hi < best_hi[pos]
        best_lo[pos] = np.minimum(best_lo[pos], cand_lo)
        for j in np.nonzero(improved)[0]:
            gi = pos[j]
            best_hi[gi] = cand_hi[j]
            kk = int(np.argmin(hi_row[: idx[j] + 1]))
            argmins[gi] = (x1, int(arg_sign[kk]) * kk)
    minima = [Interval(Fraction(int(lo), S), Fraction(int(hi), S)) for lo, hi in zip(best_lo, best_hi)]
    return PsiPlusReport(grid, minima, list(argmins), _fit_plus(grid, minima), domain)


def _psi_plus_generic(thetas, domain, grid, precision) -> PsiPlusReport:
    t_max = grid[-1]
    m = len(thetas)
    theta = ApproxMatrix.row(thetas)
    S, lo, hi, _ = _scaled_entries(theta, precision)
    pts = []
    for x in itertools.product(range(-t_max, t_max + 1), repeat=m):
        if not any(x) or not in_domain(x, domain):
            continue
        first = next(c for c in x if c)
        if domain.kind != "positive" and first < 0:
            continue
        zlo, zhi, _ = _zeta(x, S, lo, hi, "sup")
        pts.append((max(abs(c) for c in x), zlo, zhi, x))
    minima, argmins = [], []
    for t in grid:
        c = [p for p in pts if p[0] <= t]
        best = min(c, key=lambda p: (p[2], p[3]))
        lo_v = min(p[1] for p in c)
        minima.append(Interval(Fraction(lo_v, S), Fraction(best[2], S)))
        argmins.append(best[3])
    return PsiPlusReport(grid, minima, argmins, _fit_plus(grid, minima), domain)


def _fit_plus(grid: List[int], minima: List[Interval]) -> float:
    """Max over the upper half of the grid of log(1/psi(t))/log t."""
    vals = []
    for t, iv in zip(grid, minima):
        v = float(iv.hi)
        if t > 1 and v > 0:
            vals.append(math.log(1 / v) / math.log(t))
    half = vals[len(vals) // 2:]
    return max(half) if half else float("nan")


# span of the tail ---------------------------------------------------------------

def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    mat = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c] / mat[rank][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def dim_span_tail(records: Sequence[BestApproxRecord], nu0: int) -> int:
    """Rank of the vectors z_nu = (x_nu, y_nu) for nu >= nu0 (1-based)."""
    tail = records[nu0 - 1:]
    if not tail:
        raise TooFewRecords(f"no records beyond index {nu0}")
    return integer_rank([r.x + r.y for r in tail])


# cubic lattice example ----------------------------------------------------------

@dataclass
class CylinderMinimum:
    coeffs: Tuple[int, int, int]
    real: float
    complex_sq: float
    norm: float


def _phi4_embeddings(bits: int = 80):
    phi4 = PolyRootOracle((1, 0, -1, -1), (Fraction(1), Fraction(2)), "phi4")
    p = float(phi4.enclose(bits).mid)
    re = -p / 2
    im = math.sqrt(1 / p - p * p / 4)
    re2, im2 = re * re - im * im, 2 * re * im
    basis = np.array([[1.0, p, p * p], [1.0, re, re2], [0.0, im, im2]])
    return phi4, basis


def brentjes_best_approx(bound: float, complex_cap: float = 1.0 + 1e-9,
                         budget: int = 4 * 10 ** 7) -> Dict[str, object]:
    """Cylinder-minimal points of the lattice of the cubic field of t^3 = t + 1.

    Points w = x0 + x1 t + x2 t^2 are embedded as (w, Re w', Im w'). Enumerates
    every lattice point with |w| <= bound in the real coordinate and complex
    part at most ``complex_cap``, ordered by the real coordinate; a point is
    minimal when no other point has both a smaller-or-equal real coordinate
    and a smaller-or-equal complex modulus. Reports |w_nu|^(1/nu) and the
    consecutive norm ratios.
    """
    if bound < 2:
        raise ValidationError("bound too small")
    _, basis = _phi4_embeddings()
    inv = np.linalg.inv(basis)
    box = np.abs(inv) @ np.array([bound, complex_cap, complex_cap])
    c1, c2 = int(box[1]) + 2, int(box[2]) + 2
    if (2 * c1 + 1) * (2 * c2 + 1) > budget:
        raise BudgetExceeded(f"{(2 * c1 + 1) * (2 * c2 + 1)} candidate points exceed the budget {budget}")
    x1, x2 = np.meshgrid(np.arange(-c1, c1 + 1), np.arange(-c2, c2 + 1), indexing="ij")
    x1, x2 = x1.ravel(), x2.ravel()
    # x0 chosen so the complex coordinate is small: try the integers near -Re(x1 a + x2 a^2)
    re_part = x1 * basis[1, 1] + x2 * basis[1, 2]
    im_part = x1 * basis[2, 1] + x2 * basis[2, 2]
    keep = np.abs(im_part) <= complex_cap
    x1, x2, re_part, im_part = x1[keep], x2[keep], re_part[keep], im_part[keep]
    pts = []
    for off in (-1, 0, 1, 2):
        x0 = np.floor(-re_part).astype(np.int64) + off
        cre = x0 + re_part
        csq = cre * cre + im_part * im_part
        real = x0 + x1 * basis[0, 1] + x2 * basis[0, 2]
        sel = (csq <= complex_cap ** 2) & (np.abs(real) <= bound) & ((x0 != 0) | (x1 != 0) | (x2 != 0))
        for a, b, c, r, s in zip(x0[sel], x1[sel], x2[sel], real[sel], csq[sel]):
            if r > 0 or (r == 0 and s > 0):
                pts.append((abs(float(r)), float(s), (int(a), int(b), int(c))))
    pts = sorted(set(pts))
    minima: List[CylinderMinimum] = []
    best_c = math.inf
    margin = 1e-9
    for i, (r, s, co) in enumerate(pts):
        if s < best_c - margin:
            # ties within the margin would need exact arithmetic; none occur for units
            if i + 1 < len(pts) and abs(pts[i + 1][0] - r) < margin and pts[i + 1][1] <= s + margin:
                raise PrecisionExhausted("cylinder tie needs exact comparison")
            minima.append(CylinderMinimum(co, r, s, math.sqrt(r * r + s)))
            best_c = s
    roots = [m.norm ** (1.0 / (k + 1)) for k, m in enumerate(minima)]
    ratios = [b.norm / a.norm for a, b in zip(minima, minima[1:])]
    # periodicity: successive minima differ by multiplication by the unit t
    period = _unit_step_period(minima)
    norms = [field_norm(m.coeffs) for m in minima]
    return {"minima": minima, "root_sequence": roots, "ratios": ratios, "unit_period": period, "field_norms": norms}


def field_norm(coeffs: Tuple[int, int, int]) -> int:
    """Exact norm of x0 + x1 t + x2 t^2 with t^3 = t + 1 (determinant of multiplication)."""
    x0, x1, x2 = coeffs
    T = [[0, 0, 1], [1, 0, 1], [0, 1, 0]]  # columns: t*1 = t, t*t = t^2, t*t^2 = 1 + t
    T2 = [[sum(T[i][k] * T[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    A = [[x0 * (i == j) + x1 * T[i][j] + x2 * T2[i][j] for j in range(3)] for i in range(3)]
    return (
        A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
        - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
        + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
    )


def _unit_step_period(minima: List[CylinderMinimum]) -> Optional[int]:
    """Smallest p such that w_{k+p} = t * w_k (as coefficient vectors) for all k in range."""

    def times_t(c):
        # (x0 + x1 t + x2 t^2) t = x0 t + x1 t^2 + x2 (t + 1)
        x0, x1, x2 = c
        return (x2, x0 + x2, x1)

    cs = [m.coeffs for m in minima]
    for p in range(1, max(2, len(cs) // 2)):
        if all(cs[k + p] == times_t(cs[k]) for k in range(len(cs) - p)):
            return p
    return None
