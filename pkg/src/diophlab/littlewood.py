"""Littlewood-type product scans, lattice minima and lacunary avoiders."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import PrecisionExhausted, ResolutionTooCoarse, ValidationError
from .exact import as_fraction, is_prime, nearest_int_distance
from .errors import NotPrime
from .reals import (
    Interval,
    PolyRootOracle,
    RealOracle,
    log_interval,
    poly_in,
)

SCALE_BITS = 62
_REL = 2.0 ** -48  # outward widening covering float64 rounding of the products


@dataclass
class ProductScanResult:
    N: int
    minima: List[Tuple[int, Interval]]
    label: str = ""

    @property
    def trace(self) -> List[int]:
        return [q for q, _ in self.minima]

    @property
    def best(self) -> Interval:
        return self.minima[-1][1]

    def as_rows(self) -> List[Dict[str, object]]:
        return [{"q": q, "lo": float(v.lo), "hi": float(v.hi)} for q, v in self.minima]


def _dist_bounds(theta: RealOracle, qs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Float lower/upper bounds of ||q theta|| for every q in ``qs`` (q < 2^31).

    Rationals are handled exactly modulo their denominator; other reals
    through a 62-bit fixed-point enclosure of the fractional part, split in two
    limbs so that q * theta mod 1 stays inside int64.
    """
    if int(qs.max()) >= 1 << 31:
        raise ValidationError("scan bound too large for the fixed-point engine")
    ex = theta.exact()
    if ex is not None:
        b = ex.denominator
        a = ex.numerator % b
        if b < 1 << 31:
            r = (qs % b) * a % b
            d = np.minimum(r, b - r).astype(np.float64) / b
            return d, d
    B = SCALE_BITS
    S = 1 << B
    lo, hi = theta.fixed(B)
    A = lo % S
    E = hi - lo
    k = 31
    a_hi, a_lo = A >> k, A & ((1 << k) - 1)
    mask_hi = (1 << (B - k)) - 1
    part = ((qs * np.int64(a_hi)) & np.int64(mask_hi)) << np.int64(k)
    v = (part + qs * np.int64(a_lo)) & np.int64(S - 1)
    d = np.minimum(v, S - v)
    err = qs * np.int64(E)
    dlo = np.maximum(d - err, 0).astype(np.float64) / float(S)
    dhi = (d + err).astype(np.float64) / float(S)
    return dlo * (1 - _REL), np.minimum(dhi * (1 + _REL), 0.5)


def _records(qs: np.ndarray, lo: np.ndarray, hi: np.ndarray, N: int, label: str) -> ProductScanResult:
    """Strict record minima of certified values [lo, hi] along increasing q."""
    out: List[Tuple[int, Interval]] = []
    prev_lo = prev_hi = math.inf
    # only indices that can beat the running upper bound matter
    run = np.minimum.accumulate(hi)
    cand = np.nonzero(lo < np.concatenate(([math.inf], run[:-1])))[0]
    for i in cand:
        l, h = float(lo[i]), float(hi[i])
        if h < prev_lo:
            out.append((int(qs[i]), Interval(Fraction(l), Fraction(h))))
            prev_lo, prev_hi = l, h
            if h == 0:
                break
        elif l < prev_hi:
            raise PrecisionExhausted(f"record comparison at q = {int(qs[i])} is not resolved")
    return ProductScanResult(N, out, label)


def littlewood_scan(theta1: RealOracle, theta2: RealOracle, N: int, precision: int = SCALE_BITS) -> ProductScanResult:
    """Record minima of q ||q theta1|| ||q theta2|| for q <= N."""
    return multi_littlewood_scan([theta1, theta2], N, precision)


def multi_littlewood_scan(thetas: Sequence[RealOracle], N: int, precision: int = SCALE_BITS, log_weight: bool = False) -> ProductScanResult:
    """Record minima of q prod_j ||q theta_j|| (times log q when ``log_weight``)."""
    if N < 1:
        raise ValidationError("N must be positive")
    qs = np.arange(1, N + 1, dtype=np.int64)
    lo = qs.astype(np.float64)
    hi = lo.copy()
    if log_weight:
        qs, lo, hi = qs[1:], lo[1:] * np.log(lo[1:]) * (1 - _REL), hi[1:] * np.log(hi[1:]) * (1 + _REL)
    for t in thetas:
        dlo, dhi = _dist_bounds(t, qs)
        lo, hi = lo * dlo * (1 - _REL), hi * dhi * (1 + _REL)
    return _records(qs, lo, hi, N, "q*log q*prod" if log_weight else "q*prod")


def _padic_norm_array(qs: np.ndarray, p: int) -> np.ndarray:
    out = np.ones(len(qs), dtype=np.float64)
    r = qs.copy()
    div = r % p == 0
    while div.any():
        out[div] /= p
        r[div] //= p
        div = (r % p == 0) & div
    return out


def mixed_littlewood_scan(theta: RealOracle, primes: Sequence[int], N: int, precision: int = SCALE_BITS, q_values: Optional[Sequence[int]] = None) -> ProductScanResult:
    """Record minima of q prod_i |q|_{p_i} ||q theta|| over q <= N (or over ``q_values``)."""
    if len(set(primes)) != len(primes):
        raise ValidationError("primes must be distinct")
    for p in primes:
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
    qs = np.arange(1, N + 1, dtype=np.int64) if q_values is None else np.array(sorted(q_values), dtype=np.int64)
    w = qs.astype(np.float64)
    for p in primes:
        w = w * _padic_norm_array(qs, p)  # exact: powers of two scale, otherwise one rounding
    dlo, dhi = _dist_bounds(theta, qs)
    return _records(qs, w * dlo * (1 - _REL), w * dhi * (1 + _REL), N, "mixed")


def padic_power_values(theta: RealOracle, p: int, n_max: int, q_max: int) -> Dict[Tuple[int, int], float]:
    """q ||p^n q theta|| on a grid; equals the mixed product at Q = p^n q when p does not divide q."""
    out = {}
    for n in range(n_max + 1):
        qs = np.arange(1, q_max + 1, dtype=np.int64)
        _, dhi = _dist_bounds(theta, qs * p ** n)
        for q, v in zip(qs, dhi):
            out[(n, int(q))] = float(q) * float(v)
    return out


# lattices -----------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraicLattice:
    basis: Tuple[Tuple[RealOracle, ...], ...]  # rows are embeddings

    @property
    def dim(self) -> int:
        return len(self.basis)


def lattice_product_min(lattice: AlgebraicLattice, coeff_bound: int, precision: int = 96) -> Tuple[Interval, Tuple[int, ...]]:
    """min |z_0 ... z_n| over nonzero z = basis * c with |c_i| <= coeff_bound."""
    if coeff_bound < 1:
        raise ValidationError("coeff_bound must be positive")
    S = 1 << precision
    fx = [[e.fixed(precision) for e in row] for row in lattice.basis]
    best_lo = best_hi = None
    arg: Tuple[int, ...] = ()
    d = lattice.dim
    for c in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=d):
        if not any(c) or next(v for v in c if v) < 0:
            continue
        plo, phi = 1, 1
        for row in fx:
            lo = sum(ci * (a if ci >= 0 else b) for ci, (a, b) in zip(c, row))
            hi = sum(ci * (b if ci >= 0 else a) for ci, (a, b) in zip(c, row))
            alo = 0 if lo <= 0 <= hi else min(abs(lo), abs(hi))
            ahi = max(abs(lo), abs(hi))
            plo, phi = plo * alo, phi * ahi
        if best_hi is None or phi < best_hi:
            best_hi, arg = phi, c
        best_lo = plo if best_lo is None else min(best_lo, plo)
    scale = Fraction(1, S ** d)
    return Interval(best_lo * scale, best_hi * scale), arg


# badly approximable scans -------------------------------------------------------

@dataclass
class BadScanResult:
    violation: Optional[int]
    N: int
    weights: Tuple[Fraction, ...]
    delta: Fraction

    @property
    def clean(self) -> bool:
        return self.violation is None


def _certify_bad(q: int, thetas: Sequence[RealOracle], weights: Sequence[Fraction], delta: Fraction, bits: int) -> Optional[bool]:
    """Exact decision of max_j q^w_j ||q theta_j|| < delta; None if unresolved."""
    strict = True
    for t, w in zip(thetas, weights):
        iv = t.enclose(bits + 2 * q.bit_length())
        f = iv * q
        n = floor(f.mid + Fraction(1, 2))
        d = (f - n).abs()
        # q^w d < delta  <=>  q^num * d^den < delta^den
        lhs = d ** w.denominator * (q ** w.numerator)
        rhs = delta ** w.denominator
        if lhs.certainly_lt(rhs):
            continue
        if Interval.point(rhs).certainly_le(lhs):
            return False
        strict = None
    return strict


def bad_membership_scan(thetas: Sequence[RealOracle], weights: Sequence, delta, N: int, precision: int = 128) -> BadScanResult:
    """First q <= N with max_j q^w_j ||q theta_j|| < delta, or a clean report.

    A clean report only says that no violation exists below N.
    """
    ws = tuple(as_fraction(w) if not isinstance(w, Fraction) else w for w in weights)
    delta = as_fraction(delta) if not isinstance(delta, Fraction) else delta
    if len(ws) != len(thetas):
        raise ValidationError("one weight per number")
    if sum(ws) != 1 or any(w < 0 or w > 1 for w in ws):
        raise ValidationError("weights must lie in [0,1] and sum to 1")
    if delta <= 0:
        raise ValidationError("delta must be positive")
    qs = np.arange(1, N + 1, dtype=np.int64)
    val = np.zeros(N)
    for t, w in zip(thetas, ws):
        _, dhi = _dist_bounds(t, qs)
        val = np.maximum(val, qs.astype(np.float64) ** float(w) * dhi)
    dl = float(delta)
    cand = np.nonzero(val < dl * (1 + 1e-9))[0]
    for i in cand:
        q = int(qs[i])
        res = _certify_bad(q, thetas, ws, delta, precision)
        if res is None:
            raise PrecisionExhausted(f"comparison with delta at q = {q} not resolved")
        if res:
            return BadScanResult(q, N, ws, delta)
    return BadScanResult(None, N, ws, delta)


# Peck-type inequalities ------------------------------------------------------------

def cubic_cos_basis() -> List[RealOracle]:
    """(t, t^2) for t = 2cos(2 pi/7), root of t^3 + t^2 - 2t - 1 in (1, 2)."""
    t = PolyRootOracle((1, 1, -2, -1), (Fraction(1), Fraction(2)), "2cos(2pi/7)")
    return [t, poly_in(t, (1, 0, 0), "t^2")]


@dataclass
class PeckReport:
    witnesses: List[int]
    C: Fraction
    N: int
    bad_inf: float  # min over q of q^(1/n) max_j ||q theta_j||


def peck_verify(thetas: Sequence[RealOracle], C, N: int, precision: int = 128) -> PeckReport:
    """All q in [2, N] with ||q theta_j|| <= C q^(-1/n) (log q)^(-1/(n-1)) for j < n and ||q theta_n|| <= C q^(-1/n)."""
    n = len(thetas)
    if n < 2:
        raise ValidationError("need at least two numbers")
    C = as_fraction(C) if not isinstance(C, Fraction) else C
    qs = np.arange(2, N + 1, dtype=np.int64)
    qf = qs.astype(np.float64)
    ratio = np.zeros(len(qs))
    dmax = np.zeros(len(qs))
    for j, t in enumerate(thetas):
        _, dhi = _dist_bounds(t, qs)
        bound = float(C) * qf ** (-1.0 / n)
        if j < n - 1:
            bound = bound * np.log(qf) ** (-1.0 / (n - 1))
        ratio = np.maximum(ratio, dhi / bound)
        dmax = np.maximum(dmax, dhi)
    bad_inf = float(np.min(qf ** (1.0 / n) * dmax))
    out = []
    for i in np.nonzero(ratio <= 1 + 1e-9)[0]:
        q = int(qs[i])
        ok = _certify_peck(q, thetas, C, precision)
        if ok is None:
            raise PrecisionExhausted(f"Peck inequality at q = {q} not resolved")
        if ok:
            out.append(q)
    return PeckReport(out, C, N, bad_inf)


def _certify_peck(q: int, thetas: Sequence[RealOracle], C: Fraction, bits: int) -> Optional[bool]:
    n = len(thetas)
    lg = log_interval(q, bits)
    for j, t in enumerate(thetas):
        f = t.enclose(bits + 2 * q.bit_length()) * q
        d = (f - floor(f.mid + Fraction(1, 2))).abs()
        # raise to the power n(n-1): d^(n(n-1)) q^(n-1) [log q]^n <= C^(n(n-1))
        lhs = d ** (n * (n - 1)) * q ** (n - 1)
        if j < n - 1:
            lhs = lhs * lg ** n
        rhs = C ** (n * (n - 1))
        if lhs.certainly_le(rhs):
            continue
        if Interval.point(rhs).certainly_lt(lhs):
            return False
        return None
    return True


# Furstenberg sequence ----------------------------------------------------------------

def furstenberg_sequence(bound: int) -> List[int]:
    """Sorted integers 2^a 3^b <= bound."""
    if bound < 1:
        raise ValidationError("bound must be at least 1")
    out = []
    p2 = 1
    while p2 <= bound:
        v = p2
        while v <= bound:
            out.append(v)
            v *= 3
        p2 *= 2
    return sorted(out)


def furstenberg_count_estimate(bound: float) -> float:
    return math.log(bound) ** 2 / (2 * math.log(2) * math.log(3))


# lacunary avoider -----------------------------------------------------------------

@dataclass(frozen=True)
class LacunarySequence:
    terms: Tuple[Fraction, ...]
    M: Fraction

    def __post_init__(self) -> None:
        if self.M < 2:
            raise ValidationError("lacunarity parameter M must be at least 2")
        if not self.terms or self.terms[0] <= 0:
            raise ValidationError("terms must be positive")
        step = 1 + 1 / self.M
        for j, (a, b) in enumerate(zip(self.terms, self.terms[1:])):
            if b < a * step:
                raise ValidationError(f"lacunarity fails at j = {j}: {b}/{a} < 1 + 1/M")

    @classmethod
    def make(cls, terms: Sequence, M) -> "LacunarySequence":
        return cls(tuple(as_fraction(t) for t in terms), as_fraction(M))


@dataclass
class AvoiderCertificate:
    alpha: Fraction
    inf: Fraction
    argmin: int
    threshold: Fraction
    reference: float  # gamma / (M log M)

    def verify(self, t: LacunarySequence, targets: Optional[Sequence[Fraction]] = None) -> bool:
        return avoid_value(self.alpha, t, targets)[0] == self.inf


def avoid_value(alpha: Fraction, t: LacunarySequence, targets: Optional[Sequence[Fraction]] = None) -> Tuple[Fraction, int]:
    """(min_j ||alpha t_j - eta_j||, argmin) in exact arithmetic."""
    eta = targets or [Fraction(0)] * len(t.terms)
    vals = [nearest_int_distance(alpha * tj - e) for tj, e in zip(t.terms, eta)]
    m = min(vals)
    return m, vals.index(m)


def _nested_search(t: LacunarySequence, eta: Sequence[Fraction], delta: Fraction) -> Optional[Tuple[Fraction, Fraction]]:
    """Keep the longest piece of I cap {||alpha t_j - eta_j|| >= delta} term by term."""
    lo, hi = Fraction(0), Fraction(1)
    for tj, e in zip(t.terms, eta):
        best = None
        k0 = floor(lo * tj - e) - 1
        k1 = floor(hi * tj - e) + 1
        for k in range(k0, k1 + 1):
            a = max(lo, (k + delta + e) / tj)
            b = min(hi, (k + 1 - delta + e) / tj)
            if a <= b and (best is None or b - a > best[1] - best[0]):
                best = (a, b)
        if best is None:
            return None
        lo, hi = best
    return lo, hi


def lacunary_avoider(t: LacunarySequence, targets: Optional[Sequence] = None, resolution: int = 0, gamma: float = 1.0, steps: int = 40) -> AvoiderCertificate:
    """Dyadic alpha with min_j ||alpha t_j - eta_j|| as large as the nested search allows.

    The threshold is found by bisection over dyadic deltas; for each delta the
    search keeps, term by term, the longest surviving sub-interval. The final
    alpha is the dyadic of denominator 2^resolution closest to the middle of
    the last interval and its value is recomputed exactly.
    """
    eta = [as_fraction(e) for e in targets] if targets is not None else [Fraction(0)] * len(t.terms)
    if len(eta) != len(t.terms):
        raise ValidationError("one target per term")
    if resolution <= 0:
        resolution = max(t.terms).numerator.bit_length() + 16
    S = 1 << resolution

    def search(delta: Fraction) -> Optional[Fraction]:
        got = _nested_search(t, eta, delta)
        if got is None:
            return None
        a, b = got
        k = min(max(round((a + b) / 2 * S), -((-a.numerator * S) // a.denominator)), (b.numerator * S) // b.denominator)
        alpha = Fraction(k, S)
        return alpha if a <= alpha <= b else None

    lo_d, hi_d = Fraction(0), Fraction(1, 2)
    alpha = search(lo_d)
    if alpha is None:
        raise ResolutionTooCoarse(f"no dyadic point of resolution 2^-{resolution} survives")
    for _ in range(steps):
        mid = (lo_d + hi_d) / 2
        got = search(mid)
        if got is not None:
            lo_d, alpha = mid, got
        else:
            hi_d = mid
    inf, j = avoid_value(alpha, t, eta)
    M = float(t.M)
    return AvoiderCertificate(alpha, inf, j, lo_d, gamma / (M * math.log(M)))


# Gallagher Monte Carlo -----------------------------------------------------------

PSI_CATALOG: Dict[str, Tuple[Callable[[np.ndarray], np.ndarray], bool]] = {
    # name: (psi, sum psi(q) log q diverges)
    "q_log": (lambda q: 1.0 / (q * np.log(q)), True),
    "q_log2": (lambda q: 1.0 / (q * np.log(q) ** 2), False),
    "q_log3": (lambda q: 1.0 / (q * np.log(q) ** 3), False),
}


@dataclass
class MonteCarloReport:
    psi: str
    divergent: bool
    Ns: List[int]
    counts: List[List[int]]  # per trial, count up to each N
    medians: List[float] = field(default_factory=list)


def gallagher_montecarlo(psi: str, trials: int, Ns: Sequence[int], seed: int, scale: float = 1.0) -> MonteCarloReport:
    """Counts of q in [2, N] with ||q a|| ||q b|| <= scale * psi(q) for random (a, b)."""
    if psi not in PSI_CATALOG:
        raise ValidationError(f"unknown psi {psi!r}; choose from {sorted(PSI_CATALOG)}")
    fn, div = PSI_CATALOG[psi]
    Ns = sorted(Ns)
    q = np.arange(2, Ns[-1] + 1, dtype=np.float64)
    bound = scale * fn(q)
    children = np.random.SeedSequence(seed).spawn(trials)
    counts = []
    for ss in children:
        a, b = np.random.default_rng(ss).random(2)
        fa = np.abs(q * a - np.round(q * a))
        fb = np.abs(q * b - np.round(q * b))
        hit = np.cumsum(fa * fb <= bound)
        counts.append([int(hit[N - 2]) for N in Ns])
    med = [float(np.median([c[i] for c in counts])) for i in range(len(Ns))]
    return MonteCarloReport(psi, div, list(Ns), counts, med)
