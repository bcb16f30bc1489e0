"""Rationals with bounded partial quotients: enumeration, coverage, counts and searches.

Convention: a reduced fraction a/q in (0,1) is k-bounded when one of its two
expansions has every partial quotient <= k, i.e. its canonical expansion
(b_1..b_s) has b_j <= k for j < s and b_s <= k + 1. Every fraction is
enumerated once, through its canonical expansion. For coverage q = 1 counts
as covered (0/1, empty expansion), while N_k(1) = 0 because (0,1) is open.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import TooFewPoints, ValidationError
from .exact import (
    ContinuedFraction,
    cf_expand,
    continuant,
    fold,
    fold_identity_rhs,
    modinv,
    partial_quotients,
)

CONVENTION = "fractions in (0,1); k-bounded if either expansion has all quotients <= k; q = 1 covered by 0/1"


def is_k_bounded(quotients: Sequence[int], k: int) -> bool:
    """True if the canonical quotient sequence or its twin ending in 1 is bounded by k."""
    if not quotients:
        return True
    *head, last = quotients
    return all(b <= k for b in head) and (last <= k or last == k + 1)


def _check_k(k: int) -> None:
    if k < 1:
        raise ValidationError("k must be at least 1")


def enumerate_bounded(k: int, N: int) -> Iterator[Tuple[int, int, Tuple[int, ...]]]:
    """Yield (a, q, canonical quotients) for every k-bounded a/q in (0,1) with q <= N.

    Depth-first traversal of the continuant tree, pruned once a continuant
    exceeds N.
    """
    _check_k(k)
    if N < 1:
        raise ValidationError("N must be positive")
    # state: quotients so far, (q_prev, q), (a_prev, a)
    stack = [((), 0, 1, 1, 0)]
    while stack:
        seq, qp, q, ap, a = stack.pop()
        for b in range(2, k + 2):
            qn = b * q + qp
            if qn > N:
                break
            yield b * a + ap, qn, seq + (b,)
        for b in range(k, 0, -1):
            qn = b * q + qp
            if qn <= N:
                stack.append((seq + (b,), q, qn, a, b * a + ap))


def bounded_by_filter(k: int, q: int) -> List[int]:
    """Numerators a coprime to q whose expansion is k-bounded, by direct expansion."""
    return [a for a in range(1, q) if gcd(a, q) == 1 and is_k_bounded(partial_quotients(a, q), k)]


def _level_counts(k: int, N: int) -> np.ndarray:
    """counts[q] = N_k(q) for q <= N via level-by-level expansion of the continuant tree."""
    counts = np.zeros(N + 1, dtype=np.int64)
    qp = np.array([0], dtype=np.int64)
    q = np.array([1], dtype=np.int64)
    while q.size:
        for b in range(2, k + 2):
            qn = b * q + qp
            qn = qn[qn <= N]
            counts += np.bincount(qn, minlength=N + 1)
        nq, nqp = [], []
        for b in range(1, k + 1):
            qn = b * q + qp
            keep = qn <= N
            nq.append(qn[keep])
            nqp.append(q[keep])
        q = np.concatenate(nq)
        qp = np.concatenate(nqp)
    return counts


@dataclass
class CoverageSet:
    k: int
    N: int
    bitmap: np.ndarray  # bool, index q (index 0 unused)

    @property
    def covered(self) -> int:
        return int(self.bitmap[1:].sum())

    @property
    def density(self) -> float:
        return self.covered / self.N

    def exceptions(self) -> List[int]:
        return [int(q) for q in np.nonzero(~self.bitmap[1:])[0] + 1]

    MAGIC = b"ZC"

    def save(self, path) -> None:
        """8-byte header: magic 'ZC', k as uint16, N as uint32 (little endian); then packed bits."""
        with open(path, "wb") as fh:
            fh.write(self.MAGIC + struct.pack("<HI", self.k, self.N))
            fh.write(np.packbits(self.bitmap[1:]).tobytes())

    @classmethod
    def load(cls, path) -> "CoverageSet":
        raw = Path(path).read_bytes()
        if raw[:2] != cls.MAGIC:
            raise ValidationError("not a coverage bitmap")
        k, N = struct.unpack("<HI", raw[2:8])
        bits = np.unpackbits(np.frombuffer(raw[8:], dtype=np.uint8))[:N].astype(bool)
        return cls(k, N, np.concatenate(([False], bits)))


def coverage(k: int, N: int, shards: int = 1) -> CoverageSet:
    """Z_k(N) as a bitmap. ``shards`` splits the tree by first quotient and ORs the parts."""
    _check_k(k)
    parts = [_coverage_shard(k, N, s, shards) for s in range(shards)]
    bm = np.zeros(N + 1, dtype=bool)
    for p in parts:
        bm |= p
    bm[1] = True  # 0/1
    return CoverageSet(k, N, bm)


def _coverage_shard(k: int, N: int, shard: int, shards: int) -> np.ndarray:
    counts = np.zeros(N + 1, dtype=bool)
    # first quotient b1 decides the shard; a single-quotient sequence (b1) has q = b1
    for b1 in range(1, k + 2):
        if (b1 - 1) % shards != shard:
            continue
        if 2 <= b1 <= N:
            counts[b1] = True
        if b1 > k:
            continue
        qp = np.array([1], dtype=np.int64)
        q = np.array([b1], dtype=np.int64)
        while q.size:
            for b in range(2, k + 2):
                qn = b * q + qp
                counts[qn[qn <= N]] = True
            nq, nqp = [], []
            for b in range(1, k + 1):
                qn = b * q + qp
                keep = qn <= N
                nq.append(qn[keep])
                nqp.append(q[keep])
            q = np.concatenate(nq)
            qp = np.concatenate(nqp)
    return counts


@dataclass
class CountTable:
    k: int
    Q: int
    counts: np.ndarray  # counts[q] = N_k(q)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.counts)


def N_k_counts(k: int, Q: int) -> CountTable:
    _check_k(k)
    return CountTable(k, Q, _level_counts(k, Q))


@dataclass
class HensleyFit:
    k: int
    grid: List[int]
    slope: float
    intercept: float
    asymptotic: float


def hensley_asymptotic(k: int) -> float:
    """2 (1 - 6/(pi^2 k) - 72 log k/(pi^4 k^2)); asymptotic in k only."""
    return 2 * (1 - 6 / (math.pi ** 2 * k) - 72 * math.log(k) / (math.pi ** 4 * k * k))


def hensley_fit(k: int, grid: Sequence[int], table: Optional[CountTable] = None) -> HensleyFit:
    """Least-squares slope of log sum_{q <= Q} N_k(q) against log Q."""
    if len(grid) < 4:
        raise TooFewPoints(f"{len(grid)} grid points, need 4")
    grid = sorted(grid)
    if table is None or table.Q < grid[-1]:
        table = N_k_counts(k, grid[-1])
    cum = table.cumulative()
    xs = np.log(np.array(grid, dtype=float))
    ys = np.log(np.array([cum[Q] for Q in grid], dtype=float))
    slope, icpt = np.polyfit(xs, ys, 1)
    return HensleyFit(k, list(grid), float(slope), float(icpt), hensley_asymptotic(k))


def B_membership(a: int, q: int, k: int, T: int) -> bool:
    """All quotients in prefixes of the canonical expansion with continuant <= T are <= k."""
    if gcd(a, q) != 1:
        raise ValidationError(f"gcd({a}, {q}) != 1")
    prev, cur = 0, 1
    for b in partial_quotients(a % q, q):
        prev, cur = cur, b * cur + prev
        if cur > T:
            return True
        if b > k:
            return False
    return True


def B_set(q: int, k: int, T: int) -> List[int]:
    return [x for x in range(1, q) if gcd(x, q) == 1 and B_membership(x, q, k, T)]


@dataclass
class HyperbolaResult:
    q: int
    lam: int
    witnesses: List[Tuple[int, int]]
    checked: int

    @property
    def found(self) -> bool:
        return bool(self.witnesses)


def hyperbola_search(q: int, lam: int, k: int, T1: int, T2: int, first_only: bool = False) -> HyperbolaResult:
    """Pairs x1 x2 = lam (mod q) with x1/q in B(k,T1) and x2/q in B(k,T2)."""
    if gcd(lam, q) != 1:
        raise ValidationError("lambda must be coprime to q")
    B1 = B_set(q, k, T1)
    B2 = set(B_set(q, k, T2))
    out = []
    for x1 in B1:
        x2 = lam * modinv(x1, q) % q
        if x2 in B2:
            out.append((x1, x2))
            if first_only:
                break
    return HyperbolaResult(q, lam, out, len(B1))


@dataclass
class KorobovStats:
    q: int
    min_max: int
    argmin: int
    histogram: Dict[int, int]

    def tail(self, T: int) -> float:
        """Proportion of numerators whose largest quotient is >= T."""
        tot = sum(self.histogram.values())
        return sum(c for m, c in self.histogram.items() if m >= T) / tot


def korobov_stat(q: int) -> KorobovStats:
    if q < 2:
        raise ValidationError("q must be at least 2")
    hist: Dict[int, int] = {}
    best, arg = None, None
    for a in range(1, q):
        if gcd(a, q) != 1:
            continue
        m = max(partial_quotients(a, q))
        hist[m] = hist.get(m, 0) + 1
        if best is None or m < best:
            best, arg = m, a
    return KorobovStats(q, best, arg, dict(sorted(hist.items())))


@dataclass
class FoldStep:
    a: int
    q: int
    X: int
    max_quotient: int
    quotients: Tuple[int, ...]
    identity_ok: bool


def folding_construct(seed: Tuple[int, int], k_target: int, steps: int, allowed_X: Optional[Sequence[int]] = None) -> List[FoldStep]:
    """Iterate fold from the seed a/q, choosing the smallest allowed X that keeps all quotients <= k_target.

    Each folded sequence is brought back to canonical form before the next
    fold. The chain stops early if no allowed X keeps the bound.
    """
    a, q = seed
    cf = cf_expand(Fraction(a, q))
    if max(cf.quotients, default=0) > k_target:
        raise ValidationError("seed already exceeds the quotient bound")
    xs = list(allowed_X) if allowed_X is not None else list(range(1, k_target + 1))
    chain = [FoldStep(a, q, 0, max(cf.quotients), cf.quotients, True)]
    for _ in range(steps):
        done = False
        for X in xs:
            seq = fold(cf, X)
            canon = ContinuedFraction(0, seq).canonical()
            if max(canon.quotients) <= k_target:
                qn = continuant(seq)
                an = continuant(seq[1:])
                ok = qn == fold_identity_rhs(cf.quotients, X)
                chain.append(FoldStep(an, qn, X, max(canon.quotients), canon.quotients, ok))
                cf = canon
                done = True
                break
        if not done:
            break
    return chain


def power_coverage(base: int, k: int, max_exp: int) -> Dict[int, int]:
    """Smallest largest-quotient over numerators for q = base^j, j = 1..max_exp."""
    return {base ** j: korobov_stat(base ** j).min_max for j in range(1, max_exp + 1)}


@dataclass(frozen=True)
class MissingDigitSet:
    s: int
    digits: Tuple[int, ...]

    def __post_init__(self) -> None:
        d = sorted(set(self.digits))
        if d[0] != 0:
            raise ValidationError("digit set must contain 0")
        if any(x < 0 or x >= self.s for x in d):
            raise ValidationError("digits must lie in [0, s)")
        nz = d[1:]
        if not 1 <= len(nz) <= self.s - 2:
            raise ValidationError("need 1 <= k <= s - 2 nonzero digits")
        g = 0
        for x in nz:
            g = gcd(g, x)
        if g != 1:
            raise ValidationError("nonzero digits must have gcd 1")

    def elements(self, N: int) -> List[int]:
        """Positive integers <= N whose base-s digits all lie in the set, increasing."""
        nz = sorted(set(self.digits))
        out = [d for d in nz if 0 < d <= N]
        frontier = list(out)
        while frontier:
            nxt = []
            for x in frontier:
                for d in nz:
                    y = x * self.s + d
                    if y <= N:
                        nxt.append(y)
            out.extend(nxt)
            frontier = nxt
        return sorted(out)


def missing_digit_products(K: MissingDigitSet, N: int, q: int, lam: int, first_only: bool = True) -> List[Tuple[int, int]]:
    """Pairs (x1, x2) from K(N) with x1 x2 = lam (mod q)."""
    if gcd(lam, q) != 1:
        raise ValidationError("lambda must be coprime to q")
    els = K.elements(N)
    by_res: Dict[int, int] = {}
    for x in els:
        by_res.setdefault(x % q, x)
    out = []
    for x1 in els:
        if gcd(x1, q) != 1:
            continue
        r = lam * modinv(x1 % q, q) % q
        if r in by_res:
            out.append((x1, by_res[r]))
            if first_only:
                break
    return out


def residue_coverage(K: MissingDigitSet, q: int, N: Optional[int] = None) -> float:
    """Fraction of residues mod q hit by K(N), default N = q^3."""
    els = K.elements(q ** 3 if N is None else N)
    return len({x % q for x in els}) / q
