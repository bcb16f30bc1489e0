"""Exact discrepancy of rank-one lattice point sets and related searches."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceeded, NotPrime, ValidationError
from .exact import is_prime, partial_quotients, totatives

DEFAULT_BUDGET = 10 ** 8  # grid cells


@dataclass(frozen=True)
class LatticePointSet:
    """Points (k/q, {a_2 k/q}, ..., {a_s k/q}) for 0 <= k < q."""

    q: int
    a: Tuple[int, ...]  # multipliers of the coordinates after the first

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValidationError("q must be positive")
        if not self.a:
            raise ValidationError("need at least one multiplier")

    @property
    def s(self) -> int:
        return len(self.a) + 1

    def coords(self) -> np.ndarray:
        """Integer coordinates (times q), one row per point."""
        k = np.arange(self.q, dtype=np.int64)
        return np.stack([k] + [(ai * k) % self.q for ai in self.a], axis=1)


def _d2_table(q: int, a: int) -> int:
    """q * D for s = 2 from the full count table."""
    k = np.arange(q, dtype=np.int64)
    grid = np.zeros((q, q), dtype=np.int64)
    grid[k, (a * k) % q] = 1
    c = grid.cumsum(axis=0).cumsum(axis=1)
    j = np.arange(q, dtype=np.int64)
    jl = np.outer(j, j)
    j1l1 = np.outer(j + 1, j + 1)
    qc = q * c
    return int(max((qc - jl).max(), (j1l1 - qc).max()))


def _d_slices(ps: LatticePointSet) -> int:
    """q^(s-1) * D by sweeping the first coordinate and keeping an (s-1)-dim histogram."""
    q, s = ps.q, ps.s
    shape = (q,) * (s - 1)
    hist = np.zeros(shape, dtype=np.int64)
    idx = np.arange(q, dtype=np.int64)
    # products of (l_i) and (l_i + 1) over the remaining coordinates
    P0 = np.ones(shape, dtype=np.int64)
    P1 = np.ones(shape, dtype=np.int64)
    for axis in range(s - 1):
        view = [1] * (s - 1)
        view[axis] = q
        P0 = P0 * idx.reshape(view)
        P1 = P1 * (idx + 1).reshape(view)
    scale = q ** (s - 1)
    best = 0
    for j in range(q):
        hist[tuple(int((ai * j) % q) for ai in ps.a)] += 1
        c = hist
        for axis in range(s - 1):
            c = c.cumsum(axis=axis)
        sc = scale * c
        best = max(best, int((sc - j * P0).max()), int(((j + 1) * P1 - sc).max()))
    return best


def discrepancy_scaled(ps: LatticePointSet, budget: int = DEFAULT_BUDGET) -> int:
    """q^(s-1) * D as an exact integer."""
    if ps.q ** ps.s > budget:
        raise BudgetExceeded(f"q^s = {ps.q ** ps.s} exceeds the budget {budget}")
    if ps.s == 2 and ps.q <= 1024:
        return _d2_table(ps.q, ps.a[0])
    return _d_slices(ps)


def discrepancy_exact(ps: LatticePointSet, budget: int = DEFAULT_BUDGET) -> Fraction:
    """sup over boxes [0, g_1) x ... x [0, g_s), g in (0,1)^s, of |count - q prod g_i|.

    Counts are constant on cells (j_i/q, (j_i+1)/q]; on each cell the sup is
    either the open lower-corner limit or the closed upper corner.
    """
    return Fraction(discrepancy_scaled(ps, budget), ps.q ** (ps.s - 1))


def discrepancy(a: int, q: int) -> Fraction:
    return discrepancy_exact(LatticePointSet(q, (a,)))


def discrepancy_multidim(a: Sequence[int], q: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    """Discrepancy of (k/q, {a_2 k/q}, ...); a leading multiplier 1 may be included."""
    a = tuple(a)
    if len(a) >= 2 and a[0] == 1:
        a = a[1:]
    if len(a) + 1 not in (2, 3):
        raise ValidationError("dimension must be 2 or 3")
    return discrepancy_exact(LatticePointSet(q, a), budget)


# independent oracles -------------------------------------------------------------

def corner_oracle(a: int, q: int) -> Fraction:
    """Direct point counting at every cell, without cumulative sums."""
    k = np.arange(q, dtype=np.int64)
    x, y = k, (a * k) % q
    j = np.arange(q, dtype=np.int64)
    inside = (x[:, None, None] <= j[None, :, None]) & (y[:, None, None] <= j[None, None, :])
    c = inside.sum(axis=0).astype(np.int64)
    lo = q * c - np.outer(j, j)
    hi = np.outer(j + 1, j + 1) - q * c
    return Fraction(int(max(lo.max(), hi.max())), q)


def grid_lower_bound(a: int, q: int) -> Fraction:
    """max |count - q g1 g2| over the rational grid g_i in {(j + 1)/q, j/q + 1/(4 q^3)}, g_i < 1.

    A lower bound of D within 1/q^2 of it, from direct point counting.
    """
    L = 4 * q ** 3
    k = np.arange(q, dtype=np.int64)
    X = k * (4 * q * q)
    Y = ((a * k) % q) * (4 * q * q)
    j = np.arange(q, dtype=np.int64)
    G = np.concatenate([(j + 1) * 4 * q * q, j * 4 * q * q + 1])
    G = G[G < L]
    cnt = ((X[:, None, None] < G[None, :, None]) & (Y[:, None, None] < G[None, None, :])).sum(axis=0)
    val = np.abs(cnt.astype(np.int64) * L * L - q * np.outer(G, G))
    return Fraction(int(val.max()), L * L)


# bounds and searches --------------------------------------------------------------

@dataclass
class PQSumCheck:
    a: int
    q: int
    D: Fraction
    quotient_sum: int
    ratio: Fraction


def pq_sum_bound_check(a: int, q: int) -> PQSumCheck:
    if gcd(a, q) != 1:
        raise ValidationError(f"gcd({a}, {q}) != 1")
    D = discrepancy(a, q)
    s = sum(partial_quotients(a % q, q)) if q > 1 else 1
    return PQSumCheck(a, q, D, s, D / s)


def pq_ratio_corpus(q_max: int) -> Dict[str, object]:
    """Max of D(a,q)/sum b_j over 2 <= q <= q_max and a coprime to q."""
    best = Fraction(0)
    arg = (0, 0)
    for q in range(2, q_max + 1):
        for a in totatives(q):
            r = pq_sum_bound_check(a, q).ratio
            if r > best:
                best, arg = r, (a, q)
    return {"q_max": q_max, "max_ratio": best, "argmax": arg}


@dataclass
class BestA:
    q: int
    a: int
    D: Fraction
    per_log: float
    larcher_shape: float


def best_a(q: int) -> BestA:
    """Exact argmin of D(a,q) over a coprime to q (smallest a on ties)."""
    if q < 2:
        raise ValidationError("q must be at least 2")
    best = None
    for a in totatives(q):
        d = discrepancy(a, q)
        if best is None or d < best[1]:
            best = (a, d)
    a, d = best
    phi = len(totatives(q))
    lg = math.log(q)
    shape = q / phi * lg * math.log(lg) if lg > 1 else float("nan")
    return BestA(q, a, d, float(d) / lg, shape)


def fibonacci_pairs(n_max: int) -> List[Tuple[int, int, int]]:
    """(n, F_{n-1}, F_n) for 3 <= n <= n_max with F_1 = F_2 = 1."""
    F = [0, 1, 1]
    while len(F) <= n_max:
        F.append(F[-1] + F[-2])
    return [(n, F[n - 1], F[n]) for n in range(3, n_max + 1)]


def fibonacci_discrepancy_ratios(n_max: int) -> List[Tuple[int, int, Fraction, float]]:
    out = []
    for n, a, q in fibonacci_pairs(n_max):
        D = discrepancy(a, q)
        out.append((n, q, D, float(D) / math.log(q)))
    return out


@dataclass
class SubgroupSearch:
    p: int
    subgroup_size: int
    coset: List[int]
    best: int
    witness: int
    quotients: Tuple[int, ...]
    reference: float  # 500 log p loglog p


def subgroup_cf_search(p: int, g: int, index: int, v: int = 1) -> SubgroupSearch:
    """Minimum of sum b_j(a/p) over a in the coset v <g^index> of (Z/p)^*."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if g % p == 0 or v % p == 0:
        raise ValidationError("g and v must be units mod p")
    h = pow(g, index, p)
    U = [1]
    x = h
    while x != 1:
        U.append(x)
        x = x * h % p
    coset = sorted({v * u % p for u in U})
    best = None
    for a in coset:
        qs = partial_quotients(a, p)
        s = sum(qs)
        if best is None or s < best[0]:
            best = (s, a, qs)
    lg = math.log(p)
    return SubgroupSearch(p, len(U), coset, best[0], best[1], best[2], 500 * lg * math.log(lg))


def primitive_root(p: int) -> int:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        return 1
    n, fac, d = p - 1, [], 2
    while d * d <= n:
        if n % d == 0:
            fac.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fac.append(n)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fac):
            return g
    raise ValidationError("no primitive root")
