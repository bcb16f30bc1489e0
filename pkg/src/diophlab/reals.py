"""Certified real numbers: rational intervals, oracles, quadratic surds, polynomial roots."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd, isqrt
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import InvalidSurd, NoSignChange, PrecisionExhausted, ValidationError
from .exact import as_fraction, convergents

Number = Union[int, Fraction]

MAX_BITS = 1 << 14


def _floor_div(n: int, d: int) -> int:
    return n // d


def _ceil_div(n: int, d: int) -> int:
    return -((-n) // d)


@dataclass(frozen=True)
class Interval:
    """Closed rational interval [lo, hi]."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValidationError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Number) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Number) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: Union["Interval", Number]) -> "Interval":
        o = _iv(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: Union["Interval", Number]) -> "Interval":
        return self + (-_iv(other))

    def __rsub__(self, other: Number) -> "Interval":
        return _iv(other) - self

    def __mul__(self, other: Union["Interval", Number]) -> "Interval":
        o = _iv(other)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(c), max(c))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise PrecisionExhausted("interval reciprocal straddles zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other: Union["Interval", Number]) -> "Interval":
        return self * _iv(other).reciprocal()

    def __rtruediv__(self, other: Number) -> "Interval":
        return _iv(other) * self.reciprocal()

    def square(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo ** 2, self.hi ** 2)
        if self.hi <= 0:
            return Interval(self.hi ** 2, self.lo ** 2)
        return Interval(Fraction(0), max(self.lo ** 2, self.hi ** 2))

    def __pow__(self, k: int) -> "Interval":
        if k < 0:
            return (self ** (-k)).reciprocal()
        if k % 2 == 0:
            return self.square() ** (k // 2) if k else Interval.point(1)
        out = Interval.point(1)
        for _ in range(k):
            out = out * self
        return out

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def round_out(self, bits: int) -> "Interval":
        """Widen to dyadic endpoints with denominator 2^bits."""
        s = 1 << bits
        lo = Fraction(floor(self.lo * s), s)
        hi = Fraction(-floor(-self.hi * s), s)
        return Interval(lo, hi)

    def certainly_lt(self, other: Union["Interval", Number]) -> bool:
        return self.hi < _iv(other).lo

    def certainly_le(self, other: Union["Interval", Number]) -> bool:
        return self.hi <= _iv(other).lo

    def __str__(self) -> str:
        if self.is_point():
            return str(self.lo)
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def _iv(x: Union[Interval, Number]) -> Interval:
    return x if isinstance(x, Interval) else Interval.point(x)


def sqrt_interval(x: Union[Interval, Number], bits: int) -> Interval:
    """Enclosure of sqrt over a non-negative interval, dyadic endpoints at 2^-bits."""
    x = _iv(x)
    if x.lo < 0:
        raise ValidationError("square root of a negative interval")
    s = 1 << bits
    lo_n = floor(x.lo * s * s)
    hi_n = -floor(-x.hi * s * s)
    lo = isqrt(lo_n)
    hi = isqrt(hi_n)
    if hi * hi < hi_n:
        hi += 1
    return Interval(Fraction(lo, s), Fraction(hi, s))


def nearest_int_distance_interval(x: Interval) -> Interval:
    """Enclosure of ||t|| for t in x."""
    half = Fraction(1, 2)

    def d(t: Fraction) -> Fraction:
        f = t - floor(t)
        return min(f, 1 - f)

    if x.width >= 1:
        return Interval(Fraction(0), half)
    has_int = floor(x.hi) >= x.lo
    has_half = floor(x.hi - half) >= x.lo - half
    lo = Fraction(0) if has_int else min(d(x.lo), d(x.hi))
    hi = half if has_half else max(d(x.lo), d(x.hi))
    return Interval(lo, hi)


class RealOracle:
    """A real number that can be enclosed to any requested precision."""

    def enclose(self, bits: int) -> Interval:
        raise NotImplementedError

    def exact(self) -> Optional[Fraction]:
        return None

    def fixed(self, bits: int) -> Tuple[int, int]:
        """Integers lo <= x*2^bits <= hi with hi - lo <= 2."""
        iv = self.enclose(bits + 1)
        s = 1 << bits
        return floor(iv.lo * s), -floor(-iv.hi * s)

    def describe(self) -> str:
        return type(self).__name__

    def __float__(self) -> float:
        return float(self.enclose(60).mid)


class RationalOracle(RealOracle):
    def __init__(self, value: Number) -> None:
        self.value = as_fraction(value)

    def enclose(self, bits: int) -> Interval:
        return Interval.point(self.value)

    def exact(self) -> Fraction:
        return self.value

    def fixed(self, bits: int) -> Tuple[int, int]:
        v = self.value * (1 << bits)
        return floor(v), -floor(-v)

    def describe(self) -> str:
        return str(self.value)


def _sign_plus_sqrt(A: int, D: int) -> int:
    """Sign of A + sqrt(D) for non-square D > 0."""
    if A >= 0:
        return 1
    return 1 if D > A * A else -1


def _surd_floor(P: int, D: int, Q: int) -> int:
    """floor((P + sqrt D)/Q) exactly."""
    n = (P + isqrt(D)) // Q
    while True:
        # x/Q >= n  <=>  sign(P - nQ + sqrt D) has the sign of Q (or is zero, impossible)
        if _sign_plus_sqrt(P - n * Q, D) * (1 if Q > 0 else -1) < 0:
            n -= 1
            continue
        if _sign_plus_sqrt(P - (n + 1) * Q, D) * (1 if Q > 0 else -1) > 0:
            n += 1
            continue
        return n


@dataclass(frozen=True)
class SurdExpansion:
    b0: int
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]

    def quotients(self) -> Iterator[int]:
        """Partial quotients b1, b2, ... (infinite)."""
        yield from self.preperiod
        while True:
            yield from self.period


def surd_cf_stream(P: int, D: int, Q: int) -> SurdExpansion:
    """Periodic expansion of (P + sqrt D)/Q; requires D non-square and Q | D - P^2."""
    if D <= 0 or isqrt(D) ** 2 == D:
        raise InvalidSurd(f"D = {D} must be a positive non-square")
    if Q == 0 or (D - P * P) % Q != 0:
        raise InvalidSurd(f"Q = {Q} must divide D - P^2 = {D - P * P}")
    seen = {}
    terms: List[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(terms)
        a = _surd_floor(P, D, Q)
        terms.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    start = seen[(P, Q)]
    # terms[0] is the integer part; the period never includes it unless start == 0
    if start == 0:
        b0 = terms[0]
        period = tuple(terms[1:]) + (terms[0],)
        return SurdExpansion(b0, (), period)
    return SurdExpansion(terms[0], tuple(terms[1:start]), tuple(terms[start:]))


class SurdOracle(RealOracle):
    """(P + sqrt D)/Q handled exactly."""

    def __init__(self, P: int, D: int, Q: int = 1) -> None:
        if D <= 0 or isqrt(D) ** 2 == D:
            raise InvalidSurd(f"D = {D} must be a positive non-square")
        if Q == 0:
            raise InvalidSurd("Q must be nonzero")
        self.P, self.D, self.Q = P, D, Q

    def expansion(self) -> SurdExpansion:
        P, D, Q = self.P, self.D, self.Q
        if (D - P * P) % Q != 0:
            # rescale so the divisibility condition holds; the value is unchanged
            P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
        return surd_cf_stream(P, D, Q)

    def enclose(self, bits: int) -> Interval:
        lo, hi = self.fixed(bits)
        s = 1 << bits
        return Interval(Fraction(lo, s), Fraction(hi, s))

    def fixed(self, bits: int) -> Tuple[int, int]:
        s = 1 << bits
        r = isqrt(self.D * s * s)  # r <= sqrt(D) * s < r + 1
        n_lo, n_hi = self.P * s + r, self.P * s + r + 1
        if self.Q > 0:
            return _floor_div(n_lo, self.Q), _ceil_div(n_hi, self.Q)
        return _floor_div(n_hi, self.Q), _ceil_div(n_lo, self.Q)

    def describe(self) -> str:
        if self.P == 0 and self.Q == 1:
            return f"sqrt({self.D})"
        return f"({self.P}+sqrt({self.D}))/{self.Q}"


class CFStreamOracle(RealOracle):
    """Irrational number given by an infinite partial-quotient stream."""

    def __init__(self, b0: int, make_stream: Callable[[], Iterator[int]], label: str = "cf") -> None:
        self.b0 = b0
        self.make_stream = make_stream
        self.label = label

    def quotients(self) -> Iterator[int]:
        return self.make_stream()

    def enclose(self, bits: int) -> Interval:
        target = Fraction(1, 1 << bits)
        prev = None
        for count, (p, q) in enumerate(convergents(self.b0, self.make_stream())):
            if prev is not None:
                pp, pq = prev
                if Fraction(1, q * pq) <= target:
                    a, b = Fraction(pp, pq), Fraction(p, q)
                    return Interval(min(a, b), max(a, b))
            prev = (p, q)
            if count > 64 * bits + 64:
                break
        raise PrecisionExhausted("quotient stream too short for the requested precision")

    def describe(self) -> str:
        return self.label


def poly_eval(coeffs: Sequence[Number], x: Number) -> Fraction:
    """Horner evaluation; coeffs are highest degree first."""
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_eval_interval(coeffs: Sequence[Number], x: Interval) -> Interval:
    acc = Interval.point(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _trim(p: List[Fraction]) -> List[Fraction]:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _poly_rem(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a = a[1:]
    return _trim(a) if a else [Fraction(0)]


def sturm_sequence(coeffs: Sequence[Number]) -> List[List[Fraction]]:
    p0 = _trim([Fraction(c) for c in coeffs])
    n = len(p0) - 1
    p1 = _trim([p0[i] * (n - i) for i in range(n)]) if n > 0 else [Fraction(0)]
    seq = [p0, p1]
    while len(seq[-1]) > 1 or seq[-1][0] != 0:
        r = _poly_rem(seq[-2], seq[-1])
        if len(r) == 1 and r[0] == 0:
            break
        seq.append([-c for c in r])
        if len(r) == 1:
            break
    return seq


def _sign_changes(seq: List[List[Fraction]], x: Fraction) -> int:
    signs = [s for s in (poly_eval(p, x) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(coeffs: Sequence[Number], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b] (Sturm)."""
    seq = sturm_sequence(coeffs)
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def cauchy_bound(coeffs: Sequence[Number]) -> Fraction:
    c = _trim([Fraction(x) for x in coeffs])
    return 1 + max((abs(x / c[0]) for x in c[1:]), default=Fraction(0))


@dataclass
class PolyRootSpec:
    coeffs: Tuple[Fraction, ...]
    bracket: Tuple[Fraction, Fraction]
    target: str = "largest"  # or "unique"


def bisect_root(coeffs: Sequence[Number], lo: Fraction, hi: Fraction, bits: int) -> Interval:
    """Shrink a sign-change bracket to width <= 2^-bits."""
    lo, hi = Fraction(lo), Fraction(hi)
    flo, fhi = poly_eval(coeffs, lo), poly_eval(coeffs, hi)
    if flo == 0:
        return Interval.point(lo)
    if fhi == 0:
        return Interval.point(hi)
    if (flo > 0) == (fhi > 0):
        raise NoSignChange(f"no sign change on [{lo}, {hi}]")
    target = Fraction(1, 1 << bits)
    # snap to dyadic endpoints first so the numbers stay small
    while hi - lo > target:
        mid = (lo + hi) / 2
        den = 1
        while Fraction(floor(mid * den), den) <= lo:
            den *= 2
        mid = Fraction(floor(mid * den), den)
        fm = poly_eval(coeffs, mid)
        if fm == 0:
            return Interval.point(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return Interval(lo, hi)


def root(spec: PolyRootSpec, bits: int) -> Interval:
    """Certified enclosure of the target root of a polynomial.

    For target 'largest' the absence of roots to the right of the enclosure
    is certified with a Sturm count up to the Cauchy bound.
    """
    lo, hi = (Fraction(x) for x in spec.bracket)
    iv = bisect_root(spec.coeffs, lo, hi, bits)
    if spec.target == "largest":
        bound = cauchy_bound(spec.coeffs)
        if iv.hi < bound and count_roots(spec.coeffs, iv.hi, bound) != 0:
            raise NoSignChange("bracket does not contain the largest real root")
    elif spec.target == "unique":
        bound = cauchy_bound(spec.coeffs)
        if count_roots(spec.coeffs, -bound, bound) != 1:
            raise NoSignChange("polynomial does not have a unique real root")
    return iv


def largest_root(coeffs: Sequence[Number], bits: int) -> Interval:
    """Largest real root, bracket found automatically from the Cauchy bound."""
    c = [Fraction(x) for x in coeffs]
    bound = cauchy_bound(c)
    if count_roots(c, -bound, bound) == 0:
        raise NoSignChange("no real roots")
    lo, hi = -bound, bound
    # bisect on root counts until the top root is isolated
    while count_roots(c, lo, hi) > 1 or hi - lo > 1:
        mid = (lo + hi) / 2
        if count_roots(c, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    if poly_eval(c, hi) == 0:
        return Interval.point(hi)
    if poly_eval(c, lo) == 0 or (poly_eval(c, lo) > 0) == (poly_eval(c, hi) > 0):
        # even multiplicity root: shrink on counts only
        target = Fraction(1, 1 << bits)
        while hi - lo > target:
            mid = (lo + hi) / 2
            if count_roots(c, mid, hi) >= 1:
                lo = mid
            else:
                hi = mid
        return Interval(lo, hi)
    return bisect_root(c, lo, hi, bits)


class PolyRootOracle(RealOracle):
    """A real root of an integer polynomial isolated in a bracket."""

    def __init__(self, coeffs: Sequence[Number], bracket: Tuple[Number, Number], label: str = "root") -> None:
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        lo, hi = Fraction(bracket[0]), Fraction(bracket[1])
        seq_count = count_roots(self.coeffs, lo, hi)
        if seq_count != 1 and poly_eval(self.coeffs, lo) != 0:
            raise NoSignChange(f"bracket [{lo}, {hi}] isolates {seq_count} roots")
        self._iv = Interval(lo, hi)
        self.label = label

    def enclose(self, bits: int) -> Interval:
        target = Fraction(1, 1 << bits)
        if self._iv.width > target:
            self._iv = bisect_root(self.coeffs, self._iv.lo, self._iv.hi, bits + 8)
        return self._iv

    def describe(self) -> str:
        return self.label


class ExprOracle(RealOracle):
    """Real number computed by interval arithmetic from other oracles."""

    def __init__(self, fn: Callable[[int], Interval], label: str = "expr", max_bits: int = MAX_BITS) -> None:
        self.fn = fn
        self.label = label
        self.max_bits = max_bits

    def enclose(self, bits: int) -> Interval:
        work = bits + 8
        while work <= self.max_bits:
            iv = self.fn(work)
            if iv.width <= Fraction(1, 1 << bits):
                return iv
            work *= 2
        raise PrecisionExhausted(f"{self.label}: cannot reach {bits} bits")

    def describe(self) -> str:
        return self.label


def poly_in(oracle: RealOracle, coeffs: Sequence[Number], label: str = "poly") -> ExprOracle:
    """The oracle for coeffs(oracle), coeffs highest degree first."""
    return ExprOracle(lambda b: poly_eval_interval(coeffs, oracle.enclose(b)), label)


def dist_to_int(x: Union[RealOracle, Number], q: int, precision: int) -> Interval:
    """Enclosure of ||q x|| of width <= 2^-precision (exact for rationals)."""
    if q < 1:
        raise ValidationError("q must be positive")
    if not isinstance(x, RealOracle):
        x = RationalOracle(x)
    ex = x.exact()
    if ex is not None:
        v = q * ex
        f = v - floor(v)
        return Interval.point(min(f, 1 - f))
    iv = x.enclose(precision + q.bit_length())
    return nearest_int_distance_interval(q * iv)


def compare(a: Union[RealOracle, Number], b: Union[RealOracle, Number], budget: int = 1024) -> int:
    """Sign of a - b; raises PrecisionExhausted if undecided at the budget."""
    ao = a if isinstance(a, RealOracle) else RationalOracle(a)
    bo = b if isinstance(b, RealOracle) else RationalOracle(b)
    ea, eb = ao.exact(), bo.exact()
    if ea is not None and eb is not None:
        return (ea > eb) - (ea < eb)
    bits = 32
    while bits <= budget:
        ia, ib = ao.enclose(bits), bo.enclose(bits)
        if ia.hi < ib.lo:
            return -1
        if ia.lo > ib.hi:
            return 1
        bits *= 2
    raise PrecisionExhausted("comparison undecided at the precision budget")


# common constants ---------------------------------------------------------

def golden() -> SurdOracle:
    return SurdOracle(1, 5, 2)


def sqrt_oracle(D: int) -> SurdOracle:
    return SurdOracle(0, D, 1)


def gcd3(a: int, b: int, c: int) -> int:
    return gcd(gcd(a, b), c)


def log_interval(x: Union[Interval, Number], bits: int) -> Interval:
    """Enclosure of log over a positive interval via the atanh series with a tail bound."""
    x = _iv(x)
    if x.lo <= 0:
        raise ValidationError("log of a non-positive interval")
    return Interval(_log_point(x.lo, bits, lower=True), _log_point(x.hi, bits, lower=False))


def _log_point(x: Fraction, bits: int, lower: bool) -> Fraction:
    # reduce by powers of two so the series argument stays small
    k = 0
    while x > Fraction(3, 2):
        x /= 2
        k += 1
    while x < Fraction(3, 4):
        x *= 2
        k -= 1
    s = _atanh_log(x, bits + 8)
    l2 = _atanh_log(Fraction(2), bits + 8 + abs(k).bit_length())
    iv = s + k * l2
    return iv.lo if lower else iv.hi


_LOG_CACHE: dict = {}


def _atanh_log(x: Fraction, bits: int) -> Interval:
    key = (x, bits)
    if key in _LOG_CACHE:
        return _LOG_CACHE[key]
    y = (x - 1) / (x + 1)
    y2 = y * y
    target = Fraction(1, 1 << (bits + 2))
    total = Fraction(0)
    term = y
    k = 0
    while True:
        total += term / (2 * k + 1)
        term *= y2
        k += 1
        tail = abs(term) / ((2 * k + 1) * (1 - y2))
        if tail <= target:
            break
    total *= 2
    tail *= 2
    iv = Interval(total - tail, total + tail).round_out(bits + 2)
    _LOG_CACHE[key] = iv
    return iv


def nth_root_interval(x: Union[Interval, Number], n: int, bits: int) -> Interval:
    """Enclosure of x^(1/n) for a non-negative interval."""
    x = _iv(x)
    if x.lo < 0:
        raise ValidationError("root of a negative interval")

    def down(v: Fraction) -> Fraction:
        s = 1 << bits
        lo, hi = 0, max(1, int(v) + 1) * s
        # largest integer r with (r/s)^n <= v
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if Fraction(mid, s) ** n <= v:
                lo = mid
            else:
                hi = mid - 1
        return Fraction(lo, s)

    lo = down(x.lo)
    hi = down(x.hi)
    if hi ** n < x.hi:
        hi += Fraction(1, 1 << bits)
    return Interval(lo, hi)
