"""Exact rationals, continued fractions and continuants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import FoldNotApplicable, NotPrime, ValidationError

Rational = Union[Fraction, int]


def as_fraction(x: Union[Rational, str]) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string to a Fraction (never via float)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                n, d = int(num), int(den)
            except ValueError as exc:
                raise ValidationError(f"malformed rational {x!r}") from exc
            if d == 0:
                raise ValidationError(f"zero denominator in {x!r}")
            return Fraction(n, d)
        try:
            return Fraction(int(text))
        except ValueError as exc:
            raise ValidationError(f"malformed rational {x!r}") from exc
    raise ValidationError(f"cannot convert {type(x).__name__} to an exact rational")


@dataclass(frozen=True)
class ContinuedFraction:
    b0: int
    quotients: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(b < 1 for b in self.quotients):
            raise ValidationError("partial quotients must be positive")

    def canonical(self) -> "ContinuedFraction":
        """Fold a trailing quotient 1 into its predecessor."""
        qs = self.quotients
        if len(qs) >= 2 and qs[-1] == 1:
            return ContinuedFraction(self.b0, qs[:-2] + (qs[-2] + 1,))
        if len(qs) == 1 and qs[0] == 1:
            return ContinuedFraction(self.b0 + 1, ())
        return self

    def is_canonical(self) -> bool:
        return not self.quotients or self.quotients[-1] >= 2

    def __str__(self) -> str:
        if not self.quotients:
            return f"[{self.b0}]"
        return f"[{self.b0};" + ",".join(map(str, self.quotients)) + "]"


def cf_expand(x: Rational) -> ContinuedFraction:
    """Euclidean expansion in canonical form (last quotient at least 2)."""
    x = as_fraction(x)
    p, q = x.numerator, x.denominator
    b0 = p // q
    p -= b0 * q
    quotients: List[int] = []
    while p:
        p, q = q, p
        b, r = divmod(p, q)
        quotients.append(b)
        p = r
    return ContinuedFraction(b0, tuple(quotients))


def partial_quotients(a: int, q: int) -> Tuple[int, ...]:
    """Quotients of a/q for 0 < a < q (canonical)."""
    out = []
    while a:
        b, r = divmod(q, a)
        out.append(b)
        q, a = a, r
    return tuple(out)


def convergents(b0: int, quotients: Iterable[int]):
    """Yield (p_j, q_j) for the prefixes [b0; b1..bj], starting with j = 0."""
    p_prev, p = 1, b0
    q_prev, q = 0, 1
    yield p, q
    for b in quotients:
        p_prev, p = p, b * p + p_prev
        q_prev, q = q, b * q + q_prev
        yield p, q


def cf_value(cf: ContinuedFraction) -> Fraction:
    p = q = None
    for p, q in convergents(cf.b0, cf.quotients):
        pass
    return Fraction(p, q)


def continuant(b: Sequence[int]) -> int:
    """<b1..bs> with <> = 1; equals the denominator of [0; b1..bs]."""
    prev, cur = 0, 1
    for x in b:
        prev, cur = cur, x * cur + prev
    return cur


def fold(cf: ContinuedFraction, X: int) -> Tuple[int, ...]:
    """Folded quotient sequence (b, X, 1, c1-1, c2..cs) with c the reversal of b.

    Its continuant equals q * <1, c1-1, c2..cs> * (X+1).
    """
    if cf.b0 != 0 or not cf.quotients:
        raise ValidationError("fold needs the expansion of a fraction in (0,1)")
    if X < 1:
        raise ValidationError("X must be a positive integer")
    b = cf.quotients
    c = b[::-1]
    if c[0] == 1:
        raise FoldNotApplicable("reversed sequence starts with 1")
    return b + (X, 1, c[0] - 1) + c[1:]


def fold_identity_rhs(b: Sequence[int], X: int) -> int:
    c = tuple(b)[::-1]
    return continuant(b) * continuant((1, c[0] - 1) + c[1:]) * (X + 1)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_norm(n: int, p: int) -> Fraction:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n == 0:
        return Fraction(0)
    return Fraction(1, p ** valuation(abs(n), p))


@dataclass(frozen=True)
class SemiregularCF:
    quotients: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b < 2 for b in self.quotients):
            raise ValidationError("semiregular quotients must be at least 2")


def semiregular_value(cf: SemiregularCF) -> Fraction:
    """1 - 1/(b1 - 1/(b2 - ...)); the empty tower is 1."""
    tail = None
    for b in reversed(cf.quotients):
        tail = Fraction(b) if tail is None else b - 1 / tail
    return Fraction(1) if tail is None else 1 - 1 / tail


def modinv(a: int, q: int) -> int:
    return pow(a, -1, q)


def totatives(q: int) -> List[int]:
    return [a for a in range(1, q) if gcd(a, q) == 1]


def nearest_int_distance(x: Fraction) -> Fraction:
    f = x - floor(x)
    return min(f, 1 - f)
