"""Closed-form exponent bounds, inequality checkers and named constants.

Bounds involving a single square root are returned as exact ``Quad`` values
(a + b*sqrt(c) with rational a, b, c) so comparisons are decided without
rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Tuple, Union

from .errors import OutOfRange, PrecisionExhausted
from .exact import as_fraction
from .reals import (
    Interval,
    PolyRootSpec,
    largest_root,
    log_interval,
    nth_root_interval,
    poly_eval,
    root,
    sqrt_interval,
)

Number = Union[int, Fraction]


def _rational_sqrt(c: Fraction) -> Optional[Fraction]:
    if c < 0:
        return None
    n, d = c.numerator, c.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class Quad:
    """a + b*sqrt(c), c >= 0, all rational."""

    a: Fraction
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)

    @classmethod
    def make(cls, a: Number, b: Number = 0, c: Number = 0) -> "Quad":
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
        if c < 0:
            raise OutOfRange("negative radicand")
        r = _rational_sqrt(c)
        if r is not None:
            return cls(a + b * r)
        if b == 0:
            return cls(a)
        return cls(a, b, c)

    def is_rational(self) -> bool:
        return self.b == 0

    def sign(self) -> int:
        a, b, c = self.a, self.b, self.c
        if b == 0 or c == 0:
            return (a > 0) - (a < 0)
        sb = 1 if b > 0 else -1
        if a == 0 or (a > 0) == (b > 0):
            return sb if a == 0 else (1 if a > 0 else -1)
        lhs, rhs = a * a, b * b * c
        if lhs > rhs:
            return 1 if a > 0 else -1
        if lhs < rhs:
            return sb
        return 0

    def __sub__(self, other: Union["Quad", Number]) -> "Quad":
        if isinstance(other, Quad):
            if other.b == 0:
                return Quad(self.a - other.a, self.b, self.c)
            if self.b == 0:
                return Quad(self.a - other.a, -other.b, other.c)
            if self.c == other.c:
                return Quad.make(self.a - other.a, self.b - other.b, self.c)
            raise TypeError("difference of unlike radicals")
        return Quad(self.a - Fraction(other), self.b, self.c)

    def __mul__(self, k: Number) -> "Quad":
        k = Fraction(k)
        return Quad.make(self.a * k, self.b * k, self.c)

    __rmul__ = __mul__

    def compare(self, other: Union["Quad", Number]) -> int:
        """Exact sign of self - other; unlike radicals fall back to refinement."""
        try:
            return (self - other).sign()
        except TypeError:
            o = other if isinstance(other, Quad) else Quad(Fraction(other))
            for bits in (64, 256, 1024, 4096):
                x, y = self.enclose(bits), o.enclose(bits)
                if x.hi < y.lo:
                    return -1
                if x.lo > y.hi:
                    return 1
            raise PrecisionExhausted("comparison of unlike radicals undecided")

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def enclose(self, bits: int) -> Interval:
        if self.b == 0:
            return Interval.point(self.a)
        extra = max(0, abs(self.b).numerator.bit_length() - abs(self.b).denominator.bit_length() + 2)
        return self.a + self.b * sqrt_interval(self.c, bits + extra)

    def __float__(self) -> float:
        return float(self.enclose(64).mid)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.c})"


class Infinity:
    """The +infinity marker used for exponents."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "INF"


INF = Infinity()

Exponent = Union[Fraction, int, Infinity]


def _f(x: Number) -> Fraction:
    return as_fraction(x)


# Jarnik ---------------------------------------------------------------------

def jarnik_lower(m: int, n: int, omega_hat: Number, bits: int = 64) -> Union[Fraction, Interval]:
    """Lower bound for the ordinary exponent from the uniform one.

    m = 1: w^2/(1-w); m = 2: w(w-1); m >= 3: w^(m/(m-1)) - 3w (an enclosure),
    the last valid only for w >= (5 m^2)^(m-1).
    """
    w = _f(omega_hat)
    if m == 1:
        if n < 2:
            raise OutOfRange("m = 1 needs n >= 2")
        if not (Fraction(1, n) <= w < 1):
            raise OutOfRange(f"uniform exponent {w} outside [1/n, 1)")
        return w * w / (1 - w)
    if m == 2:
        if w < Fraction(2, n):
            raise OutOfRange(f"uniform exponent {w} below m/n")
        return w * (w - 1)
    if m >= 3:
        if w < (5 * m * m) ** (m - 1):
            raise OutOfRange("uniform exponent below (5m^2)^(m-1)")
        # w^(m/(m-1)) = w * w^(1/(m-1))
        return w * nth_root_interval(w, m - 1, bits + w.numerator.bit_length()) - 3 * w
    raise OutOfRange("m must be positive")


# Laurent --------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentTuple:
    w: Exponent
    w_star: Exponent
    v: Exponent
    v_star: Exponent


def laurent_check(t: ExponentTuple) -> List[str]:
    """Names of violated relations among the four exponents (empty if consistent).

    Relations: 'w-range' (2 <= w <= inf), 'w-relation' (w = 1/(1-w*)),
    'v-star-bounds' (v(w-1)/(v+w) <= v* <= (v-w+1)/w). Closed inequalities
    are used; infinite values follow limit conventions: 1/(1-1) = inf,
    v = inf gives the interval [w-1, inf], and w = inf makes the v* bounds
    vacuous.
    """
    bad: List[str] = []
    w, ws, v, vs = t.w, t.w_star, t.v, t.v_star
    if w is not INF and _f(w) < 2:
        bad.append("w-range")
    # w-relation
    if ws is INF:
        bad.append("w-relation")
    else:
        ws = _f(ws)
        expected: Exponent = INF if ws == 1 else (1 / (1 - ws) if ws < 1 else None)
        if expected is None or expected != w:
            bad.append("w-relation")
    # v* bounds
    if w is not INF:
        w = _f(w)
        if v is INF:
            lower, upper = w - 1, INF
        else:
            v = _f(v)
            lower, upper = v * (w - 1) / (v + w), (v - w + 1) / w
        if vs is INF:
            ok = upper is INF
        else:
            vs = _f(vs)
            ok = lower <= vs and (upper is INF or vs <= upper)
        if not ok:
            bad.append("v-star-bounds")
    return bad


# bounds for m + n = 4 ----------------------------------------------------

def dim_four_lower(case: Tuple[int, int], omega_hat: Number) -> Quad:
    """Exact value of the (1,3), (3,1) or (2,2) bound."""
    w = _f(omega_hat)
    case = tuple(case)
    if case == (1, 3):
        if not (Fraction(1, 3) <= w < 1):
            raise OutOfRange("(1,3) needs 1/3 <= w < 1")
        u = w / (1 - w)
        return Quad.make(w * u / 2, w / 2, u * u + 4 * u)
    if case == (3, 1):
        if w < 3:
            raise OutOfRange("(3,1) needs w >= 3")
        return Quad.make(1 - w / 2, w, w + 1 / (w * w) - Fraction(7, 4))
    if case == (2, 2):
        if w < 1:
            raise OutOfRange("(2,2) needs w >= 1")
        return Quad.make((1 - w) / 2, Fraction(1, 2), (1 - w) ** 2 + 4 * w * (2 * w * w - 2 * w + 1))
    raise OutOfRange(f"unsupported case {case}")


def schmidt_summerer_lower(m: int, n: int, omega_hat: Number) -> Fraction:
    w = _f(omega_hat)
    if m == 1 and n >= 2:
        if not (Fraction(1, n) <= w < 1):
            raise OutOfRange("uniform exponent outside [1/n, 1)")
        return (w * w + (n - 2) * w) / ((n - 1) * (1 - w))
    if n == 1 and m >= 2:
        if w < m:
            raise OutOfRange("uniform exponent below m")
        return (m - 1) * (w * w - w) / (1 + (m - 2) * w)
    raise OutOfRange("needs m = 1 or n = 1")


def special_matrix_polynomial(m: int, n: int, omega_hat: Number) -> List[Fraction]:
    """Coefficients (highest first) of x^(n-1) times the defining equation."""
    w = _f(omega_hat)
    deg = m + n - 2
    coeffs = [Fraction(0)] * (deg + 1)  # index = power

    def add(power: int, c: Fraction) -> None:
        coeffs[power] += c

    for j in range(1, n):
        add(n - 1 - j, -w)
    add(n - 1, 1 - w)
    for j in range(1, m):
        add(j + n - 1, Fraction(1))
    return coeffs[::-1]


def special_matrix_G(m: int, n: int, omega_hat: Number, bits: int = 64) -> Interval:
    """Largest root G of -sum_{j<n} w/x^j + 1 - w + sum_{j<m} x^j = 0."""
    if m < 1 or n < 1:
        raise OutOfRange("m, n must be positive")
    coeffs = special_matrix_polynomial(m, n, omega_hat)
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if len(coeffs) < 2:
        raise OutOfRange("equation has no variable part")
    try:
        return largest_root(coeffs, bits)
    except Exception as exc:  # no real root
        raise OutOfRange(str(exc)) from exc


# Schmidt's positive-orthant bound -------------------------------------------

PHI_SQUARED = Quad.make(Fraction(3, 2), Fraction(1, 2), 5)


def schmidt_G(omega: Number) -> Quad:
    """1/2 ((w+1)/w + sqrt(((w+1)/w)^2 + 4))."""
    w = _f(omega)
    t = (w + 1) / w
    return Quad.make(t / 2, Fraction(1, 2), t * t + 4)


def schmidt_G_interval(omega: Interval, bits: int) -> Interval:
    t = (omega + 1) / omega
    return (t + sqrt_interval(t.square() + 4, bits)) * Fraction(1, 2)


def schmidt_positive_bound(omega, omega_hat, bits: int = 64):
    """Region tag ('A1' or 'A2') and the max of G(w) and w_hat - 1 + w_hat/w.

    Rational inputs give an exact Quad/Fraction bound; Interval inputs give
    an enclosure.
    """
    if isinstance(omega, Interval) or isinstance(omega_hat, Interval):
        return _schmidt_positive_interval(_as_iv(omega), _as_iv(omega_hat), bits)
    w, wh = _f(omega), _f(omega_hat)
    if wh < 2 or w < wh * (wh - 1):
        raise OutOfRange("point outside the admissible region")
    in_a1 = PHI_SQUARED.compare(wh) >= 0 and (3 * wh - wh * wh - 1) > 0 and w >= wh * (wh - 1) / (3 * wh - wh * wh - 1)
    g = schmidt_G(w)
    other = wh - 1 + wh / w
    best = g if g.compare(other) >= 0 else Quad(other)
    return ("A1" if in_a1 else "A2"), best


def _as_iv(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.point(_f(x))


def _schmidt_positive_interval(w: Interval, wh: Interval, bits: int):
    if wh.hi < 2 or w.hi < (wh * (wh - 1)).lo:
        raise OutOfRange("point outside the admissible region")
    phi2 = PHI_SQUARED.enclose(bits)
    denom = 3 * wh - wh.square() - 1
    if wh.lo > phi2.hi:
        in_a1 = False
    elif denom.hi <= 0:
        in_a1 = False
    else:
        if denom.lo <= 0:
            raise PrecisionExhausted("region boundary undecided")
        thr = wh * (wh - 1) / denom
        if w.lo >= thr.hi:
            in_a1 = wh.hi <= phi2.lo
        elif w.hi < thr.lo:
            in_a1 = False
        else:
            raise PrecisionExhausted("region boundary undecided")
    g = schmidt_G_interval(w, bits)
    other = wh - 1 + wh / w
    best = Interval(max(g.lo, other.lo), max(g.hi, other.hi)).round_out(bits)
    return ("A1" if in_a1 else "A2"), best


# Named constants --------------------------------------------------------

SIGMA_POLY = (1, 0, -2, -4, 1)


def sigma_constants(bits: int = 64) -> Dict[str, Interval]:
    """sigma (largest root of x^4-2x^2-4x+1) and the two exponents built from it."""
    s = root(PolyRootSpec(SIGMA_POLY, (Fraction(19, 10), Fraction(2)), "largest"), bits + 8)
    omega = (s + 1).square() * (s.square() - 1) / (4 * s)
    omega_hat = (s + 1).square() / (2 * s)
    bound = (s + 2) / (s.square() - 1)
    return {"sigma": s, "omega": omega, "omega_hat": omega_hat, "printed_bound": bound}


def s_rho(rho: Number, bits: int = 64) -> Interval:
    """Largest root of rho x^3 - 2(rho-1) x^2 - 2 rho x - 1."""
    r = _f(rho)
    return largest_root((r, -2 * (r - 1), -2 * r, -1), bits)


def thurnheer_v(m: int) -> Quad:
    if m < 2:
        raise OutOfRange("m >= 2 required")
    return Quad.make(Fraction(m - 1, 2), Fraction(1, 2), m * m + 2 * m - 3)


def thurnheer_w(m: int) -> Fraction:
    if m < 2:
        raise OutOfRange("m >= 2 required")
    return 1 + Fraction(1, m) + Fraction(1, m * m)


def thurnheer_u0(m: int, omega_star: Number) -> Quad:
    ws = _f(omega_star)
    if m < 2 or not (Fraction(1, m) < ws <= Fraction(1, m - 1)):
        raise OutOfRange("needs 1/m < omega* <= 1/(m-1)")
    a = ws * (m - 1) ** 2 + 1
    k = 1 / (2 * m * ws)
    return Quad.make(a * k, k, a * a + 4 * m * m * (m - 1) * ws * ws)


def thurnheer_two_dim(omega_star: Number) -> Quad:
    """(w*+1)/(4w*) + sqrt(((w*+1)/(4w*))^2 + 1) for 1/2 <= w* <= 1."""
    ws = _f(omega_star)
    if not (Fraction(1, 2) <= ws <= 1):
        raise OutOfRange("needs 1/2 <= omega* <= 1")
    t = (ws + 1) / (4 * ws)
    return Quad.make(t, 1, t * t + 1)


def cococo(rho: Number, tau: Number, t: Number, r: Number) -> Fraction:
    """Value of (1-tau)(rho(t^2 r - t r - t - r - 1) + t^2) + (1-rho)(t^2-1); the condition is <= 0."""
    rho, tau, t, r = map(_f, (rho, tau, t, r))
    if rho <= 1 or tau < 0 or not (1 < t <= r <= 2):
        raise OutOfRange("needs rho > 1, tau >= 0, 1 < t <= r <= 2")
    return (1 - tau) * (rho * (t * t * r - t * r - t - r - 1) + t * t) + (1 - rho) * (t * t - 1)


def thurnheer_values(m: int, rho: Number, tau: Number, omega_star: Optional[Number] = None, bits: int = 64) -> Dict[str, object]:
    out: Dict[str, object] = {"v": thurnheer_v(m), "w": thurnheer_w(m), "s_rho": s_rho(rho, bits)}
    if omega_star is not None:
        out["u0"] = thurnheer_u0(m, omega_star)
    out["cococo"] = lambda t, r: cococo(rho, tau, t, r)
    return out


def bugeaud_kristensen_lower(m: int, l: int, omega: Optional[Number], omega_hat: Number) -> Dict[str, Fraction]:
    wh = _f(omega_hat)
    if not (1 <= l <= m):
        raise OutOfRange("needs 1 <= l <= m")
    if wh <= m - l:
        raise OutOfRange("needs omega_hat > m - l")
    out = {"general": l * wh / (wh - m + l)}
    if l == m - 1 and omega is not None:
        out["codim_one"] = wh - 1 + wh / _f(omega)
    out["best"] = max(out.values())
    return out


def trivial_chain_ok(m: int, n: int, omega_hat: Number, omega: Exponent) -> bool:
    wh = _f(omega_hat)
    if wh < Fraction(m, n):
        return False
    if m == 1 and wh > 1:
        return False
    return omega is INF or wh <= _f(omega)


PHI = Quad.make(Fraction(1, 2), Fraction(1, 2), 5)
ERMAKOV_LITERAL = Fraction(1228043, 1000000)


def _mu(j: int) -> Quad:
    return Quad.make(Fraction(j, 2), Fraction(1, 2), j * j + 4)


def reference_constants(bits: int = 64) -> List[Dict[str, object]]:
    """Certified enclosures of the named constants (name, enclosure, note)."""
    b = bits + 16
    phi = PHI.enclose(b)
    log2 = log_interval(2, b)
    phi3 = sqrt_interval(phi, b)
    phi4 = root(PolyRootSpec((1, 0, -1, -1), (Fraction(1), Fraction(2)), "unique"), b)
    sig = sigma_constants(bits)
    kappa1 = 2 * log_interval(phi, b) / log2

    def L(j: int) -> Interval:
        return log_interval(_mu(j).enclose(b), b) - Fraction(j, 2) * log2

    L4, L5 = L(4), L(5)
    kappa2 = (4 * L5 - 5 * L4) / (L5 - L4)
    inner = (8 + 13 * phi3) / (phi3 ** 13)
    eleventh = nth_root_interval(inner, 11, b)
    # the printed prefactor phi gives 1.6287...; phi3 reproduces the printed 1.28040
    mosh = phi3 * eleventh
    mosh_literal = phi * eleventh
    rows = [
        ("phi", phi, "golden ratio"),
        ("phi3", phi3, "square root of the golden ratio"),
        ("phi4", phi4, "real root of t^3 = t + 1"),
        ("sigma", sig["sigma"], "largest root of x^4 - 2x^2 - 4x + 1"),
        ("sigma_omega", sig["omega"], "(s+1)^2 (s^2-1)/(4s)"),
        ("sigma_omega_hat", sig["omega_hat"], "(s+1)^2/(2s)"),
        ("kappa1", kappa1, "2 log(phi)/log 2"),
        ("kappa2", kappa2, "(4L5 - 5L4)/(L5 - L4)"),
        ("sup_norm_growth_bound", mosh, "phi3 ((8+13 phi3)/phi3^13)^(1/11)"),
        ("sup_norm_growth_bound_phi_prefactor", mosh_literal, "phi ((8+13 phi3)/phi3^13)^(1/11), literal prefactor"),
        ("euclidean_growth_bound", Interval.point(ERMAKOV_LITERAL), "stored literal (computer-assisted)"),
        ("s1", s_rho(1, b), "largest root of x^3 - 2x - 1"),
        ("schmidt_G_at_2", Interval.point(schmidt_G(2).a) if schmidt_G(2).is_rational() else schmidt_G(2).enclose(b), "exact"),
    ]
    return [{"name": n, "enclosure": iv.round_out(bits), "note": note} for n, iv, note in rows]


def certified_digits(iv: Interval) -> int:
    """Number of decimal digits after the point on which both endpoints agree."""
    lo, hi = iv.lo, iv.hi
    for d in range(0, 40):
        s = 10 ** d
        if (lo * s).__floor__() != (hi * s).__floor__():
            return max(0, d - 1)
    return 40
