"""Command-line entry point: `diophlab <group> <command> [options]`.

Exit codes: 0 success, 1 invalid input, 2 precision exhausted, 3 budget
exceeded, 4 any other library error (too few records, no sign change, ...).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import itertools
import json
import math
import sys
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .errors import BudgetExceeded, DiophError, PrecisionExhausted, TooFewRecords, ValidationError
from .exact import as_fraction
from .reals import CFStreamOracle, Interval, RationalOracle, RealOracle, SurdOracle, golden, sqrt_oracle

EXIT_OK, EXIT_INVALID, EXIT_PRECISION, EXIT_BUDGET, EXIT_OTHER = 0, 1, 2, 3, 4


# ---------------------------------------------------------------------------
# argument types

def rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def real(text: str) -> RealOracle:
    """'p/q', 'sqrt:D', 'surd:P,D,Q', 'golden' or 'cf:b0;b1,b2,...' (last block repeats)."""
    t = text.strip()
    try:
        if t == "golden":
            return golden()
        if t.startswith("sqrt:"):
            return sqrt_oracle(int(t[5:]))
        if t.startswith("surd:"):
            P, D, Q = (int(v) for v in t[5:].split(","))
            return SurdOracle(P, D, Q)
        if t.startswith("cf:"):
            head, _, tail = t[3:].partition(";")
            period = [int(v) for v in tail.split(",") if v]
            if not period or any(b < 1 for b in period):
                raise ValidationError("cf: needs a non-empty period of positive quotients")
            return CFStreamOracle(int(head), lambda: itertools.cycle(period), t)
        return RationalOracle(as_fraction(t))
    except (ValueError, ValidationError) as exc:
        raise argparse.ArgumentTypeError(f"bad real {text!r}: {exc}") from exc


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


# ---------------------------------------------------------------------------
# serialisation

def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Interval):
        return {"lo": str(obj.lo), "hi": str(obj.hi), "approx": float(obj.mid)}
    if isinstance(obj, RealOracle):
        return obj.describe()
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if not callable(getattr(obj, f.name))}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items() if not callable(v)}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


def _flatten(row: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for k, v in row.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = " ".join(str(x) for x in v)
        else:
            out[key] = v
    return out


def render(report: Dict[str, Any], fmt: str) -> str:
    rows = report["payload"].get("rows")
    if fmt == "csv":
        table = [_flatten(r) for r in rows] if rows else [_flatten({k: v for k, v in report["payload"].items()})]
        cols: List[str] = []
        for r in table:
            for k in r:
                if k not in cols:
                    cols.append(k)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in table:
            w.writerow(r)
        return buf.getvalue()
    lines = []
    if rows:
        lines.extend(json.dumps({"row": r}, sort_keys=True) for r in rows)
    meta = {k: v for k, v in report.items() if k != "payload"}
    meta["summary"] = {k: v for k, v in report["payload"].items() if k != "rows"}
    lines.append(json.dumps({"report": meta}, sort_keys=True))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# command handlers; each returns (payload, warnings)

Result = Tuple[Dict[str, Any], List[str]]


def cmd_constants(a) -> Result:
    from .exponents import certified_digits, reference_constants
    rows = []
    for r in reference_constants(a.precision):
        iv = r["enclosure"]
        rows.append({"name": r["name"], "lo": str(iv.lo), "hi": str(iv.hi),
                     "approx": f"{float(iv.mid):.12f}", "digits": certified_digits(iv), "note": r["note"]})
    return {"rows": rows}, []


def cmd_cf(a) -> Result:
    from .exact import cf_expand, convergents
    cf = cf_expand(a.x)
    conv = [f"{p}/{q}" for p, q in convergents(cf.b0, cf.quotients)]
    return {"x": a.x, "cf": str(cf), "convergents": conv}, []


def cmd_laurent(a) -> Result:
    from .exponents import ExponentTuple, laurent_check
    bad = laurent_check(ExponentTuple(a.w, a.w_star, a.v, a.v_star))
    return {"violations": bad, "consistent": not bad}, []


def cmd_jarnik(a) -> Result:
    from .exponents import jarnik_lower
    return {"m": a.m, "n": a.n, "omega_hat": a.omega_hat,
            "lower": jarnik_lower(a.m, a.n, a.omega_hat, a.precision)}, []


def _matrix(a):
    from .bestapprox import ApproxMatrix
    return ApproxMatrix.row(a.theta) if a.shape == "row" else ApproxMatrix.column(a.theta)


def cmd_records(a) -> Result:
    from .bestapprox import best_approximations, estimate_exponents, growth_exponent
    recs = best_approximations(_matrix(a), M_max=a.M_max, precision=a.precision, method=a.method)
    rows = [{"nu": i, "x": list(r.x), "y": list(r.y), "M": r.M, "zeta": to_jsonable(r.zeta)}
            for i, r in enumerate(recs, 1)]
    out: Dict[str, Any] = {"rows": rows, "count": len(recs)}
    warnings = []
    try:
        out["growth"] = growth_exponent(recs).estimate
        e = estimate_exponents(recs)
        out["ordinary_fit"], out["uniform_fit"] = e.ordinary_fit, e.uniform_fit
        warnings.append("exponents are finite-window estimates")
    except TooFewRecords as exc:
        warnings.append(f"no exponent estimates: {exc}")
    return out, warnings


def cmd_psi_plus(a) -> Result:
    from .bestapprox import DomainConstraint, psi_plus_scan
    rep = psi_plus_scan(a.theta, DomainConstraint(a.domain), a.t_max, a.precision)
    rows = [{"t": t, "psi": to_jsonable(m), "argmin": list(x)} for t, m, x in zip(rep.grid, rep.minima, rep.argmins)]
    return {"rows": rows, "exponent": rep.exponent}, ["exponent is a finite-window fit"]


def cmd_cubic(a) -> Result:
    from .bestapprox import brentjes_best_approx
    r = brentjes_best_approx(a.bound)
    return {"ratios": r["ratios"], "unit_period": r["unit_period"], "field_norms": r["field_norms"]}, []


def cmd_lw_scan(a) -> Result:
    from .littlewood import multi_littlewood_scan
    res = multi_littlewood_scan(a.theta, a.N, a.precision, log_weight=a.log_weight)
    return {"rows": to_jsonable(res.as_rows()), "best": res.best}, []


def cmd_lw_mixed(a) -> Result:
    from .littlewood import mixed_littlewood_scan
    res = mixed_littlewood_scan(a.theta[0], a.primes, a.N, a.precision)
    return {"rows": to_jsonable(res.as_rows()), "best": res.best}, []


def cmd_peck(a) -> Result:
    from .littlewood import cubic_cos_basis, peck_verify
    rep = peck_verify(cubic_cos_basis(), a.C, a.N)
    return {"C": rep.C, "N": rep.N, "witness_count": len(rep.witnesses),
            "witnesses": rep.witnesses, "bad_inf": rep.bad_inf}, []


def cmd_avoider(a) -> Result:
    from .littlewood import LacunarySequence, lacunary_avoider
    t = LacunarySequence.make([a.ratio ** j for j in range(a.terms)], a.M)
    cert = lacunary_avoider(t)
    return {"alpha": cert.alpha, "inf": cert.inf, "argmin": cert.argmin, "threshold": cert.threshold,
            "reference": cert.reference, "verified": cert.verify(t)}, []


def cmd_gallagher(a) -> Result:
    from .littlewood import gallagher_montecarlo
    rep = gallagher_montecarlo(a.psi, a.trials, a.N, a.seed)
    return {"psi": rep.psi, "divergent": rep.divergent, "Ns": rep.Ns, "medians": rep.medians}, \
        ["Monte Carlo in floating point; medians are statistics, not certificates"]


def cmd_furstenberg(a) -> Result:
    from .littlewood import furstenberg_count_estimate, furstenberg_sequence
    seq = furstenberg_sequence(a.bound)
    return {"count": len(seq), "estimate": furstenberg_count_estimate(a.bound), "head": seq[:50]}, []


def cmd_coverage(a) -> Result:
    from .zaremba import coverage
    cov = coverage(a.k, a.N, shards=a.threads)
    if a.bitmap:
        cov.save(a.bitmap)
    return {"k": a.k, "N": a.N, "covered": cov.covered, "exceptions": cov.exceptions()}, []


def cmd_counts(a) -> Result:
    from .zaremba import N_k_counts
    t = N_k_counts(a.k, a.Q)
    return {"rows": [{"q": q, "N_k": int(t.counts[q])} for q in range(1, a.Q + 1)]}, []


def cmd_hensley(a) -> Result:
    from .zaremba import hensley_fit
    grid = [1 << e for e in range(a.lo_exp, a.hi_exp + 1)]
    f = hensley_fit(a.k, grid)
    return {"k": a.k, "grid": grid, "slope": f.slope, "asymptotic": f.asymptotic}, \
        ["the asymptotic value is a reference shape, not a limit claim"]


def cmd_hyperbola(a) -> Result:
    from .zaremba import hyperbola_search
    r = hyperbola_search(a.q, getattr(a, "lambda"), a.k, a.T1, a.T2, first_only=a.first_only)
    return {"q": r.q, "lambda": r.lam, "found": r.found, "witnesses": r.witnesses, "checked": r.checked}, []


def cmd_fold_chain(a) -> Result:
    from .zaremba import folding_construct
    steps = folding_construct((a.seed_fraction.numerator, a.seed_fraction.denominator), a.k, a.steps)
    return {"rows": [{"a": s.a, "q": s.q, "max_quotient": s.max_quotient, "identity_ok": s.identity_ok}
                     for s in steps]}, []


def cmd_korobov(a) -> Result:
    from .zaremba import korobov_stat
    s = korobov_stat(a.q)
    return {"q": s.q, "min_max": s.min_max, "argmin": s.argmin, "histogram": s.histogram}, []


def cmd_disc(a) -> Result:
    from .discrepancy import discrepancy_multidim
    mult = list(a.a)
    if a.s is not None and a.s != len(mult) + 1 and not (mult and mult[0] == 1 and a.s == len(mult)):
        raise ValidationError(f"--s {a.s} does not match {len(mult)} multipliers")
    D = discrepancy_multidim(mult, a.q)
    return {"q": a.q, "a": mult, "D": D, "D_float": float(D)}, []


def cmd_best_a(a) -> Result:
    from .discrepancy import best_a
    return to_jsonable(best_a(a.q)), []


def cmd_fib(a) -> Result:
    from .discrepancy import fibonacci_discrepancy_ratios
    rows = [{"n": n, "q": q, "D": D, "D_over_log_q": r} for n, q, D, r in fibonacci_discrepancy_ratios(a.n_max)]
    return {"rows": rows}, []


def cmd_subgroup(a) -> Result:
    from .discrepancy import primitive_root, subgroup_cf_search
    r = subgroup_cf_search(a.p, primitive_root(a.p), a.index)
    return {"p": r.p, "subgroup_size": r.subgroup_size, "best": r.best, "witness": r.witness,
            "quotients": list(r.quotients), "reference": r.reference}, []


def cmd_qm(a) -> Result:
    from .minkowski import question_mark
    return {"x": a.x, "value": question_mark(a.x, a.precision)}, []


def cmd_inverse(a) -> Result:
    from .minkowski import inverse_question_mark
    return {"y": a.y, "value": inverse_question_mark(a.y, a.precision)}, []


def cmd_fixed(a) -> Result:
    from .minkowski import fixed_points
    r = fixed_points(a.resolution)
    return {"exact": r.exact, "enclosures": r.enclosures, "count": r.count}, \
        ["the scan finds sign changes only; it does not prove there are no other solutions"]


def cmd_fourier(a) -> Result:
    from .minkowski import fourier_stieltjes
    return {"rows": fourier_stieltjes(a.n_max, a.level).rows()}, []


def cmd_remainder(a) -> Result:
    from .minkowski import integral_inverse_side, remainder_Rn
    I = integral_inverse_side()
    rows = [to_jsonable({"n": n, "R": remainder_Rn(n, I).R}) for n in range(a.n_max + 1)]
    return {"rows": rows, "I": I.value}, []


def cmd_franel(a) -> Result:
    from .minkowski import farey_franel
    rows = []
    Q = a.Q_min
    while Q <= a.Q:
        r = farey_franel(Q)
        rows.append({"Q": Q, "Phi": r.Phi, "franel": str(r.franel), "approx": float(r.franel)})
        Q *= 2
    return {"rows": rows}, []


def cmd_classify(a) -> Result:
    from .minkowski import derivative_classify
    r = derivative_classify(a.x, a.t_max, a.C)
    return {"tag": r.tag, "infinite_first_failure": r.infinite_first_failure,
            "zero_first_failure": r.zero_first_failure}, [r.caveat]


def cmd_g_lambda(a) -> Result:
    from .minkowski import g_lambda
    return {"lambda": a.lam, "x": a.x, "value": g_lambda(a.lam, a.x, a.precision)}, []


def cmd_semiregular(a) -> Result:
    from .minkowski import semiregular_level
    rows = []
    for n in a.n:
        r = semiregular_level(n)
        rows.append({"n": n, "size": len(r.values), "sup_deviation": to_jsonable(r.sup_deviation)})
    return {"rows": rows}, []


def cmd_kappa(a) -> Result:
    from .minkowski import kappa_lambda_scan
    step = Fraction(a.step)
    grid = [a.slope_min + i * step for i in range(int((a.slope_max - a.slope_min) / step) + 1)]
    s = kappa_lambda_scan(a.lam, grid, a.t_max)
    return {"lambda": a.lam, "constant_boundary": s.constant_boundary(), "block_boundary": s.block_boundary(),
            "sparse_boundary": s.sparse_boundary()}, [s.label]


# ---------------------------------------------------------------------------
# registry

COMMANDS: Dict[Tuple[str, str], Tuple[Callable, Callable, str]] = {}


def _register(group: str, name: str, help_: str):
    def deco(setup: Callable):
        COMMANDS[(group, name)] = (setup, globals()[f"cmd_{setup.__name__[4:]}"], help_)
        return setup
    return deco


@_register("constants", "table", "certified reference constants")
def arg_constants(p): pass


@_register("exact", "cf", "continued fraction and convergents of a rational")
def arg_cf(p):
    p.add_argument("--x", type=rational, required=True)


@_register("exponents", "laurent", "check the four-exponent relations")
def arg_laurent(p):
    for f in ("--w", "--w-star", "--v", "--v-star"):
        p.add_argument(f, type=rational, required=True)


@_register("exponents", "jarnik", "ordinary-exponent lower bound from the uniform exponent")
def arg_jarnik(p):
    p.add_argument("--m", type=positive_int, required=True)
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--omega-hat", type=rational, required=True)


@_register("bestapprox", "records", "best approximation vectors")
def arg_records(p):
    p.add_argument("--theta", type=real, action="append", required=True)
    p.add_argument("--shape", choices=["column", "row"], default="column")
    p.add_argument("--M-max", type=positive_int, default=1000)
    p.add_argument("--method", choices=["enumerate", "convergents"], default="enumerate")


@_register("bestapprox", "psi-plus", "constrained approximation minima")
def arg_psi_plus(p):
    p.add_argument("--theta", type=real, action="append", required=True)
    p.add_argument("--domain", choices=["all", "positive"], default="positive")
    p.add_argument("--t-max", type=positive_int, default=10 ** 4)


@_register("bestapprox", "cubic", "best approximations in the cubic unit lattice")
def arg_cubic(p):
    p.add_argument("--bound", type=float, default=2000.0)


@_register("littlewood", "scan", "record minima of q * prod ||q theta_i||")
def arg_lw_scan(p):
    p.add_argument("--theta", type=real, action="append", required=True)
    p.add_argument("--N", type=positive_int, required=True)
    p.add_argument("--log-weight", action="store_true")


@_register("littlewood", "mixed", "record minima of q |q|_p ||q theta||")
def arg_lw_mixed(p):
    p.add_argument("--theta", type=real, action="append", required=True)
    p.add_argument("--primes", type=positive_int, nargs="+", required=True)
    p.add_argument("--N", type=positive_int, required=True)


@_register("littlewood", "peck", "witness scan for the cubic cosine basis")
def arg_peck(p):
    p.add_argument("--C", type=rational, default=Fraction(2))
    p.add_argument("--N", type=positive_int, default=10 ** 4)


@_register("littlewood", "avoider", "certified point avoiding a geometric lacunary sequence")
def arg_avoider(p):
    p.add_argument("--ratio", type=rational, default=Fraction(2))
    p.add_argument("--terms", type=positive_int, default=40)
    p.add_argument("--M", type=rational, default=Fraction(2))


@_register("littlewood", "gallagher", "Monte Carlo solution counts")
def arg_gallagher(p):
    p.add_argument("--psi", choices=["q_log", "q_log2", "q_log3"], default="q_log")
    p.add_argument("--trials", type=positive_int, default=20)
    p.add_argument("--N", type=positive_int, nargs="+", default=[10 ** 4, 2 * 10 ** 4, 4 * 10 ** 4])


@_register("littlewood", "furstenberg", "the sorted 2^a 3^b sequence")
def arg_furstenberg(p):
    p.add_argument("--bound", type=positive_int, default=10 ** 6)


@_register("zaremba", "coverage", "denominators q <= N with a k-bounded numerator")
def arg_coverage(p):
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--N", type=positive_int, required=True)
    p.add_argument("--bitmap", help="also write the coverage bitmap to this path")


@_register("zaremba", "counts", "N_k(q) for q <= Q")
def arg_counts(p):
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--Q", type=positive_int, required=True)


@_register("zaremba", "hensley", "log-log slope of the k-bounded counts")
def arg_hensley(p):
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--lo-exp", type=positive_int, default=8)
    p.add_argument("--hi-exp", type=positive_int, default=14)


@_register("zaremba", "hyperbola", "x1 x2 = lambda mod q with bounded quotients")
def arg_hyperbola(p):
    p.add_argument("--q", type=positive_int, required=True)
    p.add_argument("--lambda", type=int, default=1)
    p.add_argument("--k", type=positive_int, required=True)
    p.add_argument("--T1", type=positive_int, required=True)
    p.add_argument("--T2", type=positive_int, required=True)
    p.add_argument("--first-only", action="store_true")


@_register("zaremba", "fold-chain", "iterate the folding construction")
def arg_fold_chain(p):
    p.add_argument("--seed-fraction", type=rational, default=Fraction(1, 2))
    p.add_argument("--k", type=positive_int, default=2)
    p.add_argument("--steps", type=positive_int, default=4)


@_register("zaremba", "korobov", "smallest max quotient over numerators of q")
def arg_korobov(p):
    p.add_argument("--q", type=positive_int, required=True)


@_register("discrepancy", "exact", "exact discrepancy of a rank-one lattice point set")
def arg_disc(p):
    p.add_argument("--q", type=positive_int, required=True)
    p.add_argument("--a", type=int, nargs="+", required=True)
    p.add_argument("--s", type=int)


@_register("discrepancy", "best-a", "multiplier minimising the discrepancy")
def arg_best_a(p):
    p.add_argument("--q", type=positive_int, required=True)


@_register("discrepancy", "fibonacci", "discrepancy of Fibonacci lattices over log q")
def arg_fib(p):
    p.add_argument("--n-max", type=positive_int, default=20)


@_register("discrepancy", "subgroup", "smallest quotient sum over a coset of a subgroup mod p")
def arg_subgroup(p):
    p.add_argument("--p", type=positive_int, required=True)
    p.add_argument("--index", type=positive_int, default=2)


@_register("minkowski", "qm", "the question mark function")
def arg_qm(p):
    p.add_argument("--x", type=real, required=True)


@_register("minkowski", "inverse", "inverse of the question mark function at a dyadic")
def arg_inverse(p):
    p.add_argument("--y", type=rational, required=True)


@_register("minkowski", "fixed-points", "solutions of ?(x) = x")
def arg_fixed(p):
    p.add_argument("--resolution", type=rational, default=Fraction(1, 1 << 30))


@_register("minkowski", "fourier", "Fourier-Stieltjes coefficients with error bars")
def arg_fourier(p):
    p.add_argument("--n-max", type=positive_int, default=200)
    p.add_argument("--level", type=positive_int, default=18)


@_register("minkowski", "remainder", "the Stern-Brocot square-sum remainder R_n")
def arg_remainder(p):
    p.add_argument("--n-max", type=positive_int, default=18)


@_register("minkowski", "franel", "Franel sums on a doubling grid of Q")
def arg_franel(p):
    p.add_argument("--Q", type=positive_int, default=1000)
    p.add_argument("--Q-min", type=positive_int, default=8)


@_register("minkowski", "classify", "derivative classification from quotient sums")
def arg_classify(p):
    p.add_argument("--x", type=real, required=True)
    p.add_argument("--t-max", type=positive_int, default=1000)
    p.add_argument("--C", type=rational, default=Fraction(10))


@_register("minkowski", "g-lambda", "the mediant-interpolation family")
def arg_g_lambda(p):
    p.add_argument("--lam", type=rational, required=True)
    p.add_argument("--x", type=real, required=True)


@_register("minkowski", "semiregular", "semiregular level sets against g_lambda")
def arg_semiregular(p):
    p.add_argument("--n", type=positive_int, nargs="+", default=[10, 14, 18])


@_register("minkowski", "kappa", "exploratory derivative-proxy boundaries")
def arg_kappa(p):
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--slope-min", type=rational, default=Fraction(1))
    p.add_argument("--slope-max", type=rational, default=Fraction(6))
    p.add_argument("--step", type=rational, default=Fraction(1, 10))
    p.add_argument("--t-max", type=positive_int, default=4000)


# topic -> command index; every public library operation appears once
EXPERIMENT_INDEX: Dict[str, Tuple[str, str]] = {
    # exact core
    "cf_expand": ("continued fractions", "exact cf"),
    "cf_value": ("continued fractions", "exact cf"),
    "continuant": ("continuants", "python API"),
    "fold": ("folding", "zaremba fold-chain"),
    "fold_identity_rhs": ("folding", "zaremba fold-chain"),
    "nearest_int_distance": ("distance to the nearest integer", "python API"),
    "padic_norm": ("p-adic norms", "littlewood mixed"),
    "semiregular_value": ("semiregular continued fractions", "minkowski semiregular"),
    # exponents
    "reference_constants": ("reference constants", "constants table"),
    "jarnik_lower": ("ordinary vs uniform exponents", "exponents jarnik"),
    "laurent_check": ("four-exponent relations", "exponents laurent"),
    "schmidt_summerer_lower": ("uniform exponent lower bounds", "python API"),
    "dim_four_lower": ("four-dimensional bounds", "python API"),
    "special_matrix_G": ("the special-matrix polynomial", "python API"),
    "thurnheer_values": ("positive-orthant exponents", "python API"),
    "bugeaud_kristensen_lower": ("positive-orthant exponents", "python API"),
    "schmidt_positive_bound": ("positive-orthant exponents", "python API"),
    "sigma_constants": ("sigma constants", "constants table"),
    # best approximations
    "best_approximations": ("best approximation vectors", "bestapprox records"),
    "growth_exponent": ("growth of best approximations", "bestapprox records"),
    "check_growth_recurrences": ("growth recurrences", "python API"),
    "estimate_exponents": ("exponent estimates", "bestapprox records"),
    "psi_plus_scan": ("constrained approximation", "bestapprox psi-plus"),
    "brentjes_best_approx": ("cubic unit lattice", "bestapprox cubic"),
    "dim_span_tail": ("span of best approximations", "python API"),
    # littlewood
    "littlewood_scan": ("Littlewood products", "littlewood scan"),
    "multi_littlewood_scan": ("Littlewood products", "littlewood scan"),
    "mixed_littlewood_scan": ("mixed p-adic products", "littlewood mixed"),
    "lattice_product_min": ("lattice product minima", "python API"),
    "bad_membership_scan": ("weighted badly approximable pairs", "python API"),
    "peck_verify": ("cubic cosine basis", "littlewood peck"),
    "furstenberg_sequence": ("the 2^a 3^b sequence", "littlewood furstenberg"),
    "lacunary_avoider": ("lacunary avoidance", "littlewood avoider"),
    "gallagher_montecarlo": ("Gallagher counts", "littlewood gallagher"),
    # zaremba
    "coverage": ("bounded-quotient denominators", "zaremba coverage"),
    "N_k_counts": ("bounded-quotient counts", "zaremba counts"),
    "hensley_fit": ("count growth exponent", "zaremba hensley"),
    "B_set": ("bounded numerators", "python API"),
    "hyperbola_search": ("modular hyperbola", "zaremba hyperbola"),
    "korobov_stat": ("Korobov statistic", "zaremba korobov"),
    "folding_construct": ("folding", "zaremba fold-chain"),
    "missing_digit_products": ("missing-digit sets", "python API"),
    # discrepancy
    "discrepancy_exact": ("lattice discrepancy", "discrepancy exact"),
    "discrepancy_multidim": ("lattice discrepancy", "discrepancy exact"),
    "pq_sum_bound_check": ("discrepancy vs quotient sums", "python API"),
    "best_a": ("optimal multipliers", "discrepancy best-a"),
    "fibonacci_discrepancy_ratios": ("Fibonacci lattices", "discrepancy fibonacci"),
    "subgroup_cf_search": ("subgroup quotient sums", "discrepancy subgroup"),
    # minkowski
    "question_mark": ("question mark function", "minkowski qm"),
    "inverse_question_mark": ("question mark function", "minkowski inverse"),
    "stern_brocot": ("Stern-Brocot levels", "python API"),
    "distribution_check": ("Stern-Brocot distribution", "python API"),
    "fourier_stieltjes": ("Fourier-Stieltjes coefficients", "minkowski fourier"),
    "fixed_points": ("fixed points of ?", "minkowski fixed-points"),
    "remainder_Rn": ("Stern-Brocot square sums", "minkowski remainder"),
    "farey_franel": ("Farey and Franel sums", "minkowski franel"),
    "derivative_classify": ("derivative of ?", "minkowski classify"),
    "g_lambda": ("mediant-interpolation family", "minkowski g-lambda"),
    "semiregular_level": ("semiregular continued fractions", "minkowski semiregular"),
    "kappa_lambda_scan": ("derivative proxy boundaries", "minkowski kappa"),
}


def list_experiments() -> List[Dict[str, str]]:
    return [{"operation": op, "topic": topic, "command": cmd}
            for op, (topic, cmd) in sorted(EXPERIMENT_INDEX.items())]


# ---------------------------------------------------------------------------
# parser and main

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # invalid input exits 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", help="write here instead of stdout")
    common.add_argument("--format", choices=["json-lines", "csv"], default="json-lines")
    common.add_argument("--precision", type=positive_int, default=128, help="oracle precision in bits")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=positive_int, default=1)
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    parser = _Parser(prog="diophlab", description="Exact experiments in Diophantine approximation.")
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    groups.add_parser("list", help="index of operations and commands", parents=[common])
    sub: Dict[str, Any] = {}
    for (group, name), (setup, _, help_) in COMMANDS.items():
        if group not in sub:
            sub[group] = groups.add_parser(group).add_subparsers(dest="command", required=True,
                                                                 parser_class=_Parser)
        p = sub[group].add_parser(name, help=help_, parents=[common])
        setup(p)
    return parser


def _config(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"output", "timing"}
    return {k: to_jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}


def run(args: argparse.Namespace) -> Dict[str, Any]:
    start = time.perf_counter()
    if args.group == "list":
        payload, warnings = {"rows": list_experiments()}, []
    else:
        _, handler, _ = COMMANDS[(args.group, args.command)]
        payload, warnings = handler(args)
    report = {"config": _config(args), "version": __version__, "payload": to_jsonable(payload),
              "warnings": warnings}
    if args.timing:
        report["wall_time"] = round(time.perf_counter() - start, 3)
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = run(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DiophError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_OTHER
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for w in report["warnings"]:
        print(f"note: {w}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
