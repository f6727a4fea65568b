"""Relative Fisher information of a discrete family, by four routes.

For the degree-n monic polynomial P_n orthogonal on an integer lattice with
weight w and norm d_n^2, the quantity computed here is

    I = (1/d_n^2) * sum_x w(x) [P_n(x+1) - P_n(x)]^2 .

Routes:

* ``direct``     -- the defining sum (exact over bounded supports, truncated
                    under the big-float backend otherwise);
* ``difference`` -- the summation-by-parts identity coming from the family's
                    second-order difference equation, which trades the sum for
                    a boundary term plus an expectation of the weight ratio;
* ``expansion``  -- the ladder route: Delta P_n expanded back in the same
                    family, giving (1/d_n^2) sum_j a_j^2 d_j^2.  This is the
                    authoritative exact value (terminating series only);
* ``closed``     -- the per-family closed forms.  Charlier, Meixner and
                    Kravchuk are exact; the Hahn form contains one
                    non-terminating 3F2 at -1 that is Euler-accelerated and
                    reported with a convergence flag.

The four agree bit-exactly wherever they are all exact, which is the main
self-check of the package.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

import mpmath
from mpmath import mpf

from .families import (
    Charlier,
    Family,
    Hahn,
    Kravchuk,
    Meixner,
    OutOfSupport,
    diff_coeffs,
    shift_coeffs,
)
from .numerics import (
    DEFAULT_ACCEL_TOL,
    DEFAULT_DPS,
    DenominatorPole,
    PFQSpec,
    Scalar,
    accelerated_pfq_at_minus_one,
    pochhammer,
    terminating_pfq,
    to_mpf,
)


class Method(enum.Enum):
    DIRECT = "direct"
    DIFFERENCE = "difference"
    EXPANSION = "expansion"
    CLOSED = "closed"


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for sums over infinite supports.

    Summation stops at the first lattice point where a rigorous geometric
    majorant of the tail falls below ``tail_tol`` relative to the running
    sum; reaching ``hard_cap`` first is an error.
    """

    tail_tol: Fraction = Fraction(1, 10**30)
    hard_cap: int = 10**6


DEFAULT_TRUNCATION = TruncationPolicy()


class TruncationCapExceeded(RuntimeError):
    """The truncated sum hit the hard cap before meeting its tail tolerance."""


# ---------------------------------------------------------------------------
# Truncated summation over infinite supports
# ---------------------------------------------------------------------------


def _root_bound(coeffs) -> float:
    """Fujiwara-style bound: every root satisfies |z| < bound.

    2 * max_i |c_(d-i)/c_d|^(1/i), plus one for float slack.  Much tighter
    than the plain Cauchy bound when the roots are spread out, which is what
    keeps the truncated sums short.
    """
    lead = coeffs[-1]
    degree = len(coeffs) - 1
    best = 0.0
    for i in range(1, degree + 1):
        c = coeffs[degree - i]
        if c:
            ratio = abs(c / lead)
            try:
                value = float(ratio) ** (1.0 / i)
            except OverflowError:
                bits = ratio.numerator.bit_length() - ratio.denominator.bit_length() + 1
                value = 2.0 ** (bits / i)
            if value > best:
                best = value
    return 2.0 * best + 1.0


def _tail_weight_ratio_bound(fam: Family, x: int) -> Fraction:
    """Upper bound on w(y+1)/w(y) valid for every y >= x (infinite supports)."""
    if isinstance(fam, Charlier):
        return fam.mu / (x + 1)  # decreasing in x
    if isinstance(fam, Meixner):
        # ratio mu (gamma+y)/(y+1) is monotone toward mu from either side
        return fam.mu * max(Fraction(1), (fam.gamma + x) / Fraction(x + 1))
    raise TypeError(f"no tail bound for bounded family {fam.tag}")


def truncated_weighted_square_sum(fam: Family, coeffs, trunc: TruncationPolicy,
                                  dps: int = DEFAULT_DPS) -> mpf:
    """sum_{x>=0} w(x) q(x)^2 for the polynomial q given by exact coefficients.

    The sum stops once x clears every root of q and the geometric majorant
    t(x) * Q/(1-Q), with Q bounding every later term ratio, drops below
    ``tail_tol`` relative to the running sum.
    """
    coeffs = tuple(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if not any(coeffs):
        return mpf(0)
    deg = len(coeffs) - 1
    root_bound = _root_bound(coeffs)
    work = dps + 25 + deg
    with mpmath.workdps(work):
        cs = [to_mpf(c) for c in coeffs]
        tol = to_mpf(trunc.tail_tol)
        weight = to_mpf(fam.reduced_weight(0))
        total = mpf(0)
        x = 0
        while x < trunc.hard_cap:
            q = cs[-1]
            for c in reversed(cs[:-1]):
                q = q * x + c
            term = weight * q * q
            total += term
            if x > root_bound and term > 0:
                rho = to_mpf(_tail_weight_ratio_bound(fam, x))
                poly_growth = (mpf(x + 1 - root_bound) / (x - root_bound)) ** (2 * deg)
                ratio_cap = rho * poly_growth
                if ratio_cap < 1 and term * ratio_cap / (1 - ratio_cap) <= tol * total:
                    with mpmath.workdps(dps):
                        return +total
            weight *= to_mpf(1 / fam.weight_ratio(x + 1))  # w(x+1) = w(x)/ratio(x+1)
            x += 1
    raise TruncationCapExceeded(
        f"{fam.tag}: no convergence within {trunc.hard_cap} lattice points")


# ---------------------------------------------------------------------------
# The four routes
# ---------------------------------------------------------------------------


def fisher_direct(fam: Family, n: int, trunc: TruncationPolicy = DEFAULT_TRUNCATION,
                  *, dps: int = DEFAULT_DPS):
    """Defining sum; exact Fraction on bounded supports, mpf otherwise."""
    fam.check_degree(n)
    sup = fam.support()
    if sup.b is not None:
        num = sum(fam.reduced_weight(x) * fam.forward_diff(n, Fraction(x)) ** 2
                  for x in sup.points())
        return num / fam.reduced_norm(n).rational
    if n == 0:
        return Fraction(0)
    total = truncated_weighted_square_sum(fam, diff_coeffs(fam.poly_coeffs(n)),
                                          trunc, dps)
    with mpmath.workdps(dps):
        return total / fam.reduced_norm(n).to_float(dps)


def fisher_difference(fam: Family, n: int, trunc: TruncationPolicy = DEFAULT_TRUNCATION,
                      *, dps: int = DEFAULT_DPS):
    """Summation-by-parts route:

        I = (1/d_n^2) ( [w(x-1) P_n(x)^2]_a^b + <w(x-1)/w(x)> ) - 1,

    with the expectation over the degree-n density and the convention
    w(a-1) = 0.  The upper boundary term is nonzero for bounded supports and
    must not be dropped.  The weight ratio comes from its closed form, so the
    support edges where the sigma/tau quotient would be 0/0 are never touched.
    """
    fam.check_degree(n)
    sup = fam.support()
    norm = fam.reduced_norm(n)
    if sup.b is not None:
        boundary = fam.reduced_weight(sup.b - 1) * fam.eval_poly(n, Fraction(sup.b)) ** 2
        expect = sum(fam.reduced_weight(x) * fam.eval_poly(n, Fraction(x)) ** 2
                     * fam.weight_ratio(x)
                     for x in range(sup.a + 1, sup.b))
        return (boundary + expect) / norm.rational - 1
    if n == 0:
        # Delta P_0 = 0 identically; skip the truncation residue
        return Fraction(0)
    # w(x) P_n(x)^2 w(x-1)/w(x) = w(x-1) P_n(x)^2, i.e. a weighted square sum
    # of the shifted polynomial; the boundary term vanishes at infinity.
    shifted = shift_coeffs(fam.poly_coeffs(n), 1)
    total = truncated_weighted_square_sum(fam, shifted, trunc, dps)
    with mpmath.workdps(dps):
        return total / norm.to_float(dps) - 1


def fisher_expansion(fam: Family, n: int) -> Fraction:
    """Ladder route: exact rational for every family with rational parameters."""
    fam.check_degree(n)
    if n == 0:
        return Fraction(0)
    d_n = fam.reduced_norm(n)
    return sum(a * a * fam.reduced_norm(j).exact_ratio(d_n)
               for j, a in enumerate(fam.connection_coeffs(n)))


def fisher_closed(fam: Family, n: int, *, dps: int = DEFAULT_DPS,
                  accel_tol: Scalar = DEFAULT_ACCEL_TOL):
    """Per-family closed form; returns (value, converged).

    Charlier: n/mu.  Meixner and Kravchuk: a prefactor times a terminating
    2F1, exact.  Hahn: a sum of three factor products in which one 3F2 at -1
    does not terminate; it is Euler-accelerated and its convergence flag is
    passed through (the value is still reported when the flag is False).
    """
    fam.check_degree(n)
    if n == 0:
        return Fraction(0), True
    if isinstance(fam, Charlier):
        return Fraction(n) / fam.mu, True
    if isinstance(fam, Meixner):
        g, mu = fam.gamma, fam.mu
        value = (n * (1 - mu) ** 2 / (mu * (n + g - 1))
                 * terminating_pfq(PFQSpec((Fraction(1 - n), Fraction(1)),
                                           (2 - n - g,), mu)))
        return value, True
    if isinstance(fam, Kravchuk):
        p, N = fam.p, fam.N
        value = (Fraction(n, N - n + 1) / (p * (1 - p))
                 * terminating_pfq(PFQSpec((Fraction(1 - n), Fraction(1)),
                                           (Fraction(N - n + 2),), p / (p - 1))))
        return value, True
    if isinstance(fam, Hahn):
        return _hahn_closed(fam, n, dps, accel_tol)
    raise TypeError(f"unknown family {fam!r}")


def _hahn_closed(fam: Hahn, n: int, dps: int, accel_tol) -> Tuple[mpf, bool]:
    al, be, N = fam.alpha, fam.beta, fam.N
    s = al + be
    f1 = Fraction(math.factorial(n - 1))

    # Leading factor: every Gamma ratio pairs up with an integer argument
    # difference, so it reduces to Pochhammers and stays rational.
    lead = (Fraction(n * n) * (s + 2 * n + 1)
            * math.factorial(N - n - 1) / math.factorial(n)
            * pochhammer(s + n + 1, n) ** 2 * pochhammer(s + 2, N - 1)
            / (pochhammer(al + 1, n) * pochhammer(be + 1, n)
               * pochhammer(s + n + 1, N) * math.factorial(N - 1)))

    b1 = (f1 * (be + 1) * (s + N + 1)
          * pochhammer(-s - n - N, n - 1) * pochhammer(be + 2, n - 1)
          / (pochhammer(s + n + 2, n - 1) * pochhammer(-s - n - 1, n - 1)
             * (s + 2) * (N + be))) ** 2
    b2 = (Fraction(-1) ** (n - 1)
          * pochhammer(al + 1, n - 1) * pochhammer((s + 3) / 2, n - 1)
          * pochhammer(s + 1, n - 1) * pochhammer(Fraction(1 - N), n - 1)
          / (f1 * pochhammer((s + 1) / 2, n - 1) * pochhammer(be + 1, n - 1)
             * pochhammer(s + N + 1, n - 1)))
    b3 = terminating_pfq(PFQSpec(
        (Fraction(1 - n), Fraction(1), 1 - n - be, 1 - n - s - N,
         2 - n - (s + 1) / 2),
        (1 - n - al, 2 - n - (s + 3) / 2, 1 - n - s, Fraction(1 - n + N)),
        Fraction(-1)))

    c1 = (2 * Fraction(-1) ** n * f1 ** 2 * (be + 1) * (s + N + 1)
          * pochhammer(-s - n - N, n - 1)
          / (pochhammer(s + n + 2, n - 1) ** 2
             * pochhammer(-s - n - 1, n - 1) ** 2 * (s + 2) ** 2))
    # The two Gamma factors of the C product differ by the integer n-1 and
    # combine into (s+2)_(n-1); the remaining 3F2 at -1 does not terminate.
    c2 = (pochhammer(be + 2, n - 1) * (1 - N) * (al + 1)
          * pochhammer(-al - n, n - 1) * pochhammer(Fraction(2 - N), n - 1)
          * (s + 2 * n + 1)
          / (Fraction(math.factorial(n)) * (N + be) ** 2)
          ) * pochhammer(s + 2, n - 1)
    c3, converged = _accelerated_c3(s, n, dps, accel_tol)

    d1 = (f1 * (N - 1) * (al + 1)
          * pochhammer(-al - n, n - 1) * pochhammer(Fraction(2 - N), n - 1)
          / (pochhammer(s + n + 2, n - 1) * pochhammer(-s - n - 1, n - 1)
             * (s + 2) * (N + be))) ** 2
    d2 = (Fraction(-1) ** (n - 1)
          * pochhammer((s + 3) / 2, n - 1) * pochhammer(be + 1, n - 1)
          * pochhammer(s + N + 1, n - 1) * pochhammer(s + 1, n - 1)
          / (f1 * pochhammer(Fraction(1 - N), n - 1) * pochhammer(al + 1, n - 1)
             * pochhammer((s + 1) / 2, n - 1)))
    d3 = terminating_pfq(PFQSpec(
        (Fraction(1 - n), Fraction(1), Fraction(1 - n + N), 1 - n - al,
         2 - n - (s + 1) / 2),
        (2 - n - (s + 3) / 2, 1 - n - be, 1 - n - s - N, 1 - n - s),
        Fraction(-1)))

    terminating_part = b1 * b2 * b3 + d1 * d2 * d3
    with mpmath.workdps(dps):
        value = to_mpf(lead) * (to_mpf(terminating_part) + to_mpf(c1 * c2) * c3)
    return value, converged


@lru_cache(maxsize=None)
def _accelerated_c3(s: Fraction, n: int, dps: int, accel_tol) -> Tuple[mpf, bool]:
    # depends on the parameters only through s = alpha + beta and the degree
    spec = PFQSpec(
        (Fraction(1), (s + 3) / 2 + n, s + n + 1),
        (Fraction(n + 1), (s + 1) / 2 + n),
        Fraction(-1))
    return accelerated_pfq_at_minus_one(spec, tol=accel_tol, dps=dps)


# ---------------------------------------------------------------------------
# Density and cross-method report
# ---------------------------------------------------------------------------


def rakhmanov_density(fam: Family, n: int, x: int, *, dps: int = DEFAULT_DPS):
    """Probability mass w(x) P_n(x)^2 / d_n^2.

    Exact Fraction for bounded supports.  For the infinite-support families
    the normalization constant is irrational, so the value is an mpf; the
    rational part is computed exactly and rounded once.
    """
    fam.check_degree(n)
    weight = fam.reduced_weight(x)  # raises OutOfSupport
    p = fam.eval_poly(n, Fraction(x))
    numerator = weight * p * p
    norm = fam.reduced_norm(n)
    if fam.support().b is not None:
        return numerator / norm.rational
    with mpmath.workdps(dps):
        return to_mpf(numerator) / norm.to_float(dps)


_COMPUTE_ERRORS = (DenominatorPole, TruncationCapExceeded, OutOfSupport,
                   ZeroDivisionError, OverflowError)


@dataclass
class FisherReport:
    """Values of every requested route plus their worst pairwise discrepancy."""

    family: Family
    degree: int
    values: Dict[Method, Scalar]
    errors: Dict[Method, str]
    max_pairwise_rel_discrepancy: Optional[mpf]
    hahn_c3_converged: Optional[bool]


def fisher_report(fam: Family, n: int, trunc: TruncationPolicy = DEFAULT_TRUNCATION,
                  *, dps: int = DEFAULT_DPS, methods=None) -> FisherReport:
    """Run the requested routes (default: all four) and cross-compare.

    Per-route computational failures are recorded without aborting the
    remaining routes; degree/domain violations raise.
    """
    fam.check_degree(n)
    chosen = tuple(methods) if methods else tuple(Method)
    values: Dict[Method, Scalar] = {}
    errors: Dict[Method, str] = {}
    flag = None
    for method in chosen:
        try:
            if method is Method.DIRECT:
                values[method] = fisher_direct(fam, n, trunc, dps=dps)
            elif method is Method.DIFFERENCE:
                values[method] = fisher_difference(fam, n, trunc, dps=dps)
            elif method is Method.EXPANSION:
                values[method] = fisher_expansion(fam, n)
            elif method is Method.CLOSED:
                value, converged = fisher_closed(fam, n, dps=dps)
                values[method] = value
                if isinstance(fam, Hahn):
                    flag = converged
        except _COMPUTE_ERRORS as exc:
            errors[method] = f"{type(exc).__name__}: {exc}"
    discrepancy = None
    if len(values) >= 2:
        with mpmath.workdps(dps):
            floats = [to_mpf(v) for v in values.values()]
            discrepancy = mpf(0)
            for i in range(len(floats)):
                for j in range(i + 1, len(floats)):
                    scale = max(abs(floats[i]), abs(floats[j]))
                    if scale > 0:
                        gap = abs(floats[i] - floats[j]) / scale
                        if gap > discrepancy:
                            discrepancy = gap
    return FisherReport(fam, n, values, errors, discrepancy, flag)
