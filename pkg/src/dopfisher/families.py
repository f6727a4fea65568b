"""The four classical discrete orthogonal polynomial families.

Charlier, Meixner, Kravchuk and Hahn polynomials are handled in their monic
normalization, together with the data that drives every Fisher-information
formula: lattice support, weight, norm, second-order difference-equation
coefficients, three-term recurrence, ladder relations and the expansion of
the forward difference back into the same family.

Weights and norms are *reduced*: a per-family constant (e^-mu for Charlier,
Gamma(alpha+1)Gamma(beta+1) for Hahn, ...) is factored out so that every
quantity entering a ratio is an exact rational for rational parameters.
`NormValue` keeps the factored constant symbolically, so the big-float paths
can restore it and the exact paths can cancel it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Tuple

import mpmath
from mpmath import mpf

from .numerics import (
    DEFAULT_DPS,
    PFQSpec,
    Scalar,
    pochhammer,
    terminating_pfq,
    to_fraction,
    to_mpf,
)


class OutOfSupport(ValueError):
    """Lattice point outside the family's orthogonality support."""


class DegreeOutOfRange(ValueError):
    """Polynomial degree outside the family's admissible range."""


class ParameterDomainError(ValueError):
    """Family parameters outside their admissible domain."""


@dataclass(frozen=True)
class LatticeSupport:
    """Integer lattice [a, b) -- half-open so sums run x = a .. b-1.

    ``b is None`` encodes an infinite support.
    """

    a: int
    b: Optional[int]

    def contains(self, x: int) -> bool:
        return x >= self.a and (self.b is None or x < self.b)

    def points(self):
        if self.b is None:
            raise ValueError("cannot enumerate an infinite support")
        return range(self.a, self.b)


@dataclass(frozen=True)
class NormValue:
    """A reduced norm  rational * exp(exp_coeff) * pow_base**pow_expo.

    Only the Charlier and Meixner families carry a non-trivial symbolic part
    (e^mu and (1-mu)^-(gamma+2n) respectively); it cancels in every
    same-family ratio, which is what keeps the expansion route exact.
    """

    rational: Fraction
    exp_coeff: Fraction = Fraction(0)
    pow_base: Fraction = Fraction(1)
    pow_expo: Fraction = Fraction(0)

    def exact_ratio(self, other: "NormValue") -> Fraction:
        """self / other as an exact rational; raises if the symbolic parts
        do not cancel to an integer power."""
        if self.exp_coeff != other.exp_coeff:
            raise ValueError("exponential factors do not cancel")
        ratio = self.rational / other.rational
        expo = self.pow_expo - other.pow_expo
        if expo == 0:
            return ratio
        if self.pow_base != other.pow_base:
            raise ValueError("power bases differ")
        if expo.denominator != 1:
            raise ValueError("power factors leave a non-integer exponent")
        return ratio * self.pow_base ** int(expo)

    def to_float(self, dps: int = DEFAULT_DPS) -> mpf:
        with mpmath.workdps(dps):
            out = to_mpf(self.rational)
            if self.exp_coeff:
                out *= mpmath.exp(to_mpf(self.exp_coeff))
            if self.pow_expo:
                out *= mpmath.power(to_mpf(self.pow_base), to_mpf(self.pow_expo))
            return out


@dataclass(frozen=True)
class TableOneData:
    """Per-family data of the hypergeometric difference equation
    sigma(x) Delta Nabla P + tau(x) Delta P + lambda_n P = 0,
    plus support and the factored weight constant."""

    sigma: Tuple[Fraction, Fraction, Fraction]  # constant, linear, quadratic
    tau: Tuple[Fraction, Fraction]              # constant, linear
    lambda_of_n: Callable[[int], Fraction]
    reduced_weight_constant: str
    support: LatticeSupport


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Monic three-term recurrence data  P_{m+1} = (x - a_m) P_m - b_m P_{m-1}."""

    a_seq: Tuple[Fraction, ...]
    b_seq: Tuple[Fraction, ...]


class Family:
    """Shared machinery; concrete families supply the data hooks."""

    tag: str = ""

    # ---- data hooks ------------------------------------------------------

    def support(self) -> LatticeSupport:
        raise NotImplementedError

    def max_degree(self) -> Optional[int]:
        """Largest admissible degree, or None when unbounded."""
        return None

    def table_data(self) -> TableOneData:
        raise NotImplementedError

    def reduced_weight(self, x: int) -> Fraction:
        raise NotImplementedError

    def weight_ratio(self, x: int) -> Fraction:
        """w(x-1)/w(x) from the weight's closed form (never by dividing two
        weight evaluations, and never via the sigma/tau quotient)."""
        raise NotImplementedError

    def reduced_norm(self, n: int) -> NormValue:
        raise NotImplementedError

    def recurrence_a(self, m: int) -> Fraction:
        raise NotImplementedError

    def recurrence_b(self, m: int) -> Fraction:
        raise NotImplementedError

    def ladder_target(self, n: int) -> Tuple["Family", Fraction]:
        """Family G and factor c with  Delta P_n = c * G-polynomial of degree n-1."""
        raise NotImplementedError

    def connection_coeffs(self, n: int) -> list:
        """Coefficients a_j with  Delta P_n(x) = sum_j a_j P_j(x), j = 0..n-1,
        expanded in the *same* family."""
        raise NotImplementedError

    # ---- shared machinery --------------------------------------------------

    def check_degree(self, n: int) -> None:
        top = self.max_degree()
        if not isinstance(n, int) or n < 0 or (top is not None and n > top):
            raise DegreeOutOfRange(f"{self.tag}: degree {n} not in 0..{top}")

    def check_support(self, x) -> int:
        if not isinstance(x, int) or not self.support().contains(x):
            raise OutOfSupport(f"{self.tag}: lattice point {x} outside support")
        return x

    def check_ladder_degree(self, n: int) -> None:
        self.check_degree(n)
        if n < 1:
            raise DegreeOutOfRange(f"{self.tag}: ladder needs degree >= 1")

    def sigma(self, x) -> Fraction:
        c0, c1, c2 = self.table_data().sigma
        return c0 + c1 * x + c2 * x * x

    def tau(self, x) -> Fraction:
        c0, c1 = self.table_data().tau
        return c0 + c1 * x

    def lambda_n(self, n: int) -> Fraction:
        return self.table_data().lambda_of_n(n)

    def recurrence_coeffs(self, up_to: int) -> RecurrenceCoeffs:
        self.check_degree(up_to)
        return RecurrenceCoeffs(
            tuple(self.recurrence_a(m) for m in range(up_to + 1)),
            tuple(self.recurrence_b(m) for m in range(up_to + 1)),
        )

    def eval_poly(self, n: int, x: Scalar):
        """Monic degree-n polynomial value via the three-term recurrence.

        Exact for Fraction/int ``x``; big-float for mpf ``x`` (callers set
        the precision through an mpmath context).
        """
        self.check_degree(n)
        if n == 0:
            return x * 0 + 1
        prev = x * 0 + 1
        cur = x - self.recurrence_a(0)
        for m in range(1, n):
            prev, cur = cur, (x - self.recurrence_a(m)) * cur - self.recurrence_b(m) * prev
        return cur

    def forward_diff(self, n: int, x: Scalar):
        """Delta P_n(x) = P_n(x+1) - P_n(x)."""
        return self.eval_poly(n, x + 1) - self.eval_poly(n, x)

    def backward_diff(self, n: int, x: Scalar):
        """Nabla P_n(x) = P_n(x) - P_n(x-1)."""
        return self.eval_poly(n, x) - self.eval_poly(n, x - 1)

    def poly_coeffs(self, n: int) -> Tuple[Fraction, ...]:
        """Exact monomial coefficients of the monic degree-n polynomial."""
        self.check_degree(n)
        return _poly_coeffs(self, n)


@lru_cache(maxsize=None)
def _poly_coeffs(fam: Family, n: int) -> Tuple[Fraction, ...]:
    if n == 0:
        return (Fraction(1),)
    if n == 1:
        return (-fam.recurrence_a(0), Fraction(1))
    pm = _poly_coeffs(fam, n - 2)
    p = _poly_coeffs(fam, n - 1)
    a = fam.recurrence_a(n - 1)
    b = fam.recurrence_b(n - 1)
    out = [Fraction(0)] * (n + 1)
    for i, c in enumerate(p):
        out[i + 1] += c
        out[i] -= a * c
    for i, c in enumerate(pm):
        out[i] -= b * c
    return tuple(out)


def shift_coeffs(coeffs: Tuple[Fraction, ...], h: int = 1) -> Tuple[Fraction, ...]:
    """Coefficients of q(x) = p(x + h) by binomial expansion."""
    out = [Fraction(0)] * len(coeffs)
    for i, c in enumerate(coeffs):
        for k in range(i + 1):
            out[k] += c * math.comb(i, k) * Fraction(h) ** (i - k)
    return tuple(out)


def diff_coeffs(coeffs: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
    """Coefficients of the forward difference p(x+1) - p(x); degree drops by one."""
    shifted = shift_coeffs(coeffs, 1)
    out = [s - c for s, c in zip(shifted, coeffs)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


# ---------------------------------------------------------------------------
# Concrete families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Charlier(Family):
    """Monic Charlier polynomials; Poisson-type weight mu^x/x! on x = 0, 1, ..."""

    mu: Fraction

    tag = "charlier"

    def __post_init__(self):
        object.__setattr__(self, "mu", to_fraction(self.mu))
        if self.mu <= 0:
            raise ParameterDomainError("charlier: mu must be > 0")

    def support(self):
        return LatticeSupport(0, None)

    def table_data(self):
        return TableOneData(
            sigma=(Fraction(0), Fraction(1), Fraction(0)),
            tau=(self.mu, Fraction(-1)),
            lambda_of_n=lambda n: Fraction(n),
            reduced_weight_constant="exp(-mu)",
            support=self.support(),
        )

    def reduced_weight(self, x):
        x = self.check_support(x)
        return self.mu ** x / Fraction(math.factorial(x))

    def weight_ratio(self, x):
        x = self.check_support(x)
        if x < 1:
            raise OutOfSupport("weight ratio needs x >= 1")
        return Fraction(x) / self.mu

    def reduced_norm(self, n):
        self.check_degree(n)
        return NormValue(Fraction(math.factorial(n)) * self.mu ** n,
                         exp_coeff=self.mu)

    def recurrence_a(self, m):
        return m + self.mu

    def recurrence_b(self, m):
        return m * self.mu

    def ladder_target(self, n):
        self.check_ladder_degree(n)
        return self, Fraction(n)

    def connection_coeffs(self, n):
        self.check_degree(n)
        if n == 0:
            return []
        return [Fraction(0)] * (n - 1) + [Fraction(n)]


@dataclass(frozen=True)
class Meixner(Family):
    """Monic Meixner polynomials; negative-binomial weight mu^x (gamma)_x / x!."""

    gamma: Fraction
    mu: Fraction

    tag = "meixner"

    def __post_init__(self):
        object.__setattr__(self, "gamma", to_fraction(self.gamma))
        object.__setattr__(self, "mu", to_fraction(self.mu))
        if self.gamma <= 0:
            raise ParameterDomainError("meixner: gamma must be > 0")
        if not 0 < self.mu < 1:
            raise ParameterDomainError("meixner: mu must be in (0, 1)")

    def support(self):
        return LatticeSupport(0, None)

    def table_data(self):
        return TableOneData(
            sigma=(Fraction(0), Fraction(1), Fraction(0)),
            tau=(self.mu * self.gamma, self.mu - 1),
            lambda_of_n=lambda n: (1 - self.mu) * n,
            reduced_weight_constant="1/Gamma(gamma), absorbed: the weight is written with (gamma)_x",
            support=self.support(),
        )

    def reduced_weight(self, x):
        x = self.check_support(x)
        return self.mu ** x * pochhammer(self.gamma, x) / math.factorial(x)

    def weight_ratio(self, x):
        x = self.check_support(x)
        if x < 1:
            raise OutOfSupport("weight ratio needs x >= 1")
        return Fraction(x) / (self.mu * (self.gamma + x - 1))

    def reduced_norm(self, n):
        self.check_degree(n)
        rational = Fraction(math.factorial(n)) * pochhammer(self.gamma, n) * self.mu ** n
        return NormValue(rational, pow_base=1 - self.mu,
                         pow_expo=-(self.gamma + 2 * n))

    def recurrence_a(self, m):
        return (m + (m + self.gamma) * self.mu) / (1 - self.mu)

    def recurrence_b(self, m):
        return m * (m + self.gamma - 1) * self.mu / (1 - self.mu) ** 2

    def ladder_target(self, n):
        self.check_ladder_degree(n)
        return Meixner(self.gamma + 1, self.mu), Fraction(n)

    def connection_coeffs(self, n):
        self.check_degree(n)
        r = self.mu / (self.mu - 1)
        return [n * pochhammer(Fraction(j + 1), n - 1 - j) * r ** (n - 1 - j)
                for j in range(n)]


@dataclass(frozen=True)
class Kravchuk(Family):
    """Monic Kravchuk polynomials; binomial weight C(N,x) p^x (1-p)^(N-x) on x = 0..N."""

    p: Fraction
    N: int

    tag = "kravchuk"

    def __post_init__(self):
        object.__setattr__(self, "p", to_fraction(self.p))
        if not isinstance(self.N, int) or self.N < 1:
            raise ParameterDomainError("kravchuk: N must be a positive integer")
        if not 0 < self.p < 1:
            raise ParameterDomainError("kravchuk: p must be in (0, 1)")

    def support(self):
        # sums run x = 0 .. N inclusive
        return LatticeSupport(0, self.N + 1)

    def max_degree(self):
        return self.N - 1

    def table_data(self):
        q = 1 - self.p
        return TableOneData(
            sigma=(Fraction(0), Fraction(1), Fraction(0)),
            tau=(self.N * self.p / q, Fraction(-1) / q),
            lambda_of_n=lambda n: Fraction(n) / q,
            reduced_weight_constant="1",
            support=self.support(),
        )

    def reduced_weight(self, x):
        x = self.check_support(x)
        return math.comb(self.N, x) * self.p ** x * (1 - self.p) ** (self.N - x)

    def weight_ratio(self, x):
        x = self.check_support(x)
        if x < 1:
            raise OutOfSupport("weight ratio needs x >= 1")
        return Fraction(x) * (1 - self.p) / (self.p * (self.N - x + 1))

    def reduced_norm(self, n):
        self.check_degree(n)
        rational = (Fraction(math.factorial(n) * math.factorial(self.N),
                             math.factorial(self.N - n))
                    * self.p ** n * (1 - self.p) ** n)
        return NormValue(rational)

    def recurrence_a(self, m):
        return self.p * (self.N - m) + m * (1 - self.p)

    def recurrence_b(self, m):
        return m * self.p * (1 - self.p) * (self.N - m + 1)

    def ladder_target(self, n):
        self.check_ladder_degree(n)
        return Kravchuk(self.p, self.N - 1), Fraction(n)

    def connection_coeffs(self, n):
        self.check_degree(n)
        return [n * pochhammer(Fraction(j + 1), n - 1 - j) * self.p ** (n - 1 - j)
                for j in range(n)]


@dataclass(frozen=True)
class Hahn(Family):
    """Monic Hahn polynomials; hypergeometric-type weight on x = 0..N-1.

    The reduced weight is (alpha+1)_(N-1-x) (beta+1)_x / ((N-1-x)! x!).
    """

    alpha: Fraction
    beta: Fraction
    N: int

    tag = "hahn"

    def __post_init__(self):
        object.__setattr__(self, "alpha", to_fraction(self.alpha))
        object.__setattr__(self, "beta", to_fraction(self.beta))
        if not isinstance(self.N, int) or self.N < 1:
            raise ParameterDomainError("hahn: N must be a positive integer")
        # strict: the weight degenerates at alpha = -1 or beta = -1
        if self.alpha <= -1 or self.beta <= -1:
            raise ParameterDomainError("hahn: alpha and beta must be > -1")

    def support(self):
        # sums run x = 0 .. N-1 inclusive
        return LatticeSupport(0, self.N)

    def max_degree(self):
        return self.N - 1

    def table_data(self):
        al, be, N = self.alpha, self.beta, self.N
        return TableOneData(
            sigma=(Fraction(0), N + al, Fraction(-1)),
            tau=((be + 1) * (N - 1), -(al + be + 2)),
            lambda_of_n=lambda n: n * (n + al + be + 1),
            reduced_weight_constant="Gamma(alpha+1) * Gamma(beta+1)",
            support=self.support(),
        )

    def reduced_weight(self, x):
        x = self.check_support(x)
        return (pochhammer(self.alpha + 1, self.N - 1 - x)
                * pochhammer(self.beta + 1, x)
                / (math.factorial(self.N - 1 - x) * math.factorial(x)))

    def weight_ratio(self, x):
        x = self.check_support(x)
        if x < 1:
            raise OutOfSupport("weight ratio needs x >= 1")
        return (x * (self.N + self.alpha - x)
                / ((self.N - x) * (self.beta + x)))

    def reduced_norm(self, n):
        self.check_degree(n)
        al, be, N = self.alpha, self.beta, self.N
        s = al + be
        rational = (Fraction(math.factorial(n))
                    * pochhammer(al + 1, n) * pochhammer(be + 1, n)
                    * pochhammer(n + s + 1, N)
                    / ((2 * n + s + 1) * math.factorial(N - n - 1)
                       * pochhammer(n + s + 1, n) ** 2))
        return NormValue(rational)

    def _coef_A(self, m):
        al, be, N = self.alpha, self.beta, self.N
        s = al + be
        if m == 0:
            # the (s+1) factor cancels; written cancelled so s = -1 stays finite
            return (be + 1) * (N - 1) / (s + 2)
        return ((m + s + 1) * (m + be + 1) * (N - 1 - m)
                / ((2 * m + s + 1) * (2 * m + s + 2)))

    def _coef_C(self, m):
        al, be, N = self.alpha, self.beta, self.N
        s = al + be
        if m == 0:
            return Fraction(0)
        return (m * (m + s + N) * (m + al)
                / ((2 * m + s) * (2 * m + s + 1)))

    def recurrence_a(self, m):
        return self._coef_A(m) + self._coef_C(m)

    def recurrence_b(self, m):
        return self._coef_A(m - 1) * self._coef_C(m)

    def ladder_target(self, n):
        self.check_ladder_degree(n)
        return Hahn(self.alpha + 1, self.beta + 1, self.N - 1), Fraction(n)

    def connection_coeffs(self, n):
        self.check_degree(n)
        return list(_hahn_connection(self, n))


@lru_cache(maxsize=None)
def _hahn_connection(fam: Hahn, n: int) -> Tuple[Fraction, ...]:
    # Delta h_n re-expanded in the same (alpha, beta, N) family: prefactor
    # times a terminating 4F3 at unit argument, exact for rational parameters.
    al, be, N = fam.alpha, fam.beta, fam.N
    s = al + be
    out = []
    for j in range(n):
        m = n - 1 - j
        pref = (Fraction(math.comb(n - 1, j))
                * pochhammer(Fraction(2 + j - N), m)
                * pochhammer(2 + j + be, m)
                / pochhammer(2 + j + n + s, m))
        f43 = terminating_pfq(PFQSpec(
            (Fraction(j - n + 1), Fraction(1 + j - N), j + be + 1, 2 + n + j + s),
            (Fraction(2 + j - N), j + be + 2, 2 * j + s + 2),
            Fraction(1)))
        out.append(n * pref * f43)
    return tuple(out)


_TAGS = {"charlier": Charlier, "meixner": Meixner, "kravchuk": Kravchuk, "hahn": Hahn}

_REQUIRED = {
    "charlier": ("mu",),
    "meixner": ("gamma", "mu"),
    "kravchuk": ("p", "N"),
    "hahn": ("alpha", "beta", "N"),
}


def make_family(tag: str, **params) -> Family:
    """Build a family from its tag and named parameters.

    Raises ParameterDomainError for out-of-domain values and ValueError for
    unknown tags or missing/extra parameters.
    """
    tag = tag.lower()
    if tag not in _TAGS:
        raise ValueError(f"unknown family {tag!r}; choose from {sorted(_TAGS)}")
    required = _REQUIRED[tag]
    missing = [k for k in required if params.get(k) is None]
    extra = [k for k, v in params.items() if k not in required and v is not None]
    if missing:
        raise ValueError(f"{tag} requires parameters: {', '.join(missing)}")
    if extra:
        raise ValueError(f"{tag} does not take: {', '.join(sorted(extra))}")
    return _TAGS[tag](*(params[k] for k in required))
