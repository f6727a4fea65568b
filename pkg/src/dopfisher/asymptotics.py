"""Limiting behaviour of the Fisher values in degree and parameters.

These are the closed limit formulas used both as standalone evaluators and as
convergence cross-checks against the exact expansion route.  All of them are
exact rationals for rational inputs.  The Charlier value n/mu is already
elementary, so only the Meixner and Kravchuk regimes appear here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from .numerics import PFQSpec, pochhammer, terminating_pfq, to_fraction


def meixner_large_n(gamma, mu, n: int) -> Fraction:
    """Degree asymptote (1-mu)/mu + (1-gamma)/n."""
    gamma, mu = to_fraction(gamma), to_fraction(mu)
    return (1 - mu) / mu + Fraction(1 - gamma, 1) / n


def meixner_mu_to_one(gamma, n: int, mu) -> Fraction:
    """mu -> 1 asymptote: [n/(n+gamma-1)] 2F1(1-n, 1; 2-n-gamma; 1) (1-mu)^2."""
    gamma, mu = to_fraction(gamma), to_fraction(mu)
    f21 = terminating_pfq(PFQSpec((Fraction(1 - n), Fraction(1)),
                                  (2 - n - gamma,), Fraction(1)))
    return Fraction(n) / (n + gamma - 1) * f21 * (1 - mu) ** 2


def meixner_mu_to_zero(gamma, n: int, mu) -> Fraction:
    """mu -> 0 asymptote: n / ((n+gamma-1) mu)."""
    gamma, mu = to_fraction(gamma), to_fraction(mu)
    return Fraction(n) / ((n + gamma - 1) * mu)


def meixner_gamma_to_infinity(n: int, mu, gamma) -> Fraction:
    """gamma -> infinity asymptote: n (1-mu)^2 / (mu gamma)."""
    gamma, mu = to_fraction(gamma), to_fraction(mu)
    return n * (1 - mu) ** 2 / (mu * gamma)


def meixner_gamma_to_zero(n: int, mu, gamma) -> Fraction:
    """gamma -> 0 asymptote: (n/gamma) (1-mu)^2 mu^(n-2)."""
    gamma, mu = to_fraction(gamma), to_fraction(mu)
    return Fraction(n) / gamma * (1 - mu) ** 2 * mu ** (n - 2)


def kravchuk_p_to_zero(n: int, N: int, p) -> Fraction:
    """p -> 0 asymptote: n / ((N-n+1) p)."""
    return Fraction(n) / ((N - n + 1) * to_fraction(p))


def kravchuk_p_to_one(n: int, N: int, p) -> Fraction:
    """p -> 1 asymptote: n! / ((N-n+1)_n (1-p)^n)."""
    p = to_fraction(p)
    fact = Fraction(1)
    for i in range(2, n + 1):
        fact *= i
    return fact / (pochhammer(Fraction(N - n + 1), n) * (1 - p) ** n)


def kravchuk_max_degree(N: int, p) -> Fraction:
    """Exact value at the top degree n = N-1:  ((1-p)^(1-N) + (1-N)p - 1) / (N p^3)."""
    p = to_fraction(p)
    return ((1 - p) ** (1 - N) + (1 - N) * p - 1) / (N * p ** 3)


def kravchuk_max_degree_large_N(N: int, p) -> Fraction:
    """Large-N growth of the top-degree value: 1 / (N (1-p)^(N-1) p^3)."""
    p = to_fraction(p)
    return 1 / (N * (1 - p) ** (N - 1) * p ** 3)


#: limit variables admissible per family
_VARIABLES: Dict[str, Tuple[str, ...]] = {
    "meixner": ("n->inf", "mu->0", "mu->1", "gamma->0", "gamma->inf"),
    "kravchuk": ("p->0", "p->1", "max-degree", "N->inf"),
}


@dataclass(frozen=True)
class AsymptoteSpec:
    """A named limiting regime of one family, with its fixed parameters."""

    family: str
    variable: str
    fixed: Tuple[Tuple[str, Fraction], ...]

    def __post_init__(self):
        allowed = _VARIABLES.get(self.family, ())
        if self.variable not in allowed:
            raise ValueError(
                f"{self.family} has no {self.variable!r} regime; choose from {allowed}")

    def evaluate(self, **point) -> Fraction:
        """Evaluate the asymptote at the given values of the moving variables."""
        args = dict(self.fixed)
        args.update(point)
        if self.family == "meixner":
            table = {
                "n->inf": lambda: meixner_large_n(args["gamma"], args["mu"], args["n"]),
                "mu->0": lambda: meixner_mu_to_zero(args["gamma"], args["n"], args["mu"]),
                "mu->1": lambda: meixner_mu_to_one(args["gamma"], args["n"], args["mu"]),
                "gamma->0": lambda: meixner_gamma_to_zero(args["n"], args["mu"], args["gamma"]),
                "gamma->inf": lambda: meixner_gamma_to_infinity(args["n"], args["mu"], args["gamma"]),
            }
        else:
            table = {
                "p->0": lambda: kravchuk_p_to_zero(args["n"], args["N"], args["p"]),
                "p->1": lambda: kravchuk_p_to_one(args["n"], args["N"], args["p"]),
                "max-degree": lambda: kravchuk_max_degree(args["N"], args["p"]),
                "N->inf": lambda: kravchuk_max_degree_large_N(args["N"], args["p"]),
            }
        return table[self.variable]()
