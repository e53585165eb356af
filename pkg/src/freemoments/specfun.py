"""Confluent hypergeometric series, Laguerre polynomials, and their oracles.

The series evaluator is the workhorse; the Euler-type integral and the exact
beta integral exist as independent routes so that tests can confront the
series with quadrature instead of with itself.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from scipy import integrate

__all__ = [
    "SeriesConvergenceError",
    "SeriesPolicy",
    "DEFAULT_POLICY",
    "laguerre",
    "kummer_1f1",
    "kummer_transform_check",
    "euler_integral_1f1",
    "beta_integral_exact",
]

Scalar = Union[int, float, complex, Fraction]


class SeriesConvergenceError(ArithmeticError):
    """A series or quadrature failed to reach its requested tolerance."""


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation contract for series evaluation.

    A term is "small" when ``|term| <= relative_tolerance * |partial sum|``;
    summation stops after two consecutive small terms (a single small term can
    be an alternating-series accident) and raises past ``max_terms``.
    """

    relative_tolerance: float = 1e-15
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not 0.0 < self.relative_tolerance < 1.0:
            raise ValueError("relative_tolerance must lie in (0, 1)")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")


DEFAULT_POLICY = SeriesPolicy()


def _real_binomial(top: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= (top - i) / (i + 1)
    return out


def laguerre(n: int, alpha: float, x: float) -> float:
    """Generalized Laguerre polynomial ``L_n^(alpha)(x)`` by its explicit sum.

    ``sum_{j=0}^{n} C(n + alpha, n - j) (-x)^j / j!``; exact finite sum, no
    recurrences, so it can serve as a cross-check for the hypergeometric
    route.
    """
    if n < 0:
        raise ValueError("degree must be a natural number")
    total = 0.0
    for j in range(n + 1):
        total += _real_binomial(n + alpha, n - j) * (-x) ** j / math.factorial(j)
    return total


def _nonpositive_integer(value: complex) -> Union[int, None]:
    """Return ``N >= 0`` with ``value == -N`` if value is a nonpositive integer."""
    if value.imag != 0.0:
        return None
    r = value.real
    if r > 0 or r != int(r):
        return None
    return -int(r)


def _series_1f1(a: complex, b: complex, x: complex, policy: SeriesPolicy) -> complex:
    term = 1 + 0j
    total = term
    small_streak = 0
    for j in range(policy.max_terms):
        term = term * (a + j) * x / ((b + j) * (j + 1))
        total += term
        if abs(term) <= policy.relative_tolerance * abs(total):
            small_streak += 1
            if small_streak >= 2:
                return total
        else:
            small_streak = 0
    raise SeriesConvergenceError(
        f"hypergeometric series did not settle within {policy.max_terms} terms "
        f"(a={a}, b={b}, x={x})"
    )


def _polynomial_1f1(a: complex, b: complex, x: complex, n_terms: int) -> complex:
    # a = -N: the series terminates at j = N, summed here without a stop rule
    term = 1 + 0j
    total = term
    for j in range(n_terms):
        term = term * (a + j) * x / ((b + j) * (j + 1))
        total += term
    return total


def kummer_1f1(a: Scalar, b: Scalar, x: Scalar, policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Confluent hypergeometric function ``sum_j (a)_j / (b)_j x^j / j!``.

    Rising-factorial convention via the term recursion
    ``term_{j+1} = term_j (a+j) x / ((b+j)(j+1))``.  Nonpositive-integer ``a``
    takes the exact polynomial path; for strongly negative real part the
    reflection ``e^x 1F1(b-a; b; -x)`` avoids alternating-series cancellation.
    Nonpositive-integer ``b`` is a pole unless the numerator terminates first.
    """
    a, b, x = complex(a), complex(b), complex(x)
    pole_a = _nonpositive_integer(a)
    pole_b = _nonpositive_integer(b)
    if pole_b is not None and (pole_a is None or pole_a > pole_b):
        raise ValueError(f"1F1 pole: b = {b} is a nonpositive integer")
    if pole_a is not None:
        return _polynomial_1f1(a, b, x, pole_a)
    if x.real < -1.0:
        return cmath.exp(x) * kummer_1f1(b - a, b, -x, policy)
    return _series_1f1(a, b, x, policy)


def kummer_transform_check(
    a: Scalar, b: Scalar, x: Scalar, *, tolerance: float = 1e-10
) -> bool:
    """Whether ``1F1(a; b; x)`` equals ``e^x 1F1(b-a; b; -x)`` numerically.

    The right side is forced through the raw series (no reflection), so the
    two sides are genuinely distinct computations; compared at relative scale
    ``1 + |lhs|``.
    """
    a, b, x = complex(a), complex(b), complex(x)
    lhs = kummer_1f1(a, b, x)
    mirrored = b - a
    pole = _nonpositive_integer(mirrored)
    if pole is not None:
        rhs_core = _polynomial_1f1(mirrored, b, -x, pole)
    else:
        rhs_core = _series_1f1(mirrored, b, -x, DEFAULT_POLICY)
    rhs = cmath.exp(x) * rhs_core
    return abs(lhs - rhs) <= tolerance * (1 + abs(lhs))


def _gamma_positive(v: float) -> float:
    if v <= 0:
        raise ValueError("gamma helper requires a positive argument")
    if float(v).is_integer():
        return float(math.factorial(int(v) - 1))
    return math.gamma(v)


def euler_integral_1f1(a: float, b: float, x: float, *, tolerance: float = 1e-12) -> float:
    """``1F1(a; b; x)`` through the beta-weighted exponential integral.

    ``Gamma(b) / (Gamma(a) Gamma(b-a)) * int_0^1 u^(a-1) (1-u)^(b-a-1) e^(ux) du``
    for ``b > a > 0``; adaptive quadrature, independent of the series route.
    """
    if not (a > 0 and b > a):
        raise ValueError("integral representation requires b > a > 0")
    prefactor = _gamma_positive(b) / (_gamma_positive(a) * _gamma_positive(b - a))

    def integrand(u: float) -> float:
        return u ** (a - 1.0) * (1.0 - u) ** (b - a - 1.0) * math.exp(u * x)

    value, abserr = integrate.quad(
        integrand, 0.0, 1.0, epsabs=tolerance, epsrel=tolerance, limit=200
    )
    if abserr > 1e-9 * max(1.0, abs(value)):
        raise SeriesConvergenceError(
            f"quadrature error estimate {abserr:.3e} too large (a={a}, b={b}, x={x})"
        )
    return prefactor * value


def beta_integral_exact(n: int, k: int) -> Fraction:
    """Exact ``int_0^1 t^n (1-t)^k dt = n! k! / (n+k+1)!``.

    Equivalently ``1 / ((n+k+1) C(n+k, n))``.  A tempting wrong constant is
    ``1 / ((n+k-1) C(n+k, n))``, which already fails at ``n = k = 1`` (the
    integral is 1/6, not 1/2); the quadrature tests pin the value used here.
    """
    if n < 0 or k < 0:
        raise ValueError("exponents must be natural numbers")
    return Fraction(
        math.factorial(n) * math.factorial(k), math.factorial(n + k + 1)
    )
