"""Moment engines.

Exact moments (as polynomials in the time parameter, or as rationals for
fixed rational parameters) of free additive convolutions of a semicircle, a
uniform law, and point masses; moments of the free log-normal spectral law in
Laguerre and confluent-hypergeometric form; and the moment-level identity
check tying the two families together through the exponential map.

Two deliberately independent routes exist for the time-coupled moments: a
closed form in Stirling numbers and a quadratic recursion derived from the
time evolution of the pair.  The recursion route never touches Stirling
numbers, so the two implementations can act as oracles for each other.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exactcomb import stirling_first
from .measures import (
    Dirac,
    ExpImage,
    FreeLogNormal,
    FreeSum,
    MeasureSpec,
    Scaled,
    Semicircle,
    Uniform,
)
from .ratpoly import RationalPolynomial
from .specfun import DEFAULT_POLICY, SeriesPolicy, kummer_1f1, laguerre

__all__ = [
    "moment_polynomial",
    "moment_polynomials_from_recursion",
    "semicircle_uniform_moment",
    "free_lognormal_moment",
    "free_lognormal_moment_alpha",
    "free_lognormal_moment_alpha_series",
    "additive_mgf",
    "additive_mgf_series",
    "MomentAgreement",
    "verify_exp_image_moments",
    "moment",
    "mgf",
]

ExactScalar = Union[int, Fraction]


def moment_polynomial(n: int) -> RationalPolynomial:
    """n-th moment of ``Semicircle(2 sqrt(t)) boxplus Uniform[-t, 0]`` in ``t``.

    Closed form ``n! sum_j t^j s(1+j, n+1-j) / (j! (1+j)!)`` with ``j``
    running from ``ceil(n/2)`` to ``n``; exact rational coefficients.
    """
    if n < 0:
        raise ValueError("order must be a natural number")
    coeffs = [Fraction(0)] * (n + 1)
    n_fact = math.factorial(n)
    for j in range((n + 1) // 2, n + 1):
        s = stirling_first(1 + j, n + 1 - j)
        if s:
            coeffs[j] = Fraction(n_fact * s, math.factorial(j) * math.factorial(1 + j))
    return RationalPolynomial(coeffs)


def moment_polynomials_from_recursion(n_max: int) -> list[RationalPolynomial]:
    """Moment polynomials ``m_0 .. m_{n_max}`` from the quadratic recursion.

    Coefficients ``c(n, k)`` of ``t^k`` in ``m_n`` satisfy

        (n - k) c(n, k) = (n/2) sum_{l<k} sum_{1<=j<=n-k}
                          c(j+l-1, l) c(n-l-j-1, k-1-l)

    seeded by ``c(0, 0) = 1``, ``c(n, 0) = 0`` and closed by the diagonal
    ``c(n, n) = (-1)^n / (1 + n)``.  No Stirling numbers anywhere, which is
    the point: this is the oracle for :func:`moment_polynomial`.
    """
    if n_max < 0:
        raise ValueError("order must be a natural number")
    table: list[list[Fraction]] = []
    for n in range(n_max + 1):
        row = [Fraction(0)] * (n + 1)
        if n == 0:
            row[0] = Fraction(1)
        else:
            row[n] = Fraction((-1) ** n, 1 + n)
            for k in range(1, n):
                acc = Fraction(0)
                for l in range(k):
                    for j in range(1, n - k + 1):
                        acc += table[j + l - 1][l] * table[n - l - j - 1][k - 1 - l]
                row[k] = Fraction(n, 2 * (n - k)) * acc
        table.append(row)
    return [RationalPolynomial(row) for row in table]


def semicircle_uniform_moment(
    n: int, a: ExactScalar, b: ExactScalar, c: ExactScalar
) -> Fraction:
    """Exact n-th moment of ``Semicircle(2 sqrt(a)) boxplus Uniform[b, c]``.

    ``a > 0``, ``b <= c`` (``b == c`` collapses the uniform to a point mass).
    The closed form is an outer binomial shift by ``c`` of the inner Stirling
    sum in the interval width; ``0^0 = 1`` conventions apply throughout.
    """
    if n < 0:
        raise ValueError("order must be a natural number")
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a <= 0:
        raise ValueError("semicircle variance parameter must be positive")
    if b > c:
        raise ValueError("need b <= c")
    width = c - b
    total = Fraction(0)
    for k in range(n + 1):
        inner = Fraction(0)
        for j in range((k + 1) // 2, k + 1):
            s = stirling_first(1 + j, k + 1 - j)
            if s:
                inner += (
                    Fraction(s, math.factorial(j) * math.factorial(1 + j))
                    * width ** (2 * j - k)
                    * a ** (k - j)
                )
        if inner:
            total += Fraction(c ** (n - k), math.factorial(n - k)) * inner
    return math.factorial(n) * total


def free_lognormal_moment(n: int, t: float) -> float:
    """n-th moment ``e^(nt/2) L_{n-1}^{(1)}(-nt) / n`` of the free log-normal law."""
    if n < 1:
        raise ValueError("order must be a positive integer")
    if t <= 0:
        raise ValueError("time must be positive")
    return math.exp(n * t / 2.0) * laguerre(n - 1, 1.0, -n * t) / n


def free_lognormal_moment_alpha(
    alpha: complex,
    t: float,
    policy: SeriesPolicy = DEFAULT_POLICY,
    *,
    cross_check_tolerance: float = 1e-10,
) -> complex:
    """Fractional moment ``e^(alpha t / 2) 1F1(1 - alpha; 2; -alpha t)``.

    Evaluates the equivalent generalized-binomial series as well and raises
    if the two routes disagree beyond ``cross_check_tolerance`` relative to
    ``1 + |value|``; real positive and negative alpha are both fine.
    """
    alpha = complex(alpha)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if t <= 0:
        raise ValueError("time must be positive")
    value = cmath.exp(alpha * t / 2.0) * kummer_1f1(1 - alpha, 2.0, -alpha * t, policy)
    series = free_lognormal_moment_alpha_series(alpha, t, policy)
    if abs(value - series) > cross_check_tolerance * (1 + abs(value)):
        raise ArithmeticError(
            f"fractional-moment routes disagree at alpha={alpha}, t={t}: "
            f"{value} vs {series}"
        )
    return value


def free_lognormal_moment_alpha_series(
    alpha: complex, t: float, policy: SeriesPolicy = DEFAULT_POLICY
) -> complex:
    """Fractional moment via ``e^(alpha t/2) (1/alpha) sum_j C(alpha, 1+j) (alpha t)^j / j!``."""
    alpha = complex(alpha)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if t <= 0:
        raise ValueError("time must be positive")
    term = alpha  # j = 0 contribution C(alpha, 1)
    total = term
    small_streak = 0
    for j in range(policy.max_terms):
        term = term * (alpha - 1 - j) / (2 + j) * (alpha * t) / (j + 1)
        total += term
        if abs(term) <= policy.relative_tolerance * abs(total):
            small_streak += 1
            if small_streak >= 2:
                break
        else:
            small_streak = 0
    else:
        raise ArithmeticError(
            f"binomial moment series did not settle (alpha={alpha}, t={t})"
        )
    return cmath.exp(alpha * t / 2.0) * total / alpha


def additive_mgf(
    alpha: complex, t: float, policy: SeriesPolicy = DEFAULT_POLICY
) -> complex:
    """``E[e^(alpha X)]`` for ``X ~ Semicircle(2 sqrt(t)) boxplus Uniform[-t, 0]``.

    Closed form ``1F1(1 - alpha; 2; -alpha t)``; at integer ``alpha = n`` this
    matches ``e^(-nt/2)`` times the n-th free log-normal moment.
    """
    if t <= 0:
        raise ValueError("time must be positive")
    alpha = complex(alpha)
    if alpha == 0:
        return 1 + 0j
    return kummer_1f1(1 - alpha, 2.0, -alpha * t, policy)


def additive_mgf_series(
    alpha: complex, t: float, orders: int = 40
) -> tuple[complex, float]:
    """Truncated ``sum_k alpha^k m_k(t) / k!`` with a crude remainder estimate.

    Returns ``(value, |last term|)``; a slowly decaying last term means the
    truncation order was too small for the requested ``(alpha, t)``.
    """
    if orders < 0:
        raise ValueError("orders must be a natural number")
    alpha = complex(alpha)
    total = 0 + 0j
    last = 0.0
    for k in range(orders + 1):
        term = alpha**k * moment_polynomial(k)(float(t)) / math.factorial(k)
        total += term
        last = abs(term)
    return total, last


@dataclass(frozen=True)
class MomentAgreement:
    """Side-by-side integer moments of the free log-normal law via two routes."""

    time: float
    orders: tuple[int, ...]
    laguerre_values: tuple[float, ...]
    hypergeometric_values: tuple[float, ...]
    deviations: tuple[float, ...]
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations) if self.deviations else 0.0

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def verify_exp_image_moments(
    n_max: int, t: float, tolerance: float = 1e-10
) -> MomentAgreement:
    """Check ``e^(nt/2) 1F1(1-n; 2; -nt)`` against the Laguerre moments.

    Deviations are measured relative to ``1 + |value|`` for ``n = 1 .. n_max``.
    """
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    orders = tuple(range(1, n_max + 1))
    via_laguerre = []
    via_1f1 = []
    deviations = []
    for n in orders:
        lag = free_lognormal_moment(n, t)
        hyp = math.exp(n * t / 2.0) * additive_mgf(n, t).real
        via_laguerre.append(lag)
        via_1f1.append(hyp)
        deviations.append(abs(lag - hyp) / (1 + abs(lag)))
    return MomentAgreement(
        time=float(t),
        orders=orders,
        laguerre_values=tuple(via_laguerre),
        hypergeometric_values=tuple(via_1f1),
        deviations=tuple(deviations),
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# dispatch over measure specifications


def _flatten_free_sum(parts) -> list[MeasureSpec]:
    flat: list[MeasureSpec] = []
    for part in parts:
        if isinstance(part, FreeSum):
            flat.extend(_flatten_free_sum(part.parts))
        else:
            flat.append(part)
    return flat


def _free_sum_components(parts):
    """Split a free sum into (semicircle | None, uniform | None, shift)."""
    semicircle = None
    uniform = None
    shift = Fraction(0)
    for part in _flatten_free_sum(parts):
        if isinstance(part, Semicircle):
            if semicircle is not None:
                raise ValueError("free sum supports at most one semicircle part")
            semicircle = part
        elif isinstance(part, Uniform):
            if part.lo == part.hi:
                shift += Fraction(part.lo)
                continue
            if uniform is not None:
                raise ValueError("free sum supports at most one uniform part")
            uniform = part
        elif isinstance(part, Dirac):
            shift += Fraction(part.center)
        else:
            raise ValueError(
                "free sum moments cover semicircle, uniform, and point-mass "
                f"parts only, got {type(part).__name__}"
            )
    return semicircle, uniform, shift


def moment(measure: MeasureSpec, order: int) -> Union[Fraction, float]:
    """n-th moment of a measure specification.

    Exact Fraction for the polynomial family (semicircle, uniform, point
    masses, their scalings and free sums); float for exponential images and
    the free log-normal law.
    """
    if order < 0:
        raise ValueError("order must be a natural number")
    if isinstance(measure, Semicircle):
        if order % 2:
            return Fraction(0)
        k = order // 2
        catalan = Fraction(math.comb(2 * k, k), k + 1)
        return catalan * (Fraction(measure.radius) / 2) ** order
    if isinstance(measure, Uniform):
        lo, hi = Fraction(measure.lo), Fraction(measure.hi)
        if lo == hi:
            return lo**order
        return (hi ** (order + 1) - lo ** (order + 1)) / ((order + 1) * (hi - lo))
    if isinstance(measure, Dirac):
        return Fraction(measure.center) ** order
    if isinstance(measure, Scaled):
        return Fraction(measure.factor) ** order * moment(measure.inner, order)
    if isinstance(measure, FreeSum):
        return _free_sum_moment(measure, order)
    if isinstance(measure, ExpImage):
        if order == 0:
            return 1.0
        return mgf(measure.inner, order).real
    if isinstance(measure, FreeLogNormal):
        if order == 0:
            return 1.0
        return free_lognormal_moment(order, float(measure.time))
    raise TypeError(f"unsupported measure {type(measure).__name__}")


def _free_sum_moment(measure: FreeSum, order: int) -> Fraction:
    semicircle, uniform, shift = _free_sum_components(measure.parts)
    if semicircle is None and uniform is None:
        return shift**order
    if semicircle is None:
        lo, hi = Fraction(uniform.lo) + shift, Fraction(uniform.hi) + shift
        return moment(Uniform(lo, hi), order)
    a = (Fraction(semicircle.radius) / 2) ** 2
    if uniform is None:
        return semicircle_uniform_moment(order, a, shift, shift)
    return semicircle_uniform_moment(
        order, a, Fraction(uniform.lo) + shift, Fraction(uniform.hi) + shift
    )


def _semicircle_mgf(radius: float, alpha: complex, policy: SeriesPolicy) -> complex:
    # sum_k (x^k / (k! (k+1)!)) with x = (radius * alpha / 2)^2
    x = (radius * alpha / 2.0) ** 2
    term = 1 + 0j
    total = term
    for k in range(policy.max_terms):
        term = term * x / ((k + 1) * (k + 2))
        total += term
        if abs(term) <= policy.relative_tolerance * abs(total):
            return total
    raise ArithmeticError("semicircle exponential series did not settle")


def mgf(
    measure: MeasureSpec, alpha: complex, policy: SeriesPolicy = DEFAULT_POLICY
) -> complex:
    """``E[e^(alpha X)]`` for the polynomial measure family.

    Free sums of a semicircle with a uniform law reduce to the closed
    hypergeometric form by rescaling onto the time-coupled pair; exponential
    images and the free log-normal law are out of scope here (their linear
    moments live in :func:`moment`).
    """
    alpha = complex(alpha)
    if isinstance(measure, Dirac):
        return cmath.exp(alpha * complex(measure.center))
    if isinstance(measure, Uniform):
        lo, hi = float(measure.lo), float(measure.hi)
        if lo == hi or alpha == 0:
            return cmath.exp(alpha * lo) if lo == hi else 1 + 0j
        return (cmath.exp(alpha * hi) - cmath.exp(alpha * lo)) / (alpha * (hi - lo))
    if isinstance(measure, Semicircle):
        return _semicircle_mgf(float(measure.radius), alpha, policy)
    if isinstance(measure, Scaled):
        return mgf(measure.inner, alpha * complex(measure.factor), policy)
    if isinstance(measure, FreeSum):
        semicircle, uniform, shift = _free_sum_components(measure.parts)
        shift_factor = cmath.exp(alpha * float(shift))
        if semicircle is None and uniform is None:
            return shift_factor
        if semicircle is None:
            return shift_factor * mgf(uniform, alpha, policy)
        if uniform is None:
            return shift_factor * _semicircle_mgf(float(semicircle.radius), alpha, policy)
        a = (float(semicircle.radius) / 2.0) ** 2
        width = float(uniform.hi) - float(uniform.lo)
        gamma = a / width
        tau = width * width / a
        upper = cmath.exp(alpha * float(uniform.hi))
        return shift_factor * upper * additive_mgf(alpha * gamma, tau, policy)
    raise TypeError(
        f"exponential moments not defined here for {type(measure).__name__}"
    )
