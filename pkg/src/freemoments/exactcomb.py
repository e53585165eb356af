"""Exact integer and rational combinatorics.

Signed Stirling numbers of the first kind (falling-factorial convention,
``sum_k s(n, k) x^k = x (x-1) ... (x-n+1)``), factorial machinery, and the
exact double-sum identity check that underpins the moment recursion.  All
arithmetic in this module is integer or Fraction; no floats enter or leave.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Union

__all__ = [
    "LOG_SERIES_CAP",
    "StirlingTable",
    "stirling_first",
    "binomial",
    "generalized_binomial",
    "rising_factorial",
    "falling_factorial",
    "stirling_via_log_series",
    "IdentityCheck",
    "verify_stirling_identity",
    "alternating_binomial_sum_check",
]

#: Truncation cap for the log-series route; guards accidental huge requests.
LOG_SERIES_CAP = 512

Exact = Union[int, Fraction]


class StirlingTable:
    """Dense triangular table of signed Stirling numbers of the first kind.

    Row ``n`` holds ``s(n, 0), ..., s(n, n)`` built bottom-up from
    ``s(n + 1, k) = s(n, k - 1) - n * s(n, k)``.  Construction is the only
    mutating phase; a finished table can be shared across threads freely.
    """

    __slots__ = ("max_n", "_rows")

    def __init__(self, max_n: int) -> None:
        if max_n < 0:
            raise ValueError("max_n must be a natural number")
        rows: list[list[int]] = [[1]]
        for n in range(max_n):
            prev = rows[n]
            row = [0] * (n + 2)
            for k in range(1, n + 2):
                row[k] = prev[k - 1] - (n * prev[k] if k <= n else 0)
            rows.append(row)
        self.max_n = max_n
        self._rows = rows

    def value(self, n: int, k: int) -> int:
        """``s(n, k)``; zero above the diagonal, IndexError past ``max_n``."""
        if n < 0 or k < 0:
            raise ValueError("indices must be natural numbers")
        if k > n:
            return 0
        if n > self.max_n:
            raise IndexError(f"table holds n <= {self.max_n}, requested {n}")
        return self._rows[n][k]

    def row(self, n: int) -> tuple[int, ...]:
        if not 0 <= n <= self.max_n:
            raise IndexError(f"table holds n <= {self.max_n}, requested {n}")
        return tuple(self._rows[n])


_shared_table = StirlingTable(16)


def _table_for(n: int) -> StirlingTable:
    # grow geometrically so repeated scattered lookups stay amortized O(1)
    global _shared_table
    if n > _shared_table.max_n:
        _shared_table = StirlingTable(max(n, 2 * _shared_table.max_n))
    return _shared_table


def stirling_first(n: int, k: int) -> int:
    """Signed Stirling number of the first kind ``s(n, k)``.

    Memoized behind a module-level table; ``stirling_first(4, 2) == 11``.
    """
    if n < 0 or k < 0:
        raise ValueError("indices must be natural numbers")
    if k > n:
        return 0
    return _table_for(n).value(n, k)


def binomial(n: int, k: int) -> int:
    """``C(n, k)`` for naturals, zero when ``k > n``."""
    if n < 0 or k < 0:
        raise ValueError("binomial expects natural arguments")
    if k > n:
        return 0
    return math.comb(n, k)


def generalized_binomial(alpha: Union[Exact, complex], k: int) -> Union[Fraction, complex]:
    """``C(alpha, k) = alpha (alpha-1) ... (alpha-k+1) / k!`` for scalar alpha.

    Exact Fraction for int/Fraction input, complex otherwise; agrees with
    :func:`binomial` on natural alpha.
    """
    if k < 0:
        raise ValueError("k must be a natural number")
    if isinstance(alpha, int):
        alpha = Fraction(alpha)
    num = alpha - alpha + 1  # multiplicative unit in alpha's arithmetic
    for i in range(k):
        num = num * (alpha - i)
    return num / math.factorial(k)


def rising_factorial(x: Union[Exact, complex], n: int) -> Union[Exact, complex]:
    """``x (x+1) ... (x+n-1)``, empty product 1, in the arithmetic of ``x``."""
    if n < 0:
        raise ValueError("n must be a natural number")
    out = x - x + 1
    for i in range(n):
        out = out * (x + i)
    return out


def falling_factorial(x: Union[Exact, complex], n: int) -> Union[Exact, complex]:
    """``x (x-1) ... (x-n+1)``, empty product 1."""
    if n < 0:
        raise ValueError("n must be a natural number")
    out = x - x + 1
    for i in range(n):
        out = out * (x - i)
    return out


def _log1p_series(degree: int) -> list[Fraction]:
    # [z^m] log(1 + z) = (-1)^(m+1) / m for m >= 1
    out = [Fraction(0)] * (degree + 1)
    for m in range(1, degree + 1):
        out[m] = Fraction((-1) ** (m + 1), m)
    return out


def _series_multiply(a: list[Fraction], b: list[Fraction], degree: int) -> list[Fraction]:
    out = [Fraction(0)] * (degree + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j in range(degree - i + 1):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def stirling_via_log_series(n: int, k: int, *, cap: int = LOG_SERIES_CAP) -> Fraction:
    """``s(n, k)`` by coefficient extraction: ``(n!/k!) [z^n] log(1+z)^k``.

    Exact formal power series over Fraction, truncated at degree ``n``.
    Independent of the recurrence table, so the two routes check each other.
    """
    if n < 0 or k < 0:
        raise ValueError("indices must be natural numbers")
    if k > n:
        raise ValueError("log-series route requires k <= n")
    if n > cap:
        raise ValueError(f"series cap {cap} exceeded (n = {n})")
    base = _log1p_series(n)
    power = [Fraction(0)] * (n + 1)
    power[0] = Fraction(1)
    for _ in range(k):
        power = _series_multiply(power, base, n)
    return Fraction(math.factorial(n), math.factorial(k)) * power[n]


class IdentityCheck(NamedTuple):
    equal: bool
    lhs: Fraction
    rhs: Fraction


def verify_stirling_identity(l: int, m: int) -> IdentityCheck:
    """Exact check of ``2 l s(1+m, 1+l)`` against its inverted-binomial double sum.

    The right side sums, over ``1 <= n <= l`` and ``0 <= k <= m - 1``,

        C(m, k) C(m, 1+k) s(1+k, n) s(m-k, l+1-n) / C(l+m-2, n+k-1)

    scaled by ``(m+1)/(l+m-1)``.  Terms whose Stirling factor vanishes are
    skipped before the binomial is inverted, so the inverted binomial is only
    ever evaluated where the summand is genuinely nonzero; a vanishing
    binomial there would be a transcription bug and raises.
    """
    if l < 1 or m < 1:
        raise ValueError("identity range is l >= 1, m >= 1")
    lhs = Fraction(2 * l * stirling_first(1 + m, 1 + l))
    total = Fraction(0)
    for n in range(1, l + 1):
        for k in range(m):
            s_left = stirling_first(1 + k, n)
            if s_left == 0:
                continue
            s_right = stirling_first(m - k, l + 1 - n)
            if s_right == 0:
                continue
            denom = binomial(l + m - 2, n + k - 1)
            if denom == 0:
                raise ZeroDivisionError(
                    "inverted binomial vanished on a nonzero summand "
                    f"(l={l}, m={m}, n={n}, k={k})"
                )
            total += Fraction(
                binomial(m, k) * binomial(m, 1 + k) * s_left * s_right, denom
            )
    rhs = Fraction(m + 1, l + m - 1) * total
    return IdentityCheck(lhs == rhs, lhs, rhs)


def alternating_binomial_sum_check(N: int, k: int) -> bool:
    """Exact check of ``sum_{n=0}^{k} (-1)^n C(N, n) == (-1)^k C(N-1, k)``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 <= k <= N:
        raise ValueError("k must lie in 0..N")
    lhs = sum((-1) ** n * binomial(N, n) for n in range(k + 1))
    return lhs == (-1) ** k * binomial(N - 1, k)
