"""Truncated power-series solution of the time kernel equation.

T(u, v) = sum alpha_{m,n} u^m v^n, filled from the coefficient recurrence,
and the order-split tables alpha^{(s)}_{m,j} whose s-th slice builds the
s-th quantum correction.  Tables can be computed in floats or in exact
rationals (``exact=True``) for oracle runs.
"""

import logging
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P

import config
from errors import ConfigError, DomainError, TruncationWarning
from potential import PotentialSeries

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AlphaTable:
    """alpha_{m,n} for 0 <= m <= M, 0 <= n <= N."""

    values: np.ndarray
    M: int
    N: int
    potential_id: str
    coupling: object
    exact: bool = False


@dataclass(frozen=True, eq=False)
class AlphaOrderTable:
    """alpha^{(s)}_{m,j} stored as values[s, m, j], 0 <= s <= J - 1."""

    values: np.ndarray
    M: int
    J: int
    potential_id: str
    coupling: object
    exact: bool = False

    def order(self, s: int) -> np.ndarray:
        if s < 0 or s >= self.J:
            raise DomainError(f"order {s} outside table range 0..{self.J - 1}")
        return self.values[s]


class SeriesValue(NamedTuple):
    value: float
    boundary: float


def _arithmetic(V: PotentialSeries, exact: bool):
    """Coefficients, coupling and a zero-filled table factory in the chosen arithmetic."""
    if exact:
        coeffs = [Fraction(a) for a in V.coefficients]
        coupling = Fraction(V.mass) / (2 * Fraction(V.hbar) ** 2)

        def zeros(shape):
            table = np.empty(shape, dtype=object)
            table.fill(Fraction(0))
            return table

        return coeffs, coupling, zeros, Fraction(1, 4)
    return list(V.coefficients), V.coupling, lambda shape: np.zeros(shape), 0.25


def _check_orders(*orders):
    for n in orders:
        if n < 1:
            raise ConfigError("table truncation orders must be >= 1")
        if n > config.ALPHA_MAX_ORDER:
            raise ConfigError(f"table order {n} exceeds cap {config.ALPHA_MAX_ORDER}")


def build_alpha(V: PotentialSeries, M: int, N: int, exact: bool = False) -> AlphaTable:
    """Fill alpha_{m,n} from the recurrence in n; odd n stay zero."""
    _check_orders(M, N)
    a, c, zeros, quarter = _arithmetic(V, exact)
    table = zeros((M + 1, N + 1))
    table[1, 0] = quarter

    for n in range(2, N + 1, 2):
        for m in range(1, M + 1):
            acc = 0
            for s, a_s in enumerate(a, start=1):
                if a_s == 0:
                    continue
                inner = 0
                for k in range((s - 1) // 2 + 1):
                    mi, ni = m - s + 2 * k, n - 2 * k - 2
                    if mi < 0 or ni < 0:
                        continue
                    inner += comb(s, 2 * k + 1) * table[mi, ni]
                acc += a_s / 2 ** (s - 1) * inner
            table[m, n] = c * acc / (m * n)

    log.debug("built alpha table M=%d N=%d exact=%s for %s", M, N, exact, V.identity)
    return AlphaTable(table, M, N, V.identity, c, exact)


def build_alpha_orders(V: PotentialSeries, M: int, J: int, exact: bool = False) -> AlphaOrderTable:
    """Fill alpha^{(s)}_{m,j} for 0 <= s <= j - 1, j <= J."""
    _check_orders(M, J)
    a, c, zeros, quarter = _arithmetic(V, exact)
    S = len(a)
    table = zeros((J, M + 1, J + 1))
    table[0, 1, 0] = quarter

    for j in range(1, J + 1):
        for m in range(1, M + 1):
            for s in range(j):
                acc = 0
                for r in range(s + 1):
                    for l in range(2 * r + 1, min(m + 2 * r - 1, S) + 1):
                        a_l = a[l - 1]
                        if a_l == 0:
                            continue
                        lower = table[s - r, m - l + 2 * r, j - r - 1]
                        if lower == 0:
                            continue
                        acc += a_l / 2 ** (l - 1) * comb(l, 2 * r + 1) * lower
                table[s, m, j] = acc / (m * 2 * j)

    return AlphaOrderTable(table, M, J, V.identity, c, exact)


def _evaluate(coeffs: np.ndarray, u: float, w: float, exact: bool) -> SeriesValue:
    """sum coeffs[m, k] u^m w^k with the boundary-term error proxy."""
    if exact:
        uf, wf = Fraction(u), Fraction(w)
        up = np.array([uf ** m for m in range(coeffs.shape[0])], dtype=object)
        wp = np.array([wf ** k for k in range(coeffs.shape[1])], dtype=object)
        terms = coeffs * np.outer(up, wp)
        value = float(sum(terms.flat, Fraction(0)))
        terms = terms.astype(float)
    else:
        value = float(P.polyval2d(u, w, coeffs))
        terms = coeffs * np.outer(u ** np.arange(coeffs.shape[0]), w ** np.arange(coeffs.shape[1]))
    boundary = max(float(np.max(np.abs(terms[-1, :]))), float(np.max(np.abs(terms[:, -1]))))
    return SeriesValue(value, boundary)


def _warn_truncation(result: SeriesValue, what: str):
    if result.boundary > config.TRUNCATION_RATIO * abs(result.value):
        warnings.warn(
            f"{what}: boundary term {result.boundary:.3e} vs value {result.value:.3e}",
            TruncationWarning,
            stacklevel=3,
        )


def series_kernel_eval(t: AlphaTable, u: float, v: float) -> SeriesValue:
    """Truncated series T(u, v); even in v because only even powers are summed."""
    even = t.values[:, ::2]
    result = _evaluate(even, u, v * v, t.exact)
    _warn_truncation(result, "series_kernel_eval")
    return result


def order_weights(t: AlphaOrderTable, n: int) -> np.ndarray:
    """alpha^{(n)}_{m,j} c^{j-n}, the coefficients of u^m v^{2j} in T_n."""
    block = t.order(n)
    weighted = block.copy()
    for j in range(t.J + 1):
        if j < n:
            weighted[:, j] = 0
        else:
            weighted[:, j] = block[:, j] * t.coupling ** (j - n)
    return weighted


def order_series_eval(t: AlphaOrderTable, n: int, u: float, v: float) -> SeriesValue:
    """Partial sum of the n-th kernel factor correction T_n(u, v)."""
    result = _evaluate(order_weights(t, n), u, v * v, t.exact)
    _warn_truncation(result, f"order_series_eval(n={n})")
    return result
