"""Closed-form kernels of the quartic oscillator V(q) = lambda q^4.

Every function depends on the kernel variables only through
eta = mu lambda / (32 hbar^2) and z = eta u^4 v^2.  The corrections also
have an exact double series

    T_n(u, v) = sum_k c_{n,k} eta^(n+k) u^(2n+1+4k) v^(4n+2k),
    (2n+1+4k)(4n+2k) c_{n,k} = 8 c_{n,k-1} + 8 c_{n-1,k},
    c_{0,k} = 1 / (4 (5/4)_k k!),

which follows from T_n,uv = 8 eta u^3 v T_n + 8 eta u v^3 T_{n-1}.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import config
from errors import ConfigError, DomainError, NonConvergence
from potential import PotentialSeries, quartic
from specfun import HypParams, hyp0f1, hyp_pfq

_F = Fraction
_SERIES_CAP = 200


@dataclass(frozen=True)
class QuarticParams:
    lam: float = 1.0
    mass: float = config.DEFAULT_MASS
    hbar: float = config.DEFAULT_HBAR

    def __post_init__(self):
        if not (self.lam > 0 and self.mass > 0 and self.hbar > 0):
            raise ConfigError("lambda, mu and hbar must all be positive")

    @property
    def eta(self) -> float:
        return self.mass * self.lam / (32.0 * self.hbar ** 2)

    def potential(self) -> PotentialSeries:
        return quartic(self.lam, self.mass, self.hbar)

    def argument(self, u: float, v: float) -> float:
        return self.eta * u ** 4 * v ** 2


def _combination(terms, z: float) -> float:
    return math.fsum(float(weight) * hyp_pfq(params, z) for weight, params in terms)


def t0(params: QuarticParams, u: float, v: float) -> float:
    """(u/4) 0F1(;5/4; eta u^4 v^2)."""
    return u / 4.0 * hyp0f1(1.25, params.argument(u, v))


T1_TERMS = (
    (_F(5), HypParams((1, 3.5), (1.25, 2.5, 3))),
    (_F(-1), HypParams((1,), (1.75, 3))),
)


def t1(params: QuarticParams, u: float, v: float) -> float:
    """Closed form of T_1: (eta u^3 v^4 / 24) times a sum of pFq in eta u^4 v^2."""
    eta = params.eta
    return eta * u ** 3 * v ** 4 / 24.0 * _combination(T1_TERMS, params.argument(u, v))


T2_TERMS = (
    (_F(1), HypParams((2, 2, 2), (1, 1, 2.25, 5))),
    (_F(43, 2), HypParams((2, 113 / 27), (2.25, 86 / 27, 5))),
    (_F(-75, 8), HypParams((1, 8.5), (1.75, 5, 7.5))),
    (_F(39, 8), HypParams((1,), (2.25, 5))),
)


def t2(params: QuarticParams, u: float, v: float) -> float:
    """Closed form of T_2, prefactor eta^2 u^5 v^8 / 540."""
    eta = params.eta
    return eta ** 2 * u ** 5 * v ** 8 / 540.0 * _combination(T2_TERMS, params.argument(u, v))


# Ten-term T_3 combination in its published form.  Its z -> 0 limit is
# 39.23.../56700 instead of 1/315, so it does not solve the T_3 equation;
# t3() sums the exact series instead.
T3_PRINTED_TERMS = (
    (_F(53, 9), HypParams((2, 2, 2, 60 / 7), (1, 1, 2.25, 7, 53 / 7))),
    (_F(-7, 15), HypParams((1,), (2.25, 7))),
    (_F(27, 4), HypParams((2, 2, 2), (1, 1, 2.25, 7))),
    (_F(-5, 6), HypParams((2, 2, 2), (1, 1, 2.75, 7))),
    (_F(4921, 72), HypParams((2, 2), (1, 2.25, 7))),
    (_F(8633, 80), HypParams((1, 21277 / 12644), (8633 / 12644, 2.25, 7))),
    (_F(-1115, 12), HypParams((2, 515 / 69), (2.75, 446 / 69, 7))),
    (_F(2275, 1600), HypParams((1, 13.5), (2.25, 7, 12.5))),
    (_F(-1375, 24), HypParams((1,), (2.75, 7))),
    (_F(19, 45), HypParams((2,), (2.25, 7))),
)


def t3_printed(params: QuarticParams, u: float, v: float) -> float:
    eta = params.eta
    return eta ** 3 * u ** 7 * v ** 12 / 56700.0 * _combination(T3_PRINTED_TERMS, params.argument(u, v))


def printed_limit(terms, denominator: int) -> Fraction:
    """Exact z -> 0 value of a printed combination divided by its prefactor denominator."""
    return sum((weight for weight, _ in terms), Fraction(0)) / denominator


@lru_cache(maxsize=8)
def correction_coefficients(n_max: int, k_max: int) -> tuple:
    """Exact c_{n,k} for 0 <= n <= n_max, 0 <= k <= k_max as nested tuples."""
    table = [[Fraction(0)] * (k_max + 1) for _ in range(n_max + 1)]
    table[0][0] = Fraction(1, 4)
    for k in range(1, k_max + 1):
        table[0][k] = table[0][k - 1] / ((Fraction(5, 4) + k - 1) * k)
    for n in range(1, n_max + 1):
        for k in range(k_max + 1):
            a, b = 2 * n + 1 + 4 * k, 4 * n + 2 * k
            previous = table[n][k - 1] if k > 0 else 0
            table[n][k] = (8 * previous + 8 * table[n - 1][k]) / (a * b)
    return tuple(tuple(row) for row in table)


def _power_series(coefficients, z: float) -> float:
    terms = []
    partial = 0.0
    for k, c in enumerate(coefficients):
        term = float(c) * z ** k
        terms.append(term)
        partial += term
        if k > 2 and abs(term) <= config.HYP_REL_TOL * abs(partial):
            return math.fsum(terms)
    raise NonConvergence(f"quartic series not converged in {len(coefficients)} terms at z={z:g}")


def correction_series(params: QuarticParams, n: int, u: float, v: float) -> float:
    """T_n from the exact double series (valid for every n >= 0)."""
    if n < 0:
        raise ConfigError("order must be >= 0")
    coefficients = correction_coefficients(max(n, 3), _SERIES_CAP)[n]
    eta = params.eta
    prefactor = eta ** n * u ** (2 * n + 1) * v ** (4 * n)
    if prefactor == 0.0:
        return 0.0
    return prefactor * _power_series(coefficients, params.argument(u, v))


def t3(params: QuarticParams, u: float, v: float) -> float:
    """T_3 from the exact double series; see :func:`t3_printed` for the published form."""
    return correction_series(params, 3, u, v)


def tau_classical(params: QuarticParams, q: float, p: float) -> float:
    """-(mu q / p) 2F1(1/2, 1; 5/4; -2 mu lambda q^4 / p^2).

    Slow particles (large negative argument) go through the 1/z continuation
    of the 2F1.
    """
    if p == 0:
        raise DomainError("momentum must be nonzero")
    z = -2.0 * params.mass * params.lam * q ** 4 / p ** 2
    return -(params.mass * q / p) * hyp_pfq(HypParams((0.5, 1.0), (1.25,)), z)


def phase_argument(params: QuarticParams, q: float, p: float) -> float:
    return -2.0 * params.mass * params.lam * q ** 4 / p ** 2


def _wigner_prefactor(params: QuarticParams, n: int, q: float, p: float) -> float:
    return -(params.mass ** (n + 1) * params.lam ** n * params.hbar ** (2 * n)
             * q ** (2 * n + 1) / p ** (4 * n + 1))


def _phase_domain(params: QuarticParams, q: float, p: float) -> float:
    if p == 0:
        raise DomainError("momentum must be nonzero")
    z = phase_argument(params, q, p)
    if abs(z) >= 1:
        raise DomainError(f"phase-space series needs |2 mu lambda q^4 / p^2| < 1, got {abs(z):g}")
    return z


@lru_cache(maxsize=8)
def wigner_coefficients(n: int) -> tuple:
    """w_{n,k} = 2^(2-3n-2k) (4n+2k)! c_{n,k}, coefficients of Z^k in the n-th transform."""
    table = correction_coefficients(max(n, 3), _SERIES_CAP)[n]
    return tuple(
        Fraction(2) ** (2 - 3 * n - 2 * k) * math.factorial(4 * n + 2 * k) * c
        for k, c in enumerate(table)
    )


def wigner_series(params: QuarticParams, n: int, q: float, p: float) -> float:
    """n-th phase-space correction from the exact kernel series."""
    z = _phase_domain(params, q, p)
    prefactor = _wigner_prefactor(params, n, q, p)
    if prefactor == 0.0:
        return 0.0
    return prefactor * _power_series(wigner_coefficients(n), z)


WIGNER_T1_TERMS = (
    (_F(5, 2), HypParams((1, 3.5), (1.25,))),
    (_F(-1, 2), HypParams((1, 2.5), (1.75,))),
)

WIGNER_T2_TERMS = (
    (_F(14, 3), HypParams((2, 2, 2, 4.5), (1, 1, 2.25))),
    (_F(301, 3), HypParams((2, 113 / 27, 4.5), (2.25, 86 / 27))),
    (_F(-175, 4), HypParams((1, 4.5, 8.5), (1.75, 7.5))),
    (_F(91, 4), HypParams((1, 4.5), (2.25,))),
)


def wigner_t1(params: QuarticParams, q: float, p: float) -> float:
    z = _phase_domain(params, q, p)
    return _wigner_prefactor(params, 1, q, p) * _combination(WIGNER_T1_TERMS, z)


def wigner_t2(params: QuarticParams, q: float, p: float) -> float:
    z = _phase_domain(params, q, p)
    return _wigner_prefactor(params, 2, q, p) * _combination(WIGNER_T2_TERMS, z)


def wigner_t3(params: QuarticParams, q: float, p: float) -> float:
    return wigner_series(params, 3, q, p)
