"""Generalized hypergeometric series and Pochhammer symbols.

All evaluations are real, double precision, and summed directly from the
defining series

    pFq(a; b; z) = sum_k  prod (a_i)_k / prod (b_j)_k  z^k / k!

with the term ratio recurrence.  Scalar sums are accumulated with
``math.fsum`` so large cancelling terms (negative z) lose no more than the
reported condition number implies.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy import special

import config
from errors import DomainError, NonConvergence

log = logging.getLogger(__name__)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class HypParams:
    """Numerator (a) and denominator (b) parameter lists of a pFq."""

    numerator: tuple = ()
    denominator: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(self.numerator))
        object.__setattr__(self, "denominator", tuple(self.denominator))
        for b in self.denominator:
            if _is_nonpositive_integer(b):
                raise DomainError(f"denominator parameter {b} is zero or a negative integer")

    @property
    def p(self) -> int:
        return len(self.numerator)

    @property
    def q(self) -> int:
        return len(self.denominator)

    @property
    def terminating(self) -> bool:
        return any(_is_nonpositive_integer(a) for a in self.numerator)

    def ratio(self, k: int) -> float:
        """t_{k+1} / t_k without the factor z."""
        num = math.prod(a + k for a in self.numerator)
        den = math.prod(b + k for b in self.denominator)
        return num / (den * (k + 1))

    def __str__(self):
        a = ",".join(f"{x:g}" for x in self.numerator)
        b = ",".join(f"{x:g}" for x in self.denominator)
        return f"{self.p}F{self.q}({a};{b})"


class HypResult(NamedTuple):
    value: float
    terms: int
    condition: float


def pochhammer(x: float, k: int) -> float:
    """Rising factorial (x)_k; (x)_0 = 1."""
    if k < 0:
        raise ValueError("Pochhammer index must be non-negative")
    return float(special.poch(x, k))


def pochhammer_exact(x: Fraction, k: int) -> Fraction:
    """Rising factorial in exact rational arithmetic."""
    result = Fraction(1)
    for i in range(k):
        result *= x + i
    return result


def _check_domain(params: HypParams, z: float):
    if params.terminating or z == 0:
        return
    if params.p > params.q + 1:
        raise DomainError(f"{params} diverges for every z != 0")
    if params.p == params.q + 1 and abs(z) >= 1:
        raise DomainError(f"{params} series diverges at |z|={abs(z):g} >= 1")


def _pfaff(params: HypParams, z: float, rel_tol: float, max_terms: int) -> HypResult:
    # 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))
    a, b = params.numerator
    (c,) = params.denominator
    w = z / (z - 1.0)
    log.debug("Pfaff continuation of %s at z=%g -> w=%g", params, z, w)
    inner = _sum_series(HypParams((a, c - b), (c,)), w, rel_tol, max_terms)
    scale = (1.0 - z) ** (-a)
    return HypResult(scale * inner.value, inner.terms, inner.condition)


def _reciprocal(params: HypParams, z: float, rel_tol: float, max_terms: int) -> HypResult:
    # 2F1(a,b;c;z) = A (-z)^(-a) 2F1(a, a-c+1; a-b+1; 1/z) + B (-z)^(-b) 2F1(b, b-c+1; b-a+1; 1/z)
    a, b = params.numerator
    (c,) = params.denominator
    x = 1.0 / z
    log.debug("1/z continuation of %s at z=%g", params, z)
    first = _sum_series(HypParams((a, a - c + 1.0), (a - b + 1.0,)), x, rel_tol, max_terms)
    second = _sum_series(HypParams((b, b - c + 1.0), (b - a + 1.0,)), x, rel_tol, max_terms)
    left = special.gamma(c) * special.gamma(b - a) * special.rgamma(b) * special.rgamma(c - a) * (-z) ** (-a)
    right = special.gamma(c) * special.gamma(a - b) * special.rgamma(a) * special.rgamma(c - b) * (-z) ** (-b)
    value = left * first.value + right * second.value
    magnitude = abs(left * first.value) * first.condition + abs(right * second.value) * second.condition
    condition = magnitude / abs(value) if value != 0 else math.inf
    return HypResult(float(value), first.terms + second.terms, float(condition))


def _sum_series(params: HypParams, z: float, rel_tol: float, max_terms: int) -> HypResult:
    _check_domain(params, z)
    if z == 0:
        return HypResult(1.0, 1, 1.0)

    terms = [1.0]
    term = 1.0
    partial = 1.0
    for k in range(max_terms):
        term *= params.ratio(k) * z
        terms.append(term)
        partial += term
        if term == 0.0:
            break
        r = abs(params.ratio(k + 1) * z)
        if params.p == params.q + 1:
            r = max(r, abs(z))
        if r < 1.0:
            tail = abs(term) * r / (1.0 - r)
            if tail <= config.HYP_ABS_TOL + rel_tol * abs(partial):
                break
    else:
        raise NonConvergence(
            f"{params} at z={z:g} not converged after {max_terms} terms"
        )

    value = math.fsum(terms)
    magnitude = math.fsum(abs(t) for t in terms)
    condition = magnitude / abs(value) if value != 0 else math.inf
    return HypResult(value, len(terms), condition)


def hyp_pfq_detail(
    params: HypParams,
    z: float,
    rel_tol: float = config.HYP_REL_TOL,
    max_terms: int = config.HYP_MAX_TERMS,
) -> HypResult:
    """Sum a pFq series and report the term count and condition number.

    2F1 arguments below -1/2 are mapped by the Pfaff transformation so the
    series converges geometrically.  Below -2 (and when a - b is not an
    integer) the two-series continuation in 1/z is used instead, since the
    Pfaff argument z / (z - 1) creeps towards 1 there.  All other p = q + 1
    series need |z| < 1.
    """
    z = float(z)
    if params.p == 2 and params.q == 1 and z < -0.5 and not params.terminating:
        a, b = params.numerator
        if z < -2.0 and not float(a - b).is_integer():
            return _reciprocal(params, z, rel_tol, max_terms)
        return _pfaff(params, z, rel_tol, max_terms)
    return _sum_series(params, z, rel_tol, max_terms)


def hyp_pfq(
    params: HypParams,
    z: float,
    rel_tol: float = config.HYP_REL_TOL,
    max_terms: int = config.HYP_MAX_TERMS,
) -> float:
    return hyp_pfq_detail(params, z, rel_tol, max_terms).value


def hyp0f1(b: float, z: float, rel_tol: float = config.HYP_REL_TOL) -> float:
    return hyp_pfq(HypParams((), (b,)), z, rel_tol)


def hyp_pfq_array(params: HypParams, z, n_terms: int = None) -> np.ndarray:
    """Elementwise pFq over an array of arguments.

    With ``n_terms`` the series is cut after that many terms (k < n_terms),
    giving the Picard-style partial sums; otherwise summation runs until the
    largest remaining term is below the relative tolerance everywhere.
    """
    z = np.asarray(z, dtype=float)
    if n_terms is None:
        zmax = float(np.max(np.abs(z))) if z.size else 0.0
        _check_domain(params, zmax)
    term = np.ones_like(z)
    total = np.ones_like(z)
    limit = config.HYP_MAX_TERMS if n_terms is None else n_terms - 1
    for k in range(limit):
        term = term * (params.ratio(k) * z)
        total = total + term
        if n_terms is not None:
            continue
        r = float(np.max(np.abs(params.ratio(k + 1) * z))) if z.size else 0.0
        if r < 1.0:
            tail = np.abs(term) * r / (1.0 - r)
            if np.all(tail <= config.HYP_ABS_TOL + config.HYP_REL_TOL * np.abs(total)):
                return total
    if n_terms is None:
        raise NonConvergence(f"{params} array evaluation not converged")
    return total
