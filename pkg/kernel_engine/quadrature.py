"""Quadrature helpers: scipy's adaptive Gauss-Kronrod and doubling Gauss-Legendre rules."""

from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

import config
from errors import QuadratureFailure


class Estimate(NamedTuple):
    value: float
    error: float


def adaptive_quad(f, a: float, b: float, tol: float = config.QUAD_TOL, args=()) -> Estimate:
    """Integrate f over [a, b] with QUADPACK (absolute + relative tolerance tol).

    Raises QuadratureFailure when QUADPACK reports that its subdivision cap was
    reached or the requested accuracy could not be met.
    """
    if a == b:
        return Estimate(0.0, 0.0)
    result = integrate.quad(
        f, a, b, args=args, epsabs=tol, epsrel=tol, limit=config.QUAD_LIMIT, full_output=1
    )
    if len(result) > 3:
        value, error, _, message = result[:4]
        if error > 10 * tol * max(1.0, abs(value)):
            raise QuadratureFailure(f"quad on [{a:g}, {b:g}]: {message} (error {error:.2e})")
        return Estimate(value, error)
    return Estimate(result[0], result[1])


@lru_cache(maxsize=32)
def gauss_legendre(order: int):
    """Gauss-Legendre abscissae and weights mapped to [0, 1]."""
    x, w = leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def doubling_orders(min_order: int = config.QUAD_MIN_ORDER, max_order: int = config.QUAD_MAX_ORDER):
    order = min_order
    while order <= max_order:
        yield order
        order *= 2


def converged(previous: np.ndarray, current: np.ndarray, tol: float, floor=None) -> bool:
    """Successive-rule test on a batch of integrals.

    Each entry must agree to tol relative, with an absolute floor of
    1e-4 * tol times the largest entry of the batch.  ``floor`` (scalar or
    per entry) raises that floor to the noise level of the integrand.
    """
    current = np.asarray(current)
    gap = np.abs(current - previous)
    base = 1e-4 * tol * float(np.max(np.abs(current))) if current.size else 0.0
    if floor is not None:
        base = np.maximum(base, floor)
    return bool(np.all(gap <= tol * np.abs(current) + base))
