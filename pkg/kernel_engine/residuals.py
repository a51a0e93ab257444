"""Finite-difference residuals of the time kernel equation and of the correction PDEs."""

import math
from typing import Callable, Sequence

import config
from potential import PotentialSeries


def mixed_derivative(kernel: Callable, u: float, v: float, h: float, richardson: bool = True) -> float:
    """d^2 T / du dv by the cross stencil, optionally with one Richardson halving."""

    def stencil(step):
        return (
            kernel(u + step, v + step) - kernel(u + step, v - step)
            - kernel(u - step, v + step) + kernel(u - step, v - step)
        ) / (4.0 * step * step)

    coarse = stencil(h)
    if not richardson:
        return coarse
    fine = stencil(h / 2.0)
    return (4.0 * fine - coarse) / 3.0


def tke_residual(V: PotentialSeries, kernel: Callable, u: float, v: float,
                 h: float = config.RESIDUAL_STEP, richardson: bool = True) -> float:
    """-(2 hbar^2 / mu) T_uv + [V((u+v)/2) - V((u-v)/2)] T at one point."""
    lhs = -(2.0 * V.hbar ** 2 / V.mass) * mixed_derivative(kernel, u, v, h, richardson)
    return lhs + (V.eval((u + v) / 2.0) - V.eval((u - v) / 2.0)) * kernel(u, v)


def correction_source(V: PotentialSeries, n: int, kernels: Sequence[Callable], u: float, v: float) -> float:
    """c sum_{r=0}^{n} V^(2r+1)(u/2) v^(2r+1) T_{n-r}(u, v) / ((2r+1)! 4^r)."""
    total = 0.0
    for r in range(n + 1):
        if 2 * r + 1 > V.s_max:
            break
        weight = 1.0 / (math.factorial(2 * r + 1) * 4 ** r)
        total += weight * V.eval_derivative(2 * r + 1, u / 2.0) * v ** (2 * r + 1) * kernels[n - r](u, v)
    return V.coupling * total


def correction_pde_residual(V: PotentialSeries, n: int, grids: Sequence[Callable], u: float, v: float,
                            h: float = config.RESIDUAL_STEP, richardson: bool = True) -> float:
    """T_n,uv minus its source; ``grids[k]`` is any callable T_k(u, v), k = 0..n."""
    return mixed_derivative(grids[n], u, v, h, richardson) - correction_source(V, n, grids, u, v)
