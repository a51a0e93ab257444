"""Quadrature kernel engine: T_0, the corrections T_n, grids and PDE residuals."""

from .grid import KernelGrid, barycentric_weights, chebyshev_lobatto, interpolation_matrix
from .kernels import (
    KernelEngine,
    KernelValue,
    build_correction_grid,
    build_t0_grid,
    clear_engines,
    fill_correction_grid,
    full_kernel,
    get_engine,
    kernel_values,
    t0_eval,
    t0_picard,
    t0_values,
)
from .quadrature import Estimate, adaptive_quad
from .residuals import correction_pde_residual, mixed_derivative, tke_residual

__all__ = [
    "KernelGrid",
    "KernelEngine",
    "KernelValue",
    "Estimate",
    "adaptive_quad",
    "barycentric_weights",
    "build_correction_grid",
    "build_t0_grid",
    "chebyshev_lobatto",
    "clear_engines",
    "correction_pde_residual",
    "fill_correction_grid",
    "full_kernel",
    "get_engine",
    "interpolation_matrix",
    "kernel_values",
    "mixed_derivative",
    "t0_eval",
    "t0_picard",
    "t0_values",
    "tke_residual",
]
