"""Tensor-product kernel grids with barycentric interpolation."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

import config


def chebyshev_lobatto(n: int, lo: float, hi: float) -> np.ndarray:
    """n Chebyshev extreme points on [lo, hi], ascending, endpoints exact."""
    x = -np.cos(np.pi * np.arange(n) / (n - 1))
    nodes = lo + (hi - lo) * (x + 1.0) / 2.0
    nodes[0], nodes[-1] = lo, hi
    if n % 2 == 1 and lo == -hi:
        nodes[n // 2] = 0.0
    return nodes


def barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    """w_i = 1 / prod_{j != i} (x_i - x_j), scaled to max |w| = 1."""
    diff = nodes[:, np.newaxis] - nodes[np.newaxis, :]
    np.fill_diagonal(diff, 1.0)
    # scale each factor by the node span so long products stay in range
    span = (nodes[-1] - nodes[0]) / 4.0 if len(nodes) > 1 else 1.0
    weights = 1.0 / np.prod(diff / span, axis=1)
    return weights / np.max(np.abs(weights))


def _global_matrix(nodes: np.ndarray, weights: np.ndarray, x: np.ndarray) -> np.ndarray:
    diff = x[:, np.newaxis] - nodes[np.newaxis, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    kernel = weights / diff
    matrix = kernel / kernel.sum(axis=1, keepdims=True)
    hit = exact.any(axis=1)
    if hit.any():
        matrix[hit] = exact[hit].astype(float)
    return matrix


def interpolation_matrix(nodes: np.ndarray, x, degree: int = 0) -> np.ndarray:
    """Matrix E with E @ f(nodes) = p(x) for the barycentric interpolant.

    ``degree`` 0 (or >= len(nodes) - 1) interpolates through every node;
    otherwise each x uses the ``degree + 1`` nodes nearest to it.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = len(nodes)
    if degree <= 0 or degree >= n - 1:
        return _global_matrix(nodes, _weights_for(tuple(nodes)), x)

    width = degree + 1
    starts = np.clip(np.searchsorted(nodes, x) - width // 2, 0, n - width)
    matrix = np.zeros((len(x), n))
    for start in np.unique(starts):
        rows = starts == start
        window = nodes[start:start + width]
        matrix[rows, start:start + width] = _global_matrix(
            window, _weights_for(tuple(window)), x[rows]
        )
    return matrix


@lru_cache(maxsize=256)
def _weights_for(nodes: tuple) -> np.ndarray:
    return barycentric_weights(np.array(nodes))


@dataclass(frozen=True, eq=False)
class KernelGrid:
    """Samples of T_n(u, v) on a tensor grid, evaluated by interpolation.

    The grid stores v >= 0 only; negative v is reflected since every kernel
    factor is even in v.
    """

    order_n: int
    u_nodes: np.ndarray
    v_nodes: np.ndarray
    values: np.ndarray
    interp_degree: int = config.INTERP_DEGREE
    potential_id: str = ""
    quad_order: int = 0
    error: float = 0.0
    picard: int = None
    meta: dict = field(default_factory=dict)

    @property
    def U(self) -> float:
        return float(self.u_nodes[-1])

    @property
    def V(self) -> float:
        return float(self.v_nodes[-1])

    @property
    def signed(self) -> bool:
        return self.u_nodes[0] < 0

    def covers(self, u, v) -> bool:
        u = np.asarray(u)
        v = np.abs(np.asarray(v))
        return bool(
            np.all(u >= self.u_nodes[0]) and np.all(u <= self.u_nodes[-1])
            and np.all(v <= self.v_nodes[-1])
        )

    def tensor(self, s, w) -> np.ndarray:
        """Interpolated values on the tensor product of points s and w."""
        eu = interpolation_matrix(self.u_nodes, s, self.interp_degree)
        ev = interpolation_matrix(self.v_nodes, np.abs(w), self.interp_degree)
        return eu @ self.values @ ev.T

    def __call__(self, u, v):
        """Pointwise interpolation at matching arrays (or scalars) u, v."""
        scalar = np.ndim(u) == 0 and np.ndim(v) == 0
        u_arr, v_arr = np.broadcast_arrays(np.atleast_1d(u).astype(float),
                                           np.atleast_1d(v).astype(float))
        eu = interpolation_matrix(self.u_nodes, u_arr.ravel(), self.interp_degree)
        ev = interpolation_matrix(self.v_nodes, np.abs(v_arr.ravel()), self.interp_degree)
        out = np.einsum("pk,kl,pl->p", eu, self.values, ev).reshape(u_arr.shape)
        return float(out[0]) if scalar else out
