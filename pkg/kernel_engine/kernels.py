"""Quadrature evaluation of the leading kernel factor T_0 and the corrections T_n.

T_0 comes from the single integral

    T_0(u, v) = 1/4 int_0^u 0F1(;1; c v^2 [V(u/2) - V(s/2)]) ds,   c = mu / 2 hbar^2

and each correction from the nested recurrence over the lower orders

    T_n(u, v) = c sum_{r=1}^{n} 1 / ((2r+1)! 4^r) int_0^u ds V^(2r+1)(s/2)
                int_0^v dw w^(2r+1) T_{n-r}(s, w) 0F1(;1; c (v^2 - w^2) [V(u/2) - V(s/2)]).

Corrections are tabulated on tensor grids; the lower orders are read back by
barycentric interpolation inside the nested integrals.
"""

import logging
import math
import threading
from collections import OrderedDict
from typing import NamedTuple

import numpy as np

import config
from errors import ConfigError, DomainError, MissingDependency, QuadratureFailure
from potential import PotentialSeries
from specfun import HypParams, hyp0f1, hyp_pfq_array
from .grid import KernelGrid, chebyshev_lobatto
from .quadrature import Estimate, adaptive_quad, converged, doubling_orders, gauss_legendre

log = logging.getLogger(__name__)

_ZERO_F_ONE = HypParams((), (1.0,))
_CHUNK = 4096


class KernelValue(NamedTuple):
    value: float
    last_term: float


def _flag_negative(u, v):
    if np.any(np.asarray(u) < 0) or np.any(np.asarray(v) < 0):
        log.info("kernel requested at negative (u, v); integrating with signed bounds")


def t0_eval(V: PotentialSeries, u: float, v: float, tol: float = config.QUAD_TOL) -> Estimate:
    """T_0(u, v) by adaptive Gauss-Kronrod quadrature; returns value and error estimate."""
    if tol <= 0:
        raise ConfigError("tol must be positive")
    _flag_negative(u, v)
    if v == 0:
        return Estimate(u / 4.0, 0.0)
    c = V.coupling
    top = V.eval(u / 2.0)

    def integrand(s):
        return hyp0f1(1.0, c * v * v * (top - V.eval(s / 2.0)))

    est = adaptive_quad(integrand, 0.0, u, tol)
    return Estimate(est.value / 4.0, est.error / 4.0)


def t0_picard(V: PotentialSeries, u: float, v: float, iterations: int, tol: float = config.QUAD_TOL) -> float:
    """The Picard iterate T_{0,n}: the 0F1 expansion of T_0 cut after ``iterations`` terms."""
    if iterations < 0:
        raise ConfigError("iterations must be >= 0")
    c = V.coupling
    top = V.eval(u / 2.0)
    total = u / 4.0
    for k in range(1, iterations + 1):
        moment = adaptive_quad(lambda s, k=k: (top - V.eval(s / 2.0)) ** k, 0.0, u, tol).value
        total += (c * v * v) ** k / math.factorial(k) ** 2 * moment / 4.0
    return total


def t0_values(V: PotentialSeries, u, v, tol: float = config.QUAD_TOL) -> Estimate:
    """Vectorized T_0 over arrays of points with a doubling Gauss-Legendre rule."""
    u_arr, v_arr = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    shape = u_arr.shape
    u_flat, v_flat = u_arr.ravel(), v_arr.ravel()
    values = np.empty_like(u_flat)
    errors = np.empty_like(u_flat)
    c = V.coupling
    for start in range(0, len(u_flat), _CHUNK):
        uc = u_flat[start:start + _CHUNK]
        vc = v_flat[start:start + _CHUNK]
        top = V.eval(uc / 2.0)
        previous = None
        for order in doubling_orders():
            x, w = gauss_legendre(order)
            s = uc[:, np.newaxis] * x[np.newaxis, :]
            dv = top[:, np.newaxis] - V.eval(s / 2.0)
            factor = hyp_pfq_array(_ZERO_F_ONE, c * (vc * vc)[:, np.newaxis] * dv)
            current = uc / 4.0 * (factor @ w)
            if previous is not None and converged(previous, current, tol):
                break
            previous = current
        else:
            raise QuadratureFailure(f"T_0 rule did not converge by order {config.QUAD_MAX_ORDER}")
        values[start:start + _CHUNK] = current
        errors[start:start + _CHUNK] = np.abs(current - previous)
    zero_v = v_flat == 0
    values[zero_v] = u_flat[zero_v] / 4.0
    return Estimate(values.reshape(shape), errors.reshape(shape))


def _node_sets(U: float, Vmax: float, nodes: int, signed: bool):
    if nodes < 2:
        raise ConfigError("a kernel grid needs at least 2 nodes per axis")
    if U <= 0 or Vmax <= 0:
        raise ConfigError("grid extents must be positive")
    return chebyshev_lobatto(nodes, -U if signed else 0.0, U), chebyshev_lobatto(nodes, 0.0, Vmax)


def build_t0_grid(V: PotentialSeries, U: float, Vmax: float, nodes: int = config.GRID_NODES,
                  tol: float = config.GRID_TOL, signed: bool = False,
                  interp_degree: int = config.INTERP_DEGREE) -> KernelGrid:
    u_nodes, v_nodes = _node_sets(U, Vmax, nodes, signed)
    uu, vv = np.meshgrid(u_nodes, v_nodes, indexing="ij")
    est = t0_values(V, uu, vv, tol)
    values = est.value
    values[:, v_nodes == 0] = (u_nodes / 4.0)[:, np.newaxis]
    values[u_nodes == 0, :] = 0.0
    return KernelGrid(0, u_nodes, v_nodes, values, interp_degree, V.identity,
                      error=float(np.max(est.error)))


def _correction_row(V: PotentialSeries, n: int, lower: list, u: float, v_nodes: np.ndarray,
                    order: int, picard):
    """One row of T_n at fixed u, plus its envelope.

    The envelope is the same integral with T_{n-r} replaced by the largest
    magnitude on its grid and every factor taken in absolute value.  It bounds
    how far interpolation roundoff in the lower grids can move the row.
    """
    c = V.coupling
    x, weights = gauss_legendre(order)
    s = u * x
    dv = V.eval(u / 2.0) - V.eval(s / 2.0)
    w = v_nodes[:, np.newaxis] * x[np.newaxis, :]
    z = c * dv[:, None, None] * (v_nodes ** 2)[None, :, None] * (1.0 - x ** 2)[None, None, :]
    factor = hyp_pfq_array(_ZERO_F_ONE, z, None if picard is None else picard + 1)

    acc = np.zeros(len(v_nodes))
    envelope = np.zeros(len(v_nodes))
    for r in range(1, n + 1):
        derivative = V.eval_derivative(2 * r + 1, s / 2.0)
        lower_values = lower[n - r].tensor(s, w.ravel()).reshape(order, len(v_nodes), order)
        kernel = derivative[:, None, None] * (w ** (2 * r + 1))[None, :, :] * factor
        weight = 1.0 / (math.factorial(2 * r + 1) * 4 ** r)
        acc += weight * np.einsum("i,ibj,j->b", weights, kernel * lower_values, weights)
        scale = float(np.max(np.abs(lower[n - r].values)))
        envelope += weight * scale * np.einsum("i,ibj,j->b", weights, np.abs(kernel), weights)
    return c * u * v_nodes * acc, abs(c * u) * v_nodes * envelope


def fill_correction_grid(V: PotentialSeries, n: int, lower: list, tol: float = config.GRID_TOL,
                         picard: int = None) -> KernelGrid:
    """Tabulate T_n on the nodes of the lower-order grids.

    ``lower[k]`` must hold T_k for k < n on a common node set.  With ``picard``
    the 0F1 factor is cut after picard + 1 terms, which gives the Picard
    iterate of the correction instead of the correction itself.
    """
    if n < 1:
        raise ConfigError("corrections start at n = 1")
    if len(lower) < n or any(g is None for g in lower[:n]):
        raise MissingDependency(f"T_{n} needs grids for orders 0..{n - 1}")
    base = lower[0]
    u_nodes, v_nodes = base.u_nodes, base.v_nodes
    values = np.zeros((len(u_nodes), len(v_nodes)))
    worst = 0.0
    used_order = 0

    for a, u in enumerate(u_nodes):
        if u == 0.0:
            continue
        previous = None
        for order in doubling_orders(config.GRID_MIN_ORDER, config.GRID_MAX_ORDER):
            row, envelope = _correction_row(V, n, lower, u, v_nodes, order, picard)
            if previous is not None and converged(previous, row, tol, tol * envelope):
                break
            previous = row
        else:
            raise QuadratureFailure(
                f"T_{n} row u={u:g} not converged by order {config.GRID_MAX_ORDER}"
            )
        values[a] = row
        worst = max(worst, float(np.max(np.abs(row - previous))))
        used_order = max(used_order, order)

    values[:, v_nodes == 0] = 0.0
    values[u_nodes == 0, :] = 0.0
    return KernelGrid(n, u_nodes, v_nodes, values, base.interp_degree, V.identity,
                      quad_order=used_order, error=worst, picard=picard)


class KernelEngine:
    """Memoized T_0..T_n grids for one potential over one rectangle.

    Grids are immutable once filled; a re-entrant lock lets one writer fill an
    order (and, recursively, the orders below it) while readers wait.
    """

    def __init__(self, V: PotentialSeries, U: float = config.GRID_EXTENT,
                 Vmax: float = config.GRID_EXTENT, nodes: int = config.GRID_NODES,
                 tol: float = config.GRID_TOL, signed: bool = False,
                 interp_degree: int = config.INTERP_DEGREE):
        if tol <= 0:
            raise ConfigError("tol must be positive")
        self.potential = V
        self.U = U
        self.Vmax = Vmax
        self.nodes = nodes
        self.tol = tol
        self.signed = signed
        self.interp_degree = interp_degree
        self._grids = {}
        self._lock = threading.RLock()

    def grid(self, n: int) -> KernelGrid:
        with self._lock:
            if n in self._grids:
                return self._grids[n]
            if n == 0:
                built = build_t0_grid(self.potential, self.U, self.Vmax, self.nodes,
                                      self.tol, self.signed, self.interp_degree)
            else:
                lower = [self.grid(k) for k in range(n)]
                built = fill_correction_grid(self.potential, n, lower, self.tol)
            log.debug("built T_%d grid (%d nodes) for %s", n, self.nodes, self.potential.identity)
            self._grids[n] = built
            return built

    def grids(self, n_max: int) -> list:
        return [self.grid(k) for k in range(n_max + 1)]

    def correction(self, n: int, u, v):
        grid = self.grid(n)
        if not grid.covers(u, v):
            raise DomainError(f"(u, v) outside the T_{n} grid [{grid.u_nodes[0]:g}, {grid.U:g}] x [0, {grid.V:g}]")
        return grid(u, np.abs(v))

    def kernel_terms(self, n_max: int, u, v) -> list:
        """[T_0, ..., T_n_max] at arrays of points (T_0 by direct quadrature)."""
        v = np.abs(np.asarray(v, dtype=float))
        terms = [t0_values(self.potential, u, v, config.QUAD_TOL).value]
        for n in range(1, n_max + 1):
            if self.potential.is_linear():
                terms.append(np.zeros_like(terms[0]))
            else:
                terms.append(self.correction(n, u, v))
        return terms


_ENGINES = OrderedDict()
_ENGINES_LOCK = threading.Lock()


def get_engine(V: PotentialSeries, U: float = config.GRID_EXTENT, Vmax: float = config.GRID_EXTENT,
               nodes: int = config.GRID_NODES, tol: float = config.GRID_TOL,
               signed: bool = False, interp_degree: int = config.INTERP_DEGREE) -> KernelEngine:
    """Shared engine from the memo store, created on first use.

    The store keeps the ENGINE_CACHE_SIZE most recently used engines; older
    ones (and their grids) are released.
    """
    key = (V, float(U), float(Vmax), int(nodes), float(tol), bool(signed), int(interp_degree))
    with _ENGINES_LOCK:
        engine = _ENGINES.get(key)
        if engine is None:
            engine = KernelEngine(V, U, Vmax, nodes, tol, signed, interp_degree)
            _ENGINES[key] = engine
            while len(_ENGINES) > config.ENGINE_CACHE_SIZE:
                _, evicted = _ENGINES.popitem(last=False)
                log.debug("released engine for %s", evicted.potential.identity)
        else:
            _ENGINES.move_to_end(key)
        return engine


def clear_engines():
    """Drop every memoized engine."""
    with _ENGINES_LOCK:
        _ENGINES.clear()


def grid_extent(x: float) -> float:
    """Smallest power of two >= |x|, never below the configured extent."""
    x = abs(x)
    if x <= config.GRID_EXTENT:
        return config.GRID_EXTENT
    return 2.0 ** math.ceil(math.log2(x))


def build_correction_grid(V: PotentialSeries, n: int, U: float, Vmax: float,
                          nodes: int = config.GRID_NODES, tol: float = config.GRID_TOL,
                          signed: bool = False, picard: int = None) -> KernelGrid:
    """Grid of T_n over [0, U] x [0, Vmax]; lower orders are built on demand."""
    if n < 1:
        raise ConfigError("corrections start at n = 1")
    engine = get_engine(V, U, Vmax, nodes, tol, signed)
    if picard is None:
        return engine.grid(n)
    return fill_correction_grid(V, n, engine.grids(n - 1), tol, picard=picard)


def full_kernel(V: PotentialSeries, n_max: int, u: float, v: float,
                nodes: int = config.GRID_NODES, tol: float = config.GRID_TOL) -> KernelValue:
    """T_0 + T_1 + ... + T_n_max at one point, with |T_n_max| as truncation proxy."""
    if n_max < 0:
        raise ConfigError("n_max must be >= 0")
    v = abs(v)
    if u == 0:
        return KernelValue(0.0, 0.0)
    terms = [t0_eval(V, u, v).value]
    if n_max > 0 and not V.is_linear():
        engine = get_engine(V, grid_extent(u), grid_extent(v), nodes, tol, signed=u < 0)
        terms.extend(engine.correction(n, u, v) for n in range(1, n_max + 1))
    elif n_max > 0:
        terms.extend(0.0 for _ in range(n_max))
    return KernelValue(math.fsum(terms), abs(terms[-1]))


def kernel_values(V: PotentialSeries, n_max: int, u, v, nodes: int = config.GRID_NODES,
                  tol: float = config.GRID_TOL) -> np.ndarray:
    """Vectorized full kernel over arrays of (u, v) for lattices and matrices."""
    u = np.asarray(u, dtype=float)
    v = np.abs(np.asarray(v, dtype=float))
    if u.size == 0:
        return np.zeros_like(u)
    extent_u = grid_extent(float(np.max(np.abs(u))))
    extent_v = grid_extent(float(np.max(v)))
    engine = get_engine(V, extent_u, extent_v, nodes, tol, signed=bool(np.any(u < 0)))
    return np.sum(engine.kernel_terms(n_max, u, v), axis=0)
