"""Phase-space (Weyl-Wigner) images of series kernels and classical arrival times.

A kernel factor term c u^m v^(2j) under the transform over the relative
coordinate becomes

    (-1)^(j+1) 2^(m+1) (2j)! mu hbar^(2j) c q^m / p^(2j+1),

so series tables map to phase-space series term by term, with no oscillatory
integral to evaluate.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

import config
from errors import ClassicallyForbidden, DegenerateSignal, DomainError, NonRealResult
from kernel_engine.quadrature import adaptive_quad
from potential import PotentialSeries
from series_oracle import AlphaOrderTable, AlphaTable, build_alpha_orders

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhaseSpaceTerm:
    m: int
    j: int
    coeff: float
    hbar_power: int


@dataclass(frozen=True)
class PhaseSpaceSeries:
    """sum coeff * hbar^hbar_power * q^m / p^(2j+1) over the stored terms."""

    terms: tuple
    mass: float
    hbar: float

    def evaluate(self, q: float, p: float, hbar: float = None) -> float:
        if p == 0:
            raise DomainError("phase-space series are singular at p = 0")
        h = self.hbar if hbar is None else hbar
        return math.fsum(
            t.coeff * h ** t.hbar_power * q ** t.m / p ** (2 * t.j + 1) for t in self.terms
        )

    def part(self, hbar_power: int) -> "PhaseSpaceSeries":
        kept = tuple(t for t in self.terms if t.hbar_power == hbar_power)
        return PhaseSpaceSeries(kept, self.mass, self.hbar)

    def __len__(self):
        return len(self.terms)


def _phase(j: int) -> float:
    """Real sign left by (1/i) * 1/i^(2j+1); raises if an imaginary part survives."""
    factor = 1.0 / (1j * (1j) ** (2 * j + 1))
    if abs(factor.imag) > 1e-14 * abs(factor.real):
        raise NonRealResult(f"imaginary residue {factor.imag:g} in term j={j}")
    return factor.real


def _term(m: int, j: int, c: float, mass: float, hbar_power: int) -> PhaseSpaceTerm:
    coeff = _phase(j) * 2.0 ** (m + 1) * math.factorial(2 * j) * mass * c
    return PhaseSpaceTerm(m, j, coeff, hbar_power)


def wigner_of_series(coeffs, mass: float, hbar: float, order: int = None) -> PhaseSpaceSeries:
    """Map a kernel factor series to its phase-space series.

    ``coeffs`` may be an AlphaTable (full kernel at its own hbar), an
    AlphaOrderTable (hbar-free coefficients; ``order`` picks one correction,
    default all), a mapping {(m, j): c} or a 2-D array c[m, j] of
    u^m v^(2j) coefficients.
    """
    terms = []
    if isinstance(coeffs, AlphaOrderTable):
        orders = range(coeffs.J) if order is None else [order]
        for s in orders:
            block = coeffs.order(s)
            for m, j in zip(*np.nonzero(block)):
                c = float(block[m, j]) * (mass / 2.0) ** (j - s)
                terms.append(_term(int(m), int(j), c, mass, 2 * s))
    else:
        if isinstance(coeffs, AlphaTable):
            table = coeffs.values[:, ::2]
            if np.any(coeffs.values[:, 1::2] != 0):
                raise NonRealResult("kernel table has odd powers of v")
            items = ((m, j, table[m, j]) for m, j in zip(*np.nonzero(table)))
        elif isinstance(coeffs, dict):
            items = ((m, j, c) for (m, j), c in coeffs.items() if c != 0)
        else:
            table = np.asarray(coeffs)
            items = ((m, j, table[m, j]) for m, j in zip(*np.nonzero(table)))
        for m, j, c in items:
            terms.append(_term(int(m), int(j), float(c), mass, 2 * int(j)))
    terms.sort(key=lambda t: (t.hbar_power, t.j, t.m))
    return PhaseSpaceSeries(tuple(terms), mass, hbar)


def hbar0_coefficients(series: PhaseSpaceSeries, j_max: int, m_max: int) -> np.ndarray:
    """Coefficient grid [j, m] of the hbar^0 terms q^m / p^(2j+1)."""
    grid = np.zeros((j_max + 1, m_max + 1))
    for t in series.part(0).terms:
        if t.j <= j_max and t.m <= m_max:
            grid[t.j, t.m] += t.coeff
    return grid


def classical_toa(V: PotentialSeries, q: float, p: float, tol: float = config.QUAD_TOL,
                  arrival: float = 0.0) -> float:
    """-sgn(p) sqrt(mu/2) int_arrival^q dq' / sqrt(H - V(q')).

    Integrated after q' = q + (arrival - q) t^2, which keeps the integrand
    finite even as the start point approaches a turning point.
    """
    if p == 0:
        raise DomainError("classical arrival time needs p != 0")
    mu = V.mass
    energy = p * p / (2.0 * mu) + V.eval(q)
    path = np.linspace(arrival, q, 513)[:-1]
    if np.any(V.eval(path) >= energy):
        raise ClassicallyForbidden(f"V >= H somewhere between {arrival:g} and {q:g}")
    span = q - arrival

    def integrand(t):
        gap = energy - V.eval(q - span * t * t)
        if gap <= 0:
            raise ClassicallyForbidden("path reaches a turning point")
        return 2.0 * span * t / math.sqrt(gap)

    integral = adaptive_quad(integrand, 0.0, 1.0, tol).value
    return -math.copysign(1.0, p) * math.sqrt(mu / 2.0) * integral


def _double_factorial_odd(k: int) -> int:
    """(2k-1)!! with (-1)!! = 1."""
    return math.prod(range(2 * k - 1, 0, -2))


def _ltoa_weight(k: int, mu: float) -> float:
    return -(-1) ** k * _double_factorial_odd(k) / math.factorial(k) * mu ** (k + 1)


def ltoa_series(V: PotentialSeries, q: float, p: float, k_max: int, tol: float = config.QUAD_TOL) -> float:
    """Local time of arrival: the expansion of the classical time about free flight."""
    if p == 0:
        raise DomainError("local time of arrival needs p != 0")
    top = V.eval(q)
    terms = []
    for k in range(k_max + 1):
        moment = adaptive_quad(lambda s, k=k: (top - V.eval(s)) ** k, 0.0, q, tol).value
        terms.append(_ltoa_weight(k, V.mass) / p ** (2 * k + 1) * moment)
    return math.fsum(terms)


def ltoa_coefficients(V: PotentialSeries, k_max: int) -> list:
    """Exact polynomial in q multiplying 1/p^(2k+1) in the local time of arrival.

    Entry k is an array whose index m holds the coefficient of q^m.
    """
    S = V.s_max
    difference = np.zeros((S + 1, S + 1))  # [power of q, power of q']
    for s, a in enumerate(V.coefficients, start=1):
        difference[s, 0] += a
        difference[0, s] -= a
    result = []
    power = np.ones((1, 1))
    for k in range(k_max + 1):
        if k > 0:
            power = signal.convolve2d(power, difference)
        poly = np.zeros(power.shape[0] + power.shape[1])
        for i, t in zip(*np.nonzero(power)):
            poly[i + t + 1] += power[i, t] / (t + 1)
        result.append(_ltoa_weight(k, V.mass) * poly)
    return result


def hbar_scaling_check(V: PotentialSeries, n: int, hbar1: float, hbar2: float, q: float, p: float,
                       M: int = 48, J: int = None) -> float:
    """Measured exponent log(T_n(hbar1) / T_n(hbar2)) / log(hbar1 / hbar2) of the n-th correction."""
    if n < 1:
        raise DomainError("hbar scaling is defined for corrections n >= 1")
    if V.is_linear():
        raise DegenerateSignal("phase-space corrections vanish identically for a linear potential")
    J = 2 * n + 10 if J is None else J
    values = []
    for hbar in (hbar1, hbar2):
        scaled = V.with_constants(hbar=hbar)
        table = build_alpha_orders(scaled, M, J)
        values.append(wigner_of_series(table, scaled.mass, hbar, order=n).evaluate(q, p))
    if min(abs(x) for x in values) < 1e-300:
        raise DegenerateSignal(f"T_{n}(q, p) vanishes at q={q:g}, p={p:g}")
    return math.log(values[0] / values[1]) / math.log(hbar1 / hbar2)
