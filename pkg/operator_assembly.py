"""Discretized time-of-arrival operator <q|T|q'> = (mu / i hbar) sgn(q - q') T(q + q', q - q')."""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import special

import config
from errors import ConfigError, NonRealExpectation
from kernel_engine import kernel_values
from potential import PotentialSeries

log = logging.getLogger(__name__)


def uniform_grid(L: float, N: int) -> np.ndarray:
    if N < 2:
        raise ConfigError("operator grid needs N >= 2")
    if L <= 0:
        raise ConfigError("operator half-width L must be positive")
    return np.linspace(-L, L, N)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    grid: np.ndarray
    step: float
    entries: np.ndarray
    n_max: int
    potential_id: str = ""

    @property
    def size(self) -> int:
        return len(self.grid)


@dataclass(frozen=True, eq=False)
class Wavefunction:
    grid: np.ndarray
    samples: np.ndarray
    norm: float = 1.0

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def normalized(self) -> "Wavefunction":
        norm = float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.step))
        if norm == 0:
            raise ConfigError("cannot normalize a zero wavefunction")
        return Wavefunction(self.grid, self.samples / norm, norm)

    def conjugate(self) -> "Wavefunction":
        """Time-reversed state."""
        return Wavefunction(self.grid, np.conj(self.samples), self.norm)

    @classmethod
    def gaussian(cls, grid: np.ndarray, q0: float, p0: float, sigma: float,
                 hbar: float = config.DEFAULT_HBAR) -> "Wavefunction":
        """Minimum-uncertainty packet with position spread sigma and mean momentum p0."""
        samples = np.exp(-((grid - q0) ** 2) / (4.0 * sigma ** 2) + 1j * p0 * grid / hbar)
        return cls(grid, samples).normalized()

    @classmethod
    def from_csv(cls, path: str, grid: np.ndarray) -> "Wavefunction":
        """Read (q, re, im) columns and resample onto ``grid`` by linear interpolation."""
        try:
            df = pd.read_csv(path, comment="#", float_precision="round_trip")
        except (OSError, pd.errors.ParserError) as e:
            raise ConfigError(f"cannot read wavefunction file {path}: {e}") from e
        missing = {"q", "re", "im"} - set(df.columns)
        if missing:
            raise ConfigError(f"wavefunction file lacks columns {sorted(missing)}")
        df = df.sort_values("q")
        re = np.interp(grid, df["q"], df["re"], left=0.0, right=0.0)
        im = np.interp(grid, df["q"], df["im"], left=0.0, right=0.0)
        return cls(grid, re + 1j * im).normalized()


def assemble(V: PotentialSeries, n_max: int, L: float, N: int,
             nodes: int = config.GRID_NODES, tol: float = config.GRID_TOL) -> OperatorMatrix:
    """Fill the strict upper triangle from the kernel and mirror it antisymmetrically."""
    grid = uniform_grid(L, N)
    upper_i, upper_j = np.triu_indices(N, k=1)
    u = grid[upper_i] + grid[upper_j]
    v = grid[upper_i] - grid[upper_j]
    kernel = kernel_values(V, n_max, u, v, nodes, tol)

    prefactor = V.mass / (1j * V.hbar)
    entries = np.zeros((N, N), dtype=complex)
    # q_i < q_j in the upper triangle, so sgn(q_i - q_j) = -1
    entries[upper_i, upper_j] = -prefactor * kernel
    entries[upper_j, upper_i] = prefactor * kernel
    log.debug("assembled %dx%d operator (n_max=%d) for %s", N, N, n_max, V.identity)
    return OperatorMatrix(grid, float(grid[1] - grid[0]), entries, n_max, V.identity)


def hermiticity_defect(K: OperatorMatrix) -> float:
    return float(np.max(np.abs(K.entries - K.entries.conj().T)))


def expectation_complex(K: OperatorMatrix, psi: Wavefunction) -> complex:
    if len(psi.samples) != K.size:
        raise ConfigError("wavefunction and operator live on different grids")
    return complex(np.vdot(psi.samples, K.entries @ psi.samples) * K.step ** 2)


def expectation(K: OperatorMatrix, psi: Wavefunction) -> float:
    """Real expectation value sum conj(psi_i) K_ij psi_j dq^2."""
    value = expectation_complex(K, psi)
    if abs(value.imag) > 1e-10 * abs(value.real) + 1e-14:
        raise NonRealExpectation(f"expectation {value} has imaginary part {value.imag:.3e}")
    return value.real


def free_gaussian_arrival(mass: float, hbar: float, q0: float, p0: float, sigma: float) -> float:
    """Expectation of -mu q/p (principal value) in a free Gaussian packet.

    With sigma_p = hbar / (2 sigma), the principal value of <1/p> is
    sqrt(2)/sigma_p * D(p0 / (sqrt(2) sigma_p)), D the Dawson integral.
    """
    sigma_p = hbar / (2.0 * sigma)
    inverse_p = np.sqrt(2.0) / sigma_p * special.dawsn(p0 / (np.sqrt(2.0) * sigma_p))
    return float(-mass * q0 * inverse_p)
