"""Entire analytic potentials V(q) = sum_{s>=1} a_s q^s."""

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

import config
from errors import ConfigError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PotentialSeries:
    """Power-series potential plus the mass and hbar it is used with.

    ``coefficients[s - 1]`` holds a_s; there is no constant term.
    ``dropped_constant`` records the a_0 discarded by :meth:`shift`.
    """

    coefficients: tuple
    mass: float = config.DEFAULT_MASS
    hbar: float = config.DEFAULT_HBAR
    dropped_constant: float = 0.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coefficients)
        if not coeffs:
            raise ConfigError("a potential needs at least one coefficient (S_max >= 1)")
        if len(coeffs) > config.MAX_SERIES_ORDER:
            raise ConfigError(
                f"S_max={len(coeffs)} exceeds the configured cap {config.MAX_SERIES_ORDER}"
            )
        if not all(math.isfinite(a) for a in coeffs):
            raise ConfigError("potential coefficients must be finite")
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ConfigError(f"mass must be positive, got {self.mass}")
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise ConfigError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def s_max(self) -> int:
        return len(self.coefficients)

    @property
    def coupling(self) -> float:
        """mu / (2 hbar^2), the constant in front of every kernel recurrence."""
        return self.mass / (2.0 * self.hbar ** 2)

    @property
    def identity(self) -> str:
        """Short provenance hash of coefficients and constants."""
        payload = json.dumps([self.coefficients, self.mass, self.hbar])
        return hashlib.sha1(payload.encode("utf-8")).hexdigest()[:12]

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (0 for the free particle)."""
        for s in range(self.s_max, 0, -1):
            if self.coefficients[s - 1] != 0.0:
                return s
        return 0

    @property
    def is_free(self) -> bool:
        return self.degree == 0

    def _full_coefficients(self) -> np.ndarray:
        return np.array((0.0,) + self.coefficients)

    def eval(self, q):
        """V(q) by Horner accumulation; works on scalars and arrays."""
        return P.polyval(q, self._full_coefficients())

    def eval_derivative(self, n: int, q):
        """n-th derivative V^(n)(q); zero when n exceeds S_max."""
        if n < 0:
            raise ValueError("derivative order must be non-negative")
        if n == 0:
            return self.eval(q)
        if n > self.s_max:
            return np.zeros_like(q, dtype=float) if np.ndim(q) else 0.0
        return P.polyval(q, P.polyder(self._full_coefficients(), n))

    def is_linear(self) -> bool:
        """True when a_s = 0 for every s >= 3 (linear equations of motion)."""
        return self.degree <= 2

    def shift(self, x: float) -> "PotentialSeries":
        """Re-expand q -> V(q + x) about the new origin, dropping the constant."""
        if x == 0:
            return self
        shifted = Polynomial(self._full_coefficients())(Polynomial([x, 1.0]))
        coeffs = np.zeros(self.s_max + 1)
        coeffs[: len(shifted.coef)] = shifted.coef
        constant = float(coeffs[0])
        if constant != 0.0:
            log.info("shift(%g): dropped constant term %.17g", x, constant)
        return replace(
            self,
            coefficients=tuple(coeffs[1:]),
            dropped_constant=self.dropped_constant + constant,
            name=f"{self.name}@{x:g}" if self.name else "",
        )

    def with_constants(self, mass: float = None, hbar: float = None) -> "PotentialSeries":
        """Same coefficients with new units; unset arguments keep their value."""
        return replace(
            self,
            mass=self.mass if mass is None else mass,
            hbar=self.hbar if hbar is None else hbar,
        )

    def to_dict(self) -> dict:
        """The potential-file document, without name or dropped constant."""
        return {"coeffs": list(self.coefficients), "mass": self.mass, "hbar": self.hbar}

    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> "PotentialSeries":
        if "coeffs" not in data:
            raise ConfigError("potential document needs a 'coeffs' list")
        return cls(
            coefficients=tuple(data["coeffs"]),
            mass=data.get("mass", config.DEFAULT_MASS),
            hbar=data.get("hbar", config.DEFAULT_HBAR),
            name=name,
        )

    @classmethod
    def from_json(cls, path: str) -> "PotentialSeries":
        """Load {"coeffs": [a1, a2, ...], "mass": mu, "hbar": hbar}."""
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read potential file {path}: {e}") from e
        return cls.from_dict(data, name=path)


def free_particle(mass: float = config.DEFAULT_MASS, hbar: float = config.DEFAULT_HBAR) -> PotentialSeries:
    """V(q) = 0."""
    return PotentialSeries((0.0,), mass, hbar, name="free")


def harmonic(k: float = 1.0, mass: float = config.DEFAULT_MASS, hbar: float = config.DEFAULT_HBAR) -> PotentialSeries:
    """V(q) = k q^2 / 2."""
    return PotentialSeries((0.0, k / 2.0), mass, hbar, name="harmonic")


def quartic(lam: float = 1.0, mass: float = config.DEFAULT_MASS, hbar: float = config.DEFAULT_HBAR) -> PotentialSeries:
    """V(q) = lam q^4."""
    return PotentialSeries((0.0, 0.0, 0.0, lam), mass, hbar, name="quartic")


PRESETS = {
    "free": free_particle,
    "harmonic": harmonic,
    "quartic": quartic,
}


def load_potential(source: str, mass: float = None, hbar: float = None) -> PotentialSeries:
    """Load a potential from a preset name or a JSON file, then apply overrides."""
    if source in PRESETS:
        potential = PRESETS[source]()
    else:
        potential = PotentialSeries.from_json(source)
    return potential.with_constants(mass=mass, hbar=hbar)
