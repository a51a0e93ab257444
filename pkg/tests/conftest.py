import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from kernel_engine import clear_engines  # noqa: E402
from potential import PotentialSeries, free_particle, harmonic, quartic  # noqa: E402
from quartic_reference import QuarticParams  # noqa: E402


@pytest.fixture
def free():
    return free_particle()


@pytest.fixture
def linear():
    """Linear equations of motion: V = q + q^2."""
    return PotentialSeries((1.0, 1.0), name="linear")


@pytest.fixture
def oscillator():
    return harmonic(1.0)


@pytest.fixture
def quartic_potential():
    return quartic(1.0)


@pytest.fixture
def quartic_params():
    return QuarticParams()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="module", autouse=True)
def fresh_engines():
    yield
    clear_engines()
