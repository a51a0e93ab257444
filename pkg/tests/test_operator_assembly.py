import numpy as np
import pandas as pd
import pytest

from errors import ConfigError, NonRealExpectation
from operator_assembly import (
    OperatorMatrix,
    Wavefunction,
    assemble,
    expectation,
    expectation_complex,
    free_gaussian_arrival,
    hermiticity_defect,
    uniform_grid,
)


def test_uniform_grid():
    grid = uniform_grid(2.0, 5)
    np.testing.assert_allclose(grid, [-2, -1, 0, 1, 2])
    with pytest.raises(ConfigError):
        uniform_grid(1.0, 1)
    with pytest.raises(ConfigError):
        uniform_grid(0.0, 4)


def test_free_matrix_entries(free):
    K = assemble(free, 0, 1.5, 4)
    q = K.grid
    expected = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            expected[i, j] = (1 / 1j) * np.sign(q[i] - q[j]) * (q[i] + q[j]) / 4
    np.testing.assert_allclose(K.entries, expected, atol=1e-15)
    assert K.step == pytest.approx(1.0)
    assert K.potential_id == free.identity


def test_quartic_matrix_is_hermitian(quartic_potential):
    K = assemble(quartic_potential, 1, 1.0, 40)
    assert hermiticity_defect(K) <= 1e-14
    assert np.all(np.diag(K.entries) == 0)


def test_gaussian_is_normalized():
    grid = uniform_grid(10.0, 201)
    psi = Wavefunction.gaussian(grid, -1.0, 2.0, 1.0)
    assert np.sum(np.abs(psi.samples) ** 2) * psi.step == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        Wavefunction(grid, np.zeros(201)).normalized()


def test_free_packet_arrival_time(free):
    K = assemble(free, 0, 20.0, 400)
    psi = Wavefunction.gaussian(K.grid, -3.0, 2.0, 2.0)
    value = expectation(K, psi)
    oracle = free_gaussian_arrival(1.0, 1.0, -3.0, 2.0, 2.0)
    assert oracle == pytest.approx(1.5246, abs=1e-3)
    assert value == pytest.approx(oracle, rel=0.02)
    assert value == pytest.approx(1.5, rel=0.10)


def test_time_reversal_flips_sign(quartic_potential):
    K = assemble(quartic_potential, 1, 1.0, 50)
    psi = Wavefunction.gaussian(K.grid, -0.3, 5.0, 0.15)
    forward = expectation(K, psi)
    assert expectation(K, psi.conjugate()) == pytest.approx(-forward, rel=1e-10)


def test_complex_expectation_is_rejected():
    grid = uniform_grid(1.0, 3)
    entries = np.array([[1j, 0, 0], [0, 0, 0], [0, 0, 0]])
    K = OperatorMatrix(grid, 1.0, entries, 0)
    psi = Wavefunction(grid, np.array([1.0, 0.0, 0.0]))
    with pytest.raises(NonRealExpectation):
        expectation(K, psi)
    assert expectation_complex(K, psi) == 1j


def test_grid_mismatch(free):
    K = assemble(free, 0, 1.0, 4)
    psi = Wavefunction.gaussian(uniform_grid(1.0, 5), 0.0, 1.0, 0.5)
    with pytest.raises(ConfigError):
        expectation_complex(K, psi)


def test_wavefunction_from_csv(tmp_path):
    grid = uniform_grid(5.0, 101)
    psi = Wavefunction.gaussian(grid, 0.5, 1.0, 0.8)
    path = tmp_path / "psi.csv"
    pd.DataFrame({"q": grid, "re": psi.samples.real, "im": psi.samples.imag}).to_csv(path, index=False)
    loaded = Wavefunction.from_csv(str(path), grid)
    np.testing.assert_allclose(loaded.samples, psi.samples, atol=1e-12)

    bad = tmp_path / "bad.csv"
    pd.DataFrame({"q": grid, "re": psi.samples.real}).to_csv(bad, index=False)
    with pytest.raises(ConfigError):
        Wavefunction.from_csv(str(bad), grid)
