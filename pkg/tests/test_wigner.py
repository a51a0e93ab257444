import math

import numpy as np
import pytest

from errors import ClassicallyForbidden, DegenerateSignal, DomainError, NonRealResult
from potential import PotentialSeries
from quartic_reference import wigner_series
from series_oracle import AlphaTable, build_alpha, build_alpha_orders
from wigner import (
    classical_toa,
    hbar0_coefficients,
    hbar_scaling_check,
    ltoa_coefficients,
    ltoa_series,
    wigner_of_series,
)


def test_free_term_maps_to_classical_time():
    series = wigner_of_series({(1, 0): 0.25}, mass=2.0, hbar=1.0)
    assert len(series) == 1
    assert series.evaluate(-3.0, 1.5) == pytest.approx(-2.0 * -3.0 / 1.5)


def test_term_map_signs_and_hbar_powers():
    series = wigner_of_series({(0, 1): 1.0, (2, 2): 1.0}, mass=1.0, hbar=0.5)
    first, second = series.terms
    # (-1)^(j+1) 2^(m+1) (2j)!
    assert (first.m, first.j, first.hbar_power, first.coeff) == (0, 1, 2, 2 * 2)
    assert (second.m, second.j, second.hbar_power, second.coeff) == (2, 2, 4, -8 * 24)
    assert series.part(4).terms == (second,)
    assert series.evaluate(1.0, 1.0) == pytest.approx(4 * 0.25 - 192 * 0.0625)


def test_table_with_odd_powers_is_rejected():
    values = np.zeros((3, 3))
    values[1, 0] = 0.25
    values[1, 1] = 1.0
    with pytest.raises(NonRealResult):
        wigner_of_series(AlphaTable(values, 2, 2, "", 0.5), 1.0, 1.0)


def test_evaluate_rejects_zero_momentum():
    with pytest.raises(DomainError):
        wigner_of_series({(1, 0): 0.25}, 1.0, 1.0).evaluate(1.0, 0.0)


def test_full_table_of_free_particle(free):
    series = wigner_of_series(build_alpha(free, 8, 8), free.mass, free.hbar)
    assert series.evaluate(2.0, -0.5) == pytest.approx(4.0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_quartic_corrections_in_phase_space(quartic_potential, quartic_params, n):
    table = build_alpha_orders(quartic_potential, 56, 20)
    series = wigner_of_series(table, quartic_potential.mass, quartic_potential.hbar, order=n)
    q, p = -0.5, 2.0
    assert series.evaluate(q, p) == pytest.approx(wigner_series(quartic_params, n, q, p), rel=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hbar_scaling(quartic_potential, n):
    assert hbar_scaling_check(quartic_potential, n, 1.0, 0.5, -1.0, 10.0) == pytest.approx(2 * n, abs=1e-9)


def test_hbar_scaling_errors(linear, quartic_potential):
    with pytest.raises(DegenerateSignal):
        hbar_scaling_check(linear, 1, 1.0, 0.5, -1.0, 10.0)
    with pytest.raises(DomainError):
        hbar_scaling_check(quartic_potential, 0, 1.0, 0.5, -1.0, 10.0)


def test_classical_toa(free, oscillator):
    assert classical_toa(free, -3.0, 2.0) == pytest.approx(1.5, rel=1e-12)
    assert classical_toa(oscillator, -1.0, 1.0) == pytest.approx(math.pi / 4, abs=1e-9)
    assert classical_toa(oscillator, 1.0, 1.0) == pytest.approx(-math.pi / 4, abs=1e-9)


def test_classical_toa_to_shifted_arrival(free):
    assert classical_toa(free, 1.0, 1.0, arrival=3.0) == pytest.approx(2.0, rel=1e-12)


def test_classical_toa_errors(free):
    barrier = PotentialSeries((0.0, -1.0))
    with pytest.raises(ClassicallyForbidden):
        classical_toa(barrier, -1.0, 0.5)
    with pytest.raises(DomainError):
        classical_toa(free, 1.0, 0.0)


def test_ltoa_matches_classical_for_fast_particles(quartic_potential):
    q, p = -0.3, 2.0
    expected = classical_toa(quartic_potential, q, p)
    assert ltoa_series(quartic_potential, q, p, 8) == pytest.approx(expected, rel=1e-11)


def test_ltoa_coefficients(free, quartic_potential):
    np.testing.assert_allclose(ltoa_coefficients(free, 0)[0], [0.0, -1.0])
    q, p = -0.6, 1.7
    polys = ltoa_coefficients(quartic_potential, 5)
    from_polys = math.fsum(
        np.polynomial.polynomial.polyval(q, c) / p ** (2 * k + 1) for k, c in enumerate(polys)
    )
    assert from_polys == pytest.approx(ltoa_series(quartic_potential, q, p, 5), rel=1e-11)
    # mu^2 (1 - 1/5) lambda q^5 / p^3
    assert polys[1][5] == pytest.approx(0.8)


def test_classical_limit_is_the_local_time_of_arrival(quartic_potential):
    table = build_alpha_orders(quartic_potential, 20, 5)
    series = wigner_of_series(table, quartic_potential.mass, quartic_potential.hbar, order=0)
    measured = hbar0_coefficients(series, 4, 20)
    for k, poly in enumerate(ltoa_coefficients(quartic_potential, 4)):
        expected = np.zeros(21)
        expected[: min(len(poly), 21)] = poly[:21]
        np.testing.assert_allclose(measured[k], expected, rtol=1e-12, atol=1e-12 * np.max(np.abs(expected)))
