import math
import warnings
from fractions import Fraction

import pytest

from errors import ConfigError, DomainError, TruncationWarning
from kernel_engine import t0_eval
from quartic_reference import correction_series
from series_oracle import build_alpha, build_alpha_orders, order_series_eval, order_weights, series_kernel_eval


@pytest.fixture(autouse=True)
def quiet_truncation():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        yield


def test_free_particle_table_is_a_single_term(free):
    table = build_alpha(free, 12, 12)
    assert table.values[1, 0] == 0.25
    assert (table.values != 0).sum() == 1
    assert series_kernel_eval(table, 0.7, 0.4).value == pytest.approx(0.175)


def test_odd_powers_of_v_vanish(quartic_potential):
    table = build_alpha(quartic_potential, 16, 16)
    assert not table.values[:, 1::2].any()


def test_series_is_even_in_v(quartic_potential):
    table = build_alpha(quartic_potential, 20, 20)
    assert series_kernel_eval(table, 0.3, -0.4).value == series_kernel_eval(table, 0.3, 0.4).value


def test_harmonic_series_matches_quadrature(oscillator):
    table = build_alpha(oscillator, 30, 30)
    for u, v in [(0.4, 0.3), (0.8, -0.6), (-0.5, 0.5)]:
        expected = t0_eval(oscillator, u, abs(v)).value
        assert series_kernel_eval(table, u, v).value == pytest.approx(expected, rel=1e-11, abs=1e-15)


def test_quartic_series_matches_sum_of_corrections(quartic_potential, quartic_params):
    table = build_alpha(quartic_potential, 24, 24)
    u, v = 0.4, 0.3
    expected = math.fsum(correction_series(quartic_params, n, u, v) for n in range(6))
    assert series_kernel_eval(table, u, v).value == pytest.approx(expected, rel=1e-13)


def test_exact_and_float_tables_agree(quartic_potential):
    exact = build_alpha(quartic_potential, 13, 8, exact=True)
    floats = build_alpha(quartic_potential, 13, 8)
    # u^5 v^2 term of T_0 = (u/4) 0F1(;5/4; eta u^4 v^2) is eta / 5 with eta = 1/32
    assert exact.values[5, 2] == Fraction(1, 160)
    for m, n in [(5, 2), (9, 4), (3, 4), (7, 8)]:
        assert float(exact.values[m, n]) == pytest.approx(floats.values[m, n], rel=1e-15, abs=0)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_order_tables_reproduce_quartic_corrections(quartic_potential, quartic_params, n):
    table = build_alpha_orders(quartic_potential, 32, 16)
    u, v = 0.7, 0.6
    value = order_series_eval(table, n, u, v).value
    assert value == pytest.approx(correction_series(quartic_params, n, u, v), rel=1e-12)


def test_linear_potential_has_no_corrections(linear):
    table = build_alpha_orders(linear, 12, 6)
    for n in range(1, 6):
        assert not order_weights(table, n).any()


def test_order_weights_zero_below_order(quartic_potential):
    table = build_alpha_orders(quartic_potential, 16, 8)
    weights = order_weights(table, 2)
    assert not weights[:, :2].any()


def test_truncation_warning(quartic_potential):
    table = build_alpha(quartic_potential, 4, 4)
    with pytest.warns(TruncationWarning):
        series_kernel_eval(table, 3.0, 3.0)


def test_order_limits(quartic_potential):
    with pytest.raises(ConfigError):
        build_alpha(quartic_potential, 0, 4)
    with pytest.raises(ConfigError):
        build_alpha(quartic_potential, 4, 1000)
    table = build_alpha_orders(quartic_potential, 8, 4)
    with pytest.raises(DomainError):
        table.order(4)
