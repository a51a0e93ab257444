import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy import special

from errors import DomainError, NonConvergence
from specfun import HypParams, hyp0f1, hyp_pfq, hyp_pfq_array, hyp_pfq_detail, pochhammer, pochhammer_exact


def test_pochhammer():
    assert pochhammer(1.25, 0) == 1.0
    assert pochhammer(1.25, 3) == pytest.approx(1.25 * 2.25 * 3.25)
    assert pochhammer_exact(Fraction(5, 4), 2) == Fraction(45, 16)
    with pytest.raises(ValueError):
        pochhammer(1.0, -1)


@pytest.mark.parametrize("z", [0.0, 0.3, 4.0, 25.0, -9.0, -40.0])
def test_0f1_against_bessel(z):
    # 0F1(;1;z) = I_0(2 sqrt z) for z > 0 and J_0(2 sqrt(-z)) for z < 0
    expected = special.iv(0, 2 * math.sqrt(z)) if z >= 0 else special.j0(2 * math.sqrt(-z))
    result = hyp_pfq_detail(HypParams((), (1.0,)), z)
    # oscillating sums lose accuracy in proportion to their condition number
    rel = max(1e-12, 16 * np.finfo(float).eps * result.condition)
    assert result.value == pytest.approx(expected, rel=rel, abs=1e-14)
    assert hyp0f1(1.0, z) == result.value


def test_0f1_condition_grows_for_negative_argument():
    assert hyp_pfq_detail(HypParams((), (1.0,)), 4.0).condition == pytest.approx(1.0)
    assert hyp_pfq_detail(HypParams((), (1.0,)), -40.0).condition > 1e3


@pytest.mark.parametrize("b, z", [(1.0, 0.7), (1.25, -2.3), (1.25, 5.0), (2.0, -3.0)])
def test_0f1_derivative_identity(b, z):
    # d/dz 0F1(;b;z) = 0F1(;b+1;z) / b
    h = 1e-5
    slope = (hyp0f1(b, z + h) - hyp0f1(b, z - h)) / (2 * h)
    assert slope == pytest.approx(hyp0f1(b + 1.0, z) / b, rel=1e-7)


@pytest.mark.parametrize("z", [0.2, -0.4, -0.9, -3.0, 0.95])
def test_2f1_against_scipy(z):
    params = HypParams((0.5, 1.0), (1.25,))
    assert hyp_pfq(params, z) == pytest.approx(special.hyp2f1(0.5, 1.0, 1.25, z), rel=1e-12)


@pytest.mark.parametrize("z", [-2.5, -50.0, -4050.0, -8.0e4])
def test_2f1_far_negative_argument(z):
    params = HypParams((0.5, 1.0), (1.25,))
    result = hyp_pfq_detail(params, z)
    assert result.value == pytest.approx(special.hyp2f1(0.5, 1.0, 1.25, z), rel=1e-12)
    assert result.terms < 200


def test_2f1_continuations_agree_at_switch():
    params = HypParams((0.5, 1.0), (1.25,))
    below = hyp_pfq(params, -2.0 - 1e-9)
    above = hyp_pfq(params, -2.0 + 1e-9)
    assert below == pytest.approx(above, rel=1e-8)


def test_higher_order_against_mpmath():
    params = HypParams((2, 113 / 27), (2.25, 86 / 27, 5))
    z = 3.7
    with mpmath.workdps(50):
        expected = mpmath.hyper([2, mpmath.mpf(113) / 27], [mpmath.mpf(9) / 4, mpmath.mpf(86) / 27, 5], z)
    assert hyp_pfq(params, z) == pytest.approx(float(expected), rel=1e-13)


def test_detail_reports_condition_for_cancelling_series():
    result = hyp_pfq_detail(HypParams((), (1.0,)), -30.0)
    assert result.condition > 1.0
    assert result.terms > 10


def test_terminating_series_ignores_domain():
    # 2F1(-2, 1; 1; z) = (1 - z)^2
    assert hyp_pfq(HypParams((-2, 1), (1,)), 3.0) == pytest.approx(4.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        HypParams((1,), (0,))
    with pytest.raises(DomainError):
        HypParams((1,), (-3.0,))
    with pytest.raises(DomainError):
        hyp_pfq(HypParams((1, 2, 3), (1,)), 0.1)
    with pytest.raises(DomainError):
        hyp_pfq(HypParams((1, 2), (3,)), 1.5)


def test_term_cap():
    with pytest.raises(NonConvergence):
        hyp_pfq(HypParams((), (1.0,)), 500.0, max_terms=5)


def test_array_matches_scalar():
    params = HypParams((), (1.0,))
    z = np.array([[0.0, 0.5], [-2.0, 7.5]])
    expected = np.vectorize(lambda x: hyp0f1(1.0, x))(z)
    np.testing.assert_allclose(hyp_pfq_array(params, z), expected, rtol=1e-14)


def test_array_partial_sums():
    params = HypParams((), (1.0,))
    z = np.array([0.5, 2.0])
    np.testing.assert_allclose(hyp_pfq_array(params, z, n_terms=1), [1.0, 1.0])
    np.testing.assert_allclose(hyp_pfq_array(params, z, n_terms=3), 1 + z + z ** 2 / 4)


def test_str():
    assert str(HypParams((1, 3.5), (1.25,))) == "2F1(1,3.5;1.25)"
