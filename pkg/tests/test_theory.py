'''Tests of the model predictions and of the calibration.
'''

import math
import mpmath
import numpy as np
import pytest
from src.selfsim import mixture, process, theory
from src.selfsim.errors import (CalibrationFailed, DivergentMoment, IndexOutOfRange,
                                InvalidParameter)
from src.selfsim.theory import CalibrationTargets, PowerLawInit

ORDERS = [0, 0.5, 1, 1.5, 2, 3, 4]


@pytest.mark.parametrize('alpha', ORDERS)
def test_b_alpha_closed_form(alpha):
    mpmath.mp.dps = 30
    exact = 2 ** mpmath.mpf(alpha / 2) * mpmath.gamma(mpmath.mpf(alpha + 1) / 2) / mpmath.sqrt(
        mpmath.pi)
    assert theory.b_alpha(alpha) == pytest.approx(float(exact), rel=1e-12)


@pytest.mark.parametrize('alpha', ORDERS)
def test_b_alpha_quadrature(alpha):
    assert theory.b_alpha_quad(alpha) == pytest.approx(theory.b_alpha(alpha), rel=1e-10)


def test_b_alpha_even_orders_are_exact():
    assert theory.b_alpha(2) == 1.0
    assert theory.b_alpha(4) == 3.0
    assert theory.b_alpha(0) == 1.0
    assert theory.AbsMomentCoefficient.of(6).value == 15.0
    with pytest.raises(InvalidParameter):
        theory.b_alpha(-1)


def test_kappa_symmetry(light_mixture):
    assert theory.kappa(light_mixture, 0.5, 1.5) == pytest.approx(
        theory.kappa(light_mixture, 1.5, 0.5), rel=1e-14)
    assert theory.kappa(light_mixture, 1, 1) > 1
    assert theory.kappa(mixture.degenerate(0.3), 1, 2) == pytest.approx(1.0, rel=1e-14)


def test_kappa_divergence():
    m = mixture.normalize(1.0, 5.0, 1.0)
    with pytest.raises(DivergentMoment):
        theory.kappa(m, 1.5, 1.5)


def test_cross_moment_factorization(light_model):
    n = 6
    a_n = process.coefficient_a(light_model.D, n)
    expected = (theory.b_alpha(1) ** 2 * a_n * mixture.moment(light_model.mixture, 2))
    assert theory.cross_moment(light_model, 1, 1, n) == pytest.approx(expected, rel=1e-14)
    assert theory.abs_moment(light_model, 1, 2) == pytest.approx(
        mixture.moment(light_model.mixture, 2), rel=1e-14)


def test_increment_second_moment(light_model):
    values = theory.increment_second_moment(light_model)
    assert values.sum() == pytest.approx(
        mixture.moment(light_model.mixture, 2) * 17 ** (2 * light_model.D), rel=1e-12)


def test_vol_autocorr_proportional_to_coefficients(light_model):
    c = np.array([theory.vol_autocorr(light_model, n) for n in range(2, 18)])
    a = process.coefficients(light_model.D, 17)[1:]
    assert c / c[0] == pytest.approx(a / a[0], rel=1e-12)
    assert np.all(c > 0)
    with pytest.raises(IndexOutOfRange):
        theory.vol_autocorr(light_model, 1)
    with pytest.raises(IndexOutOfRange):
        theory.vol_autocorr(light_model, 18)


def test_vol_autocorr_vanishes_for_point_mass(markov_model):
    assert theory.vol_autocorr(markov_model, 5) == 0.0


@pytest.mark.parametrize('alpha, beta', [(1.0, 1.0), (0.5, 1.5), (2.0, 1.0)])
def test_b2_diagonal(alpha, beta):
    D = 0.36
    for t in (1, 4, 17):
        expected = theory.b_alpha(alpha + beta) * t ** ((alpha + beta) * D)
        assert theory.b2(alpha, beta, t, t, D) == pytest.approx(expected, rel=1e-8)


def test_b2_without_outer_power_is_a_plain_moment():
    # |X + Y| with X, Y independent is the absolute value of a Gaussian of variance t2^(2D)
    (D, beta) = (0.36, 1.5)
    expected = theory.b_alpha(beta) * 9 ** (beta * D)
    assert theory.b2(0.0, beta, 2, 9, D) == pytest.approx(expected, rel=1e-7)


def test_b2_even_inner_power():
    (alpha, D, t1, t2) = (1.0, 0.36, 3, 7)
    (var_1, var_2) = (t1 ** (2 * D), t2 ** (2 * D) - t1 ** (2 * D))
    expected = var_1 ** (alpha / 2) * (
        var_1 * theory.b_alpha(alpha + 2) + var_2 * theory.b_alpha(alpha))
    assert theory.b2(alpha, 2.0, t1, t2, D) == pytest.approx(expected, rel=1e-8)


def test_b2_against_high_precision_oracle():
    mpmath.mp.dps = 25
    (D, t1, t2) = (0.36, 2, 11)
    sd_1 = mpmath.sqrt(mpmath.mpf(t1) ** (2 * D))
    sd_2 = mpmath.sqrt(mpmath.mpf(t2) ** (2 * D) - mpmath.mpf(t1) ** (2 * D))

    def shifted(mu):
        # E|mu + sd_2 Z| in closed form
        return (sd_2 * mpmath.sqrt(2 / mpmath.pi) * mpmath.exp(-mu**2 / (2 * sd_2**2))
                + mu * (1 - 2 * mpmath.ncdf(-mu / sd_2)))

    exact = 2 * mpmath.quad(lambda x: x * mpmath.npdf(x, 0, sd_1) * shifted(x), [0, mpmath.inf])
    assert theory.b2(1.0, 1.0, t1, t2, D) == pytest.approx(float(exact), rel=1e-7)


@pytest.mark.parametrize('alpha, beta', [(1.0, 1.0), (0.5, 1.5), (1.5, 0.5)])
def test_K_diagonal_reduces_to_kappa(light_model, alpha, beta):
    m = light_model.mixture
    ratio = theory.b_alpha(alpha) * theory.b_alpha(beta) / theory.b_alpha(alpha + beta)
    for t in (1, 9, 17):
        value = theory.K(light_model, alpha, beta, t, t) * ratio
        assert value == pytest.approx(theory.kappa(m, alpha, beta), rel=1e-8)


def test_K_with_zero_exponent_is_one(light_model):
    assert theory.K(light_model, 0, 1.5, 2, 9) == 1.0
    assert theory.K(light_model, 1.0, 0, 3, 3) == 1.0
    with pytest.raises(IndexOutOfRange):
        theory.K(light_model, 1, 1, 5, 4)


def test_K_for_point_mass_and_brownian_scaling(markov_model):
    # Independent increments: R(t1) and R(t2) - R(t1) are independent Gaussians
    value = theory.K(markov_model, 2.0, 2.0, 3, 8)
    # <R1^2 R2^2> = <R1^4> + <R1^2> (t2 - t1) = 3 t1^2 + t1 (t2 - t1)
    expected = (3 * 9 + 3 * 5) / (3 * 8)
    assert value == pytest.approx(expected, rel=1e-8)


def test_curves(light_model):
    kappa = theory.kappa_curve(light_model, 1, 1)
    assert len(kappa.points) == 16
    assert kappa.source == 'theory'
    assert np.all(theory.linear_corr_curve(light_model).values == 0.0)
    assert len(theory.K_grid(light_model, 1, 1, [(1, 2), (2, 2)]).points) == 2
    assert len(theory.time_pairs(17)) == 153
    moments = theory.moment_curve(light_model, 2)
    assert moments.values[-1] == pytest.approx(
        mixture.moment(light_model.mixture, 2) * 17 ** (2 * light_model.D))


def test_calibrate_variance_and_tail():
    m = theory.calibrate(CalibrationTargets(variance=2.3e-7, tail_index=3.0))
    assert m.delta - m.gamma == 4.0
    assert mixture.moment(m, 2) == pytest.approx(2.3e-7, rel=1e-8)


def test_calibrate_with_support_bound():
    m = theory.calibrate(CalibrationTargets(variance=1e-6, tail_index=4.0), PowerLawInit(1.0, 2e-4))
    assert m.sigma_min == 2e-4
    assert mixture.moment(m, 2) == pytest.approx(1e-6, rel=1e-8)


def test_calibrate_point_mass():
    m = theory.calibrate(CalibrationTargets(variance=4e-6, tail_index=math.inf))
    assert isinstance(m, mixture.Degenerate)
    assert m.sigma0 == pytest.approx(2e-3, rel=1e-15)


def test_calibrate_rejects_infinite_variance():
    with pytest.raises(InvalidParameter):
        theory.calibrate(CalibrationTargets(variance=1e-6, tail_index=2.0))
    with pytest.raises(InvalidParameter):
        theory.calibrate(CalibrationTargets(variance=None, tail_index=3.0))


def test_calibrate_fits_support_bound_from_shape():
    truth = theory.calibrate(CalibrationTargets(variance=1.0, tail_index=4.0),
                             PowerLawInit(1.0, 0.5))
    mean_abs = theory.b_alpha(1) * mixture.moment(truth, 1)
    shape = np.array([mean_abs, -mean_abs])

    fitted = theory.calibrate(CalibrationTargets(1.0, 4.0, shape, fit_sigma_min=True))
    assert fitted.sigma_min == pytest.approx(0.5, rel=1e-6)
    assert mixture.moment(fitted, 2) == pytest.approx(1.0, rel=1e-8)


def test_calibrate_unreachable_mean():
    shape = np.array([1.0, -1.0])
    with pytest.raises(CalibrationFailed):
        theory.calibrate(CalibrationTargets(None, 4.0, shape, fit_sigma_min=True))
