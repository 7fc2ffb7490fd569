'''Tests of the volatility measure.
'''

import math
import mpmath
import numpy as np
import pytest
from src import selfsim
from src.selfsim import mixture
from src.selfsim.errors import (DegenerateDensity, DivergentMoment, InvalidParameter,
                                NonIntegrable)


def _mp_moment(m: mixture.PowerLaw, q: float) -> float:
    '''Moment <sigma^q> by high-precision quadrature of the density.
    '''
    mpmath.mp.dps = 30

    def weight(s):
        return m.norm_A * s**m.gamma / (m.d + s**m.delta) * s**q

    points = [m.sigma_min] + [p for p in (1.0, 10.0) if p > m.sigma_min] + [mpmath.inf]
    return float(mpmath.quad(weight, points))


@pytest.mark.parametrize('sigma_min', [0.0, 0.3])
def test_normalization(sigma_min):
    m = mixture.normalize(1.0, 5.0, 2.0, sigma_min)
    assert _mp_moment(m, 0) == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize('gamma, delta, q', [(1.0, 5.0, 2.0), (0.5, 4.0, 1.5), (2.0, 9.0, 3.0)])
def test_moment_matches_high_precision_quadrature(gamma, delta, q):
    m = mixture.normalize(gamma, delta, 0.7, 0.1)
    assert mixture.moment(m, q) == pytest.approx(_mp_moment(m, q), rel=1e-9)


@pytest.mark.parametrize('p, delta', [(1.0, 5.0), (0.5, 4.0), (3.0, 8.0)])
def test_power_integral_closed_form(p, delta):
    exact = math.pi / (delta * math.sin(math.pi * (p + 1) / delta))
    assert mixture.power_integral(p, delta, 0.0) == pytest.approx(exact, rel=1e-9)


def test_moment_of_order_zero_is_one():
    m = mixture.normalize(1.0, 5.0, 1.0)
    assert mixture.moment(m, 0) == 1.0


def test_divergent_moment():
    m = mixture.normalize(1.0, 5.0, 1.0)
    assert math.isfinite(mixture.moment(m, 2.9))
    with pytest.raises(DivergentMoment):
        mixture.moment(m, 3.0)
    with pytest.raises(InvalidParameter):
        mixture.moment(m, -1.0)


def test_invalid_parameters():
    with pytest.raises(NonIntegrable):
        mixture.normalize(1.0, 2.0, 1.0)
    with pytest.raises(InvalidParameter):
        mixture.normalize(0.0, 5.0, 1.0)
    with pytest.raises(InvalidParameter):
        mixture.normalize(1.0, 5.0, -1.0)
    with pytest.raises(InvalidParameter):
        mixture.normalize(1.0, 5.0, 1.0, -0.1)
    with pytest.raises(InvalidParameter):
        mixture.degenerate(0.0)


def test_density():
    m = mixture.normalize(1.0, 5.0, 2.0, 0.5)
    assert mixture.density(m, 0.4) == 0.0
    assert mixture.density(m, 1.0) == pytest.approx(m.norm_A / 3.0)
    with pytest.raises(DegenerateDensity):
        mixture.density(mixture.degenerate(1.0), 1.0)


def test_degenerate_moments():
    m = mixture.degenerate(2.0)
    assert mixture.moment(m, 3) == 8.0
    assert mixture.expect(m, lambda s: s + 1) == 3.0
    assert mixture.tail_exponent(m) == math.inf


def test_expect_agrees_with_moment():
    m = mixture.normalize(1.0, 8.0, 1.0, 0.2)
    assert mixture.expect(m, lambda s: s**2) == pytest.approx(mixture.moment(m, 2), rel=1e-9)
    assert mixture.tail_exponent(m) == 7.0


def test_sample_second_moment(light_mixture):
    draws = mixture.sample(light_mixture, np.random.default_rng(5), 200_000)
    squares = draws**2
    stderr = squares.std() / math.sqrt(squares.size)
    assert abs(squares.mean() - mixture.moment(light_mixture, 2)) < 4 * stderr


def test_sample_respects_support():
    m = mixture.normalize(1.0, 6.0, 1.0, 0.8)
    draws = mixture.sample(m, np.random.default_rng(0), 10_000)
    assert draws.min() >= 0.8
    with pytest.raises(InvalidParameter):
        mixture.sample(m, np.random.default_rng(0), 0)


def test_json_recomputes_normalization():
    m = mixture.normalize(1.0, 5.0, 3.0, 0.1)
    obj = mixture.to_json(m)
    assert 'norm_A' not in obj
    assert mixture.from_json(obj) == m
    assert mixture.from_json({'type': 'degenerate', 'sigma0': 0.5}) == mixture.degenerate(0.5)
    with pytest.raises(InvalidParameter):
        mixture.from_json({'type': 'lognormal'})
    with pytest.raises(InvalidParameter):
        mixture.from_json({'type': 'powerlaw', 'gamma': 1.0})


def test_default_mixture_variance():
    m = selfsim.theory.default_mixture()
    assert (m.gamma, m.delta, m.sigma_min) == (1.0, 5.0, 0.0)
    assert mixture.moment(m, 2) == pytest.approx(2.3e-7, rel=1e-8)
