'''Model predictions for the correlators of the process, and calibration of the volatility \
measure.

Every prediction reduces to moments of rho times absolute moments of Gaussians:
<|r_1|^a |r_n|^b> = B_a B_b a_1^a a_n^b <sigma^(a+b)>.
'''

import functools
import logging
import math
from dataclasses import dataclass
from typing import Optional
import numpy as np
from scipy import integrate, optimize, special
from . import mixture
from .ensemble import CorrelatorCurve, CorrelatorKind, curve_from_values
from .errors import CalibrationFailed, IndexOutOfRange, InvalidParameter
from .mixture import MixtureDensity
from .process import ProcessModel, coefficient_a, coefficients

logger = logging.getLogger(__name__)

_SQRT_2PI = math.sqrt(2 * math.pi)


# +-------------------------------+
# | Gaussian absolute moments B_a |
# +-------------------------------+

@dataclass(frozen=True)
class AbsMomentCoefficient:
    '''Absolute moment B_alpha of the standard normal.
    '''
    alpha: float
    value: float

    @classmethod
    def of(cls, alpha: float) -> 'AbsMomentCoefficient':
        '''Compute the coefficient for a given order.
        '''
        return cls(alpha, b_alpha(alpha))


def _is_even_integer(x: float) -> bool:
    return float(x).is_integer() and int(x) % 2 == 0


def b_alpha(alpha: float) -> float:
    '''Return B_alpha = 2^(alpha/2) Gamma((alpha+1)/2) / sqrt(pi).

    #### Arguments
        alpha (float): Order, non-negative.

    #### Return
        float: Absolute moment of the standard normal; exact (2k-1)!! for even integers.
    '''
    if alpha < 0:
        raise InvalidParameter(f'alpha must be non-negative, got {alpha}')
    if _is_even_integer(alpha):
        return float(math.prod(range(1, int(alpha), 2)))
    return 2 ** (alpha / 2) * special.gamma((alpha + 1) / 2) / math.sqrt(math.pi)


def b_alpha_quad(alpha: float) -> float:
    '''Return B_alpha by direct quadrature of |r|^alpha against the standard normal.
    '''
    (val, _) = integrate.quad(
        lambda r: r**alpha * math.exp(-0.5 * r * r) / _SQRT_2PI, 0, math.inf,
        epsabs=0, epsrel=1e-13, limit=200)
    return 2 * val


# +---------------------+
# | One-time statistics |
# +---------------------+

def abs_moment(model: ProcessModel, i: int, alpha: float) -> float:
    '''Return <|r_i|^alpha> = B_alpha a_i^alpha <sigma^alpha>.
    '''
    a_i = coefficient_a(model.D, i)
    return b_alpha(alpha) * a_i**alpha * mixture.moment(model.mixture, alpha)


def total_abs_moment(model: ProcessModel, t: int, alpha: float) -> float:
    '''Return <|R(t, t)|^alpha> = B_alpha t^(alpha D) <sigma^alpha>.
    '''
    return b_alpha(alpha) * t ** (alpha * model.D) * mixture.moment(model.mixture, alpha)


def increment_second_moment(model: ProcessModel) -> np.ndarray:
    '''Return <r_t^2> = <sigma^2> a_t^2 for t = 1..horizon.
    '''
    return mixture.moment(model.mixture, 2) * coefficients(model.D, model.horizon_n) ** 2


def cross_moment(model: ProcessModel, alpha: float, beta: float, n: int) -> float:
    '''Return <|r_1|^alpha |r_n|^beta> for n > 1.
    '''
    a_1 = coefficient_a(model.D, 1)
    a_n = coefficient_a(model.D, n)
    return (b_alpha(alpha) * b_alpha(beta) * a_1**alpha * a_n**beta
            * mixture.moment(model.mixture, alpha + beta))


# +-------------+
# | Correlators |
# +-------------+

def kappa(m: MixtureDensity, alpha: float, beta: float) -> float:
    '''Return kappa_{alpha,beta} = <sigma^(alpha+beta)> / (<sigma^alpha> <sigma^beta>).

    The value does not depend on the lag n and is symmetric in (alpha, beta).
    '''
    return (mixture.moment(m, alpha + beta)
            / (mixture.moment(m, alpha) * mixture.moment(m, beta)))


def vol_autocorr(model: ProcessModel, n: int) -> float:
    '''Return the volatility autocorrelation c(1, n).

    #### Arguments
        model (ProcessModel): Process model; needs a finite <sigma^2>.
        n (int): Lag, 2 <= n <= horizon.

    #### Return
        float: c(1, n), proportional to a_n.
    '''
    if not 2 <= n <= model.horizon_n:
        raise IndexOutOfRange(f'need 2 <= n <= {model.horizon_n}, got n={n}')
    a_1 = coefficient_a(model.D, 1)
    a_n = coefficient_a(model.D, n)
    (m_1, m_2) = (mixture.moment(model.mixture, 1), mixture.moment(model.mixture, 2))
    (b_1, b_2) = (b_alpha(1), b_alpha(2))
    return b_1**2 * a_1 * a_n * (m_2 - m_1**2) / (a_1**2 * (b_2 * m_2 - b_1**2 * m_1**2))


def _shifted_abs_moment(mu: float, s: float, beta: float) -> float:
    '''Return E|mu + s Z|^beta for a standard normal Z.
    '''
    if beta == 0:
        return 1.0
    if _is_even_integer(beta):
        k = int(beta)
        return math.fsum(
            math.comb(k, j) * mu ** (k - j) * s**j * math.prod(range(1, j, 2))
            for j in range(0, k + 1, 2)
        )

    def integrand(z):
        return abs(mu + s * z) ** beta * math.exp(-0.5 * z * z) / _SQRT_2PI

    kink = -mu / s
    (left, _) = integrate.quad(integrand, -math.inf, kink, epsabs=0, epsrel=1e-10, limit=200)
    (right, _) = integrate.quad(integrand, kink, math.inf, epsabs=0, epsrel=1e-10, limit=200)
    return left + right


@functools.lru_cache(maxsize=4096)
def b2(alpha: float, beta: float, t1: int, t2: int, D: float) -> float:
    '''Return the nested Gaussian integral B^(2)_{alpha,beta}(t1, t2).

    The outer variable has variance t1^(2D), the inner one is centered on it with variance
    t2^(2D) - t1^(2D). For t1 = t2 the inner Gaussian is a point mass and the result is
    B_{alpha+beta} t1^((alpha+beta) D).

    #### Arguments
        alpha (float): Power of the outer variable, non-negative.
        beta (float): Power of the inner variable, non-negative.
        t1 (int): Earlier time.
        t2 (int): Later time, t2 >= t1.
        D (float): Scaling exponent.

    #### Return
        float: Value of the integral.
    '''
    # pylint: disable=invalid-name
    if alpha < 0 or beta < 0:
        raise InvalidParameter(f'need non-negative exponents, got ({alpha}, {beta})')
    if not 1 <= t1 <= t2:
        raise IndexOutOfRange(f'need 1 <= t1 <= t2, got t1={t1}, t2={t2}')
    if t1 == t2:
        return b_alpha(alpha + beta) * t1 ** ((alpha + beta) * D)

    var_1 = t1 ** (2 * D)
    (sd_1, sd_2) = (math.sqrt(var_1), math.sqrt(t2 ** (2 * D) - var_1))

    def outer(x):
        return x**alpha * math.exp(-0.5 * x * x) / _SQRT_2PI * _shifted_abs_moment(
            sd_1 * x, sd_2, beta)

    # The inner moment is even in its center, so the outer integral folds onto [0, inf)
    (val, _) = integrate.quad(outer, 0, math.inf, epsabs=0, epsrel=1e-9, limit=200)
    return 2 * var_1 ** (alpha / 2) * val


def K(model: ProcessModel, alpha: float, beta: float, t1: int, t2: int) -> float:
    '''Return the aggregated-return correlator K_{alpha,beta}(t1, t2).

    #### Arguments
        model (ProcessModel): Process model.
        alpha (float): Power of |R(t1, t1)|.
        beta (float): Power of |R(t2, t2)|.
        t1 (int): Earlier time.
        t2 (int): Later time, t1 <= t2 <= horizon.

    #### Return
        float: Correlator value; exactly 1 when alpha or beta is 0.
    '''
    # pylint: disable=invalid-name
    if not 1 <= t1 <= t2 <= model.horizon_n:
        raise IndexOutOfRange(f'need 1 <= t1 <= t2 <= {model.horizon_n}, got ({t1}, {t2})')
    if alpha == 0 or beta == 0:
        return 1.0

    m = model.mixture
    # <|r_1|^q> = B_q <sigma^q> since a_1 = 1
    ratio = (b_alpha(alpha + beta) * mixture.moment(m, alpha + beta)
             / (b_alpha(alpha) * mixture.moment(m, alpha)
                * b_alpha(beta) * mixture.moment(m, beta)))
    norm = t1 ** (alpha * model.D) * t2 ** (beta * model.D) * b_alpha(alpha + beta)
    return b2(float(alpha), float(beta), int(t1), int(t2), float(model.D)) / norm * ratio


# +---------------+
# | Theory curves |
# +---------------+

def kappa_curve(model: ProcessModel, alpha: float, beta: float) -> CorrelatorCurve:
    '''Predicted kappa_{alpha,beta}(1, n) for n = 2..horizon.
    '''
    value = kappa(model.mixture, alpha, beta)
    lags = range(2, model.horizon_n + 1)
    return curve_from_values(CorrelatorKind.KAPPA, [(1, n) for n in lags], [value] * len(lags),
                             alpha, beta, source='theory')


def vol_autocorr_curve(model: ProcessModel) -> CorrelatorCurve:
    '''Predicted c(1, n) for n = 2..horizon.
    '''
    lags = range(2, model.horizon_n + 1)
    return curve_from_values(CorrelatorKind.VOL_AUTOCORR, [(1, n) for n in lags],
                             [vol_autocorr(model, n) for n in lags], source='theory')


def linear_corr_curve(model: ProcessModel) -> CorrelatorCurve:
    '''Predicted linear correlation of r_1 and r_n, identically zero.
    '''
    lags = range(2, model.horizon_n + 1)
    return curve_from_values(CorrelatorKind.LINEAR, [(1, n) for n in lags], [0.0] * len(lags),
                             source='theory')


def K_grid(model: ProcessModel, alpha: float, beta: float,
           pairs: Optional[list[tuple[int, int]]] = None) -> CorrelatorCurve:
    '''Predicted K_{alpha,beta}(t1, t2), by default over every 1 <= t1 <= t2 <= horizon.
    '''
    # pylint: disable=invalid-name
    pairs = time_pairs(model.horizon_n) if pairs is None else pairs
    return curve_from_values(CorrelatorKind.K, pairs,
                             [K(model, alpha, beta, t1, t2) for (t1, t2) in pairs],
                             alpha, beta, source='theory')


def increment_curve(model: ProcessModel) -> CorrelatorCurve:
    '''Predicted m_2(t, 1) for t = 1..horizon.
    '''
    values = increment_second_moment(model)
    return curve_from_values(CorrelatorKind.INCREMENT_M2,
                             [(t,) for t in range(1, model.horizon_n + 1)], values,
                             source='theory')


def moment_curve(model: ProcessModel, alpha: float) -> CorrelatorCurve:
    '''Predicted <|R(t, t)|^alpha> for t = 1..horizon.
    '''
    times = range(1, model.horizon_n + 1)
    return curve_from_values(CorrelatorKind.MOMENT, [(t,) for t in times],
                             [total_abs_moment(model, t, alpha) for t in times], alpha,
                             source='theory')


def time_pairs(n: int) -> list[tuple[int, int]]:
    '''Every (t1, t2) with 1 <= t1 <= t2 <= n.
    '''
    return [(t1, t2) for t1 in range(1, n + 1) for t2 in range(t1, n + 1)]


# +-------------+
# | Calibration |
# +-------------+

@dataclass(frozen=True)
class CalibrationTargets:
    '''Targets matched by `calibrate`.

    #### Fields
        variance (float): Target <sigma^2>, i.e. <r_1^2>. Taken from `shape` when `None`.
        tail_index (float): Survival tail exponent zeta of g, P(|r| > x) ~ x^-zeta; sets
            delta - gamma = zeta + 1. `math.inf` selects a point mass.
        shape (np.ndarray): Optional samples of r_1 used for the variance and for sigma_min.
        fit_sigma_min (bool): Solve sigma_min so that B_1 <sigma> matches the mean of |shape|.
    '''
    variance: Optional[float]
    tail_index: float
    shape: Optional[np.ndarray] = None
    fit_sigma_min: bool = False


@dataclass(frozen=True)
class PowerLawInit:
    '''User-chosen part of the power-law measure.
    '''
    gamma: float = 1.0
    sigma_min: float = 0.0


_BRACKET_STEPS = 60


def _solve_d(gamma: float, delta: float, sigma_min: float, variance: float) -> float:
    '''Find d such that <sigma^2> equals the variance, by root-finding on log d.
    '''
    def residual(log_d):
        m = mixture.normalize(gamma, delta, math.exp(log_d), sigma_min)
        return math.log(mixture.moment(m, 2)) - math.log(variance)

    # Exact for sigma_min = 0, a starting point otherwise
    ratio = (mixture.power_integral(gamma, delta, 0.0)
             / mixture.power_integral(gamma + 2, delta, 0.0))
    guess = delta / 2 * math.log(variance * ratio)

    (lo, hi, step) = (guess - 1, guess + 1, 1.0)
    for _ in range(_BRACKET_STEPS):
        try:
            (f_lo, f_hi) = (residual(lo), residual(hi))
        except (OverflowError, ValueError, ZeroDivisionError) as err:
            raise CalibrationFailed(f'residual evaluation failed: {err}') from err
        if f_lo * f_hi <= 0:
            break
        step *= 2
        (lo, hi) = (lo - step, hi + step)
    else:
        raise CalibrationFailed(
            f'could not bracket d for variance {variance} with sigma_min={sigma_min}')

    log_d = optimize.brentq(residual, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=200)
    return math.exp(log_d)


def calibrate(targets: CalibrationTargets, init: PowerLawInit = PowerLawInit()) -> MixtureDensity:
    '''Fit a volatility measure to moment and tail targets.

    (gamma, delta) are fixed by the user and the tail index; d is solved for the variance, and
    optionally sigma_min for the mean absolute return of the shape samples.

    #### Arguments
        targets (CalibrationTargets): Quantities to match.
        init (PowerLawInit): Fixed small-sigma exponent and lower support bound.

    #### Return
        MixtureDensity: Calibrated measure.
    '''
    shape = None if targets.shape is None else np.asarray(targets.shape, dtype=float)
    variance = targets.variance
    if variance is None:
        if shape is None or shape.size == 0:
            raise InvalidParameter('need a variance target or shape samples')
        variance = float(np.mean(shape**2))
    if variance <= 0:
        raise InvalidParameter(f'variance target must be positive, got {variance}')

    if math.isinf(targets.tail_index):
        return mixture.degenerate(math.sqrt(variance))
    if targets.tail_index <= 2:
        raise InvalidParameter(
            f'tail index must exceed 2 for a finite variance, got {targets.tail_index}')

    gamma = init.gamma
    delta = gamma + targets.tail_index + 1

    def fitted(sigma_min):
        d = _solve_d(gamma, delta, sigma_min, variance)
        return mixture.normalize(gamma, delta, d, sigma_min)

    if not targets.fit_sigma_min:
        m = fitted(init.sigma_min)
    else:
        if shape is None or shape.size == 0:
            raise InvalidParameter('fitting sigma_min needs shape samples')
        mean_sigma = float(np.mean(np.abs(shape))) / b_alpha(1)
        # <sigma^2> >= sigma_min^2 zeta / (zeta - 2) for every d, with equality as d -> 0
        zeta = targets.tail_index
        upper = math.sqrt(variance * (zeta - 2) / zeta) * (1 - 1e-3)

        def residual(sigma_min):
            return mixture.moment(fitted(sigma_min), 1) - mean_sigma

        if residual(0.0) * residual(upper) > 0:
            raise CalibrationFailed(
                f'mean width {mean_sigma} is not reachable with variance {variance}')
        m = fitted(optimize.brentq(residual, 0.0, upper, xtol=1e-15, rtol=1e-12))

    logger.info('calibrated rho: gamma=%g delta=%g d=%.6g sigma_min=%.6g', m.gamma, m.delta, m.d,
                m.sigma_min)
    return m


@functools.lru_cache(maxsize=1)
def default_mixture() -> MixtureDensity:
    '''Reference stand-in for the fitted measure (not a published fit).

    gamma = 1, delta = 5, sigma_min = 0, and d such that <sigma^2> = 2.3e-7.
    '''
    return calibrate(CalibrationTargets(variance=2.3e-7, tail_index=3.0), PowerLawInit(1.0, 0.0))
