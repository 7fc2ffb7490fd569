'''Ensemble estimators: moments, correlators, scaling exponent, and data collapse.

Every statistic is an average across histories at fixed positions in the session, never a
sliding-window average along a history.
'''

import math
from dataclasses import dataclass
import numpy as np
from ..ensemble import (CollapseEntry, CollapsePlotData, CorrelatorCurve, CorrelatorKind,
                        Ensemble, curve_from_values)
from ..errors import (DegenerateVariance, IndexOutOfRange, InsufficientData, InvalidParameter,
                      ZeroDenominator)
from ..process import aggregate_scale, check_window


# +------------+
# | Detrending |
# +------------+

def detrend(e: Ensemble) -> Ensemble:
    '''Subtract each column's ensemble mean.

    #### Arguments
        e (Ensemble): Input ensemble.

    #### Return
        Ensemble: Detrended copy; an already detrended ensemble is returned unchanged.
    '''
    if e.detrended:
        return e
    centered = e.returns - e.returns.mean(axis=0, keepdims=True)
    return Ensemble(centered, e.meta, True)


def _column(e: Ensemble, i: int) -> np.ndarray:
    if not 1 <= i <= e.n:
        raise IndexOutOfRange(f'need 1 <= i <= {e.n}, got {i}')
    return e.returns[:, i - 1]


def _check_lag(e: Ensemble, n: int):
    if not 2 <= n <= e.n:
        raise IndexOutOfRange(f'need 2 <= n <= {e.n}, got n={n}')


# +---------+
# | Moments |
# +---------+

def emp_moment(e: Ensemble, t: int, alpha: float) -> float:
    '''Return m_alpha(t, t) = mean over histories of |r(t, t)|^alpha.
    '''
    if alpha <= 0:
        raise InvalidParameter(f'alpha must be positive, got {alpha}')
    if not 1 <= t <= e.n:
        raise IndexOutOfRange(f'need 1 <= t <= {e.n}, got t={t}')
    return float(np.mean(np.abs(e.total(t)) ** alpha))


def emp_increment_second_moment(e: Ensemble) -> np.ndarray:
    '''Return m_2(t, 1) for t = 1..n, the mean squared elementary return per position.
    '''
    return np.mean(e.returns**2, axis=0)


def emp_linear_corr(e: Ensemble, n: int) -> float:
    '''Return the linear correlation mean(r_1 r_n) / sqrt(m_2(1, 1) m_2(n, 1)).
    '''
    _check_lag(e, n)
    (r_1, r_n) = (_column(e, 1), _column(e, n))
    (m2_1, m2_n) = (np.mean(r_1**2), np.mean(r_n**2))
    if m2_1 == 0 or m2_n == 0:
        raise DegenerateVariance(f'zero second moment at position 1 or {n}')
    return float(np.mean(r_1 * r_n) / math.sqrt(m2_1 * m2_n))


def emp_kappa(e: Ensemble, alpha: float, beta: float, n: int) -> float:
    '''Return M sum(|r_1|^alpha |r_n|^beta) / (sum |r_1|^alpha sum |r_n|^beta).

    #### Arguments
        e (Ensemble): Ensemble.
        alpha (float): Power of |r_1|, positive.
        beta (float): Power of |r_n|, positive.
        n (int): Lag, 2 <= n <= horizon.

    #### Return
        float: Empirical kappa_{alpha,beta}(1, n); 1 for independent returns.
    '''
    if alpha <= 0 or beta <= 0:
        raise InvalidParameter(f'need positive exponents, got ({alpha}, {beta})')
    _check_lag(e, n)
    return _ratio_of_means(np.abs(_column(e, 1)) ** alpha, np.abs(_column(e, n)) ** beta)


def _ratio_of_means(x: np.ndarray, y: np.ndarray) -> float:
    (sx, sy) = (x.sum(), y.sum())
    if sx == 0 or sy == 0:
        raise ZeroDenominator('a sum of absolute powers vanishes')
    return float(x.size * np.sum(x * y) / (sx * sy))


def emp_vol_autocorr(e: Ensemble, n: int) -> float:
    '''Return the empirical volatility autocorrelation c(1, n).

    Numerator: sum |r_1||r_n| - (1/M) sum |r_1| sum |r_n|.
    Denominator: sum |r_1|^2 - (1/M) (sum |r_1|)^2.
    '''
    _check_lag(e, n)
    (x, y) = (np.abs(_column(e, 1)), np.abs(_column(e, n)))
    size = x.size
    den = np.sum(x * x) - x.sum() * x.sum() / size
    # Cancellation leaves a small positive residue when |r_1| is constant
    if den <= 1e-12 * np.sum(x * x):
        raise DegenerateVariance('|r_1| has zero variance')
    return float((np.sum(x * y) - x.sum() * y.sum() / size) / den)


def emp_K(e: Ensemble, alpha: float, beta: float, t1: int, t2: int) -> float:
    '''Return M sum(|R(t1,t1)|^alpha |R(t2,t2)|^beta) / (sum |R(t1,t1)|^alpha sum \
        |R(t2,t2)|^beta).

    #### Arguments
        e (Ensemble): Ensemble.
        alpha (float): Power of |R(t1, t1)|, non-negative.
        beta (float): Power of |R(t2, t2)|, non-negative.
        t1 (int): Earlier time.
        t2 (int): Later time, t1 <= t2 <= horizon.

    #### Return
        float: Empirical K_{alpha,beta}(t1, t2).
    '''
    # pylint: disable=invalid-name
    if not 1 <= t1 <= t2 <= e.n:
        raise IndexOutOfRange(f'need 1 <= t1 <= t2 <= {e.n}, got ({t1}, {t2})')
    if alpha < 0 or beta < 0:
        raise InvalidParameter(f'need non-negative exponents, got ({alpha}, {beta})')
    if alpha == 0 or beta == 0:
        return 1.0
    return _ratio_of_means(np.abs(e.total(t1)) ** alpha, np.abs(e.total(t2)) ** beta)


# +--------------------+
# | Scaling exponent D |
# +--------------------+

@dataclass(frozen=True)
class ScalingFit:
    '''Result of `estimate_D`.

    #### Fields
        D (float): Mean of the per-alpha exponents.
        stderr (float): Population standard deviation of the per-alpha exponents.
        per_alpha (tuple): Pairs (alpha, slope / alpha).
    '''
    # pylint: disable=invalid-name
    D: float
    stderr: float
    per_alpha: tuple[tuple[float, float], ...]


def estimate_D(e: Ensemble, alphas) -> ScalingFit:
    '''Estimate D from m_alpha(t, t) ~ t^(alpha D) by unweighted log-log least squares over \
        t = 1..n.

    #### Arguments
        e (Ensemble): Ensemble with n >= 3.
        alphas (Sequence[float]): At least two positive exponents.

    #### Return
        ScalingFit: Combined and per-alpha exponents.
    '''
    # pylint: disable=invalid-name
    alphas = [float(a) for a in alphas]
    if len(alphas) < 2:
        raise InsufficientData(f'need at least 2 exponents, got {len(alphas)}')
    if e.n < 3:
        raise InsufficientData(f'need at least 3 positions, got {e.n}')
    if e.M < 2:
        raise InsufficientData(f'need at least 2 histories, got {e.M}')

    log_t = np.log(np.arange(1, e.n + 1))
    design = np.vstack([np.ones_like(log_t), log_t]).T
    per_alpha = []
    for alpha in alphas:
        moments = np.array([emp_moment(e, t, alpha) for t in range(1, e.n + 1)])
        if np.any(moments <= 0):
            raise InsufficientData(f'vanishing moment of order {alpha}')
        slope = np.linalg.lstsq(design, np.log(moments), rcond=None)[0][1]
        per_alpha.append((alpha, float(slope / alpha)))

    exponents = np.array([d for (_, d) in per_alpha])
    return ScalingFit(float(exponents.mean()), float(exponents.std()), tuple(per_alpha))


# +---------------+
# | Data collapse |
# +---------------+

_COLLAPSE_SPAN = 5.0  # Half-width of the histogram grid, in rescaled standard deviations


def collapse(e: Ensemble, D: float, spec, bins: int = 40) -> CollapsePlotData:
    '''Histogram r(t, T) / s with s = sqrt(t^(2D) - (t-T)^(2D)), density-normalized on the \
        rescaled axis.

    #### Arguments
        e (Ensemble): Ensemble.
        D (float): Scaling exponent used for rescaling.
        spec (Sequence[tuple[int, int]]): Pairs (t, T).
        bins (int): Number of uniform bins, at least 10. Defaults to 40.

    #### Return
        CollapsePlotData: One rescaled histogram per pair.
    '''
    # pylint: disable=invalid-name
    if bins < 10:
        raise InvalidParameter(f'need at least 10 bins, got {bins}')

    entries = []
    for (t, T) in spec:
        check_window(t, T, e.n)
        x = e.window(t, T) / aggregate_scale(D, t, T)
        half = _COLLAPSE_SPAN * float(np.std(x))
        if half == 0:
            raise DegenerateVariance(f'r({t}, {T}) is constant across histories')
        (counts, edges) = np.histogram(x, bins=bins, range=(-half, half))
        width = edges[1] - edges[0]
        density = counts / (x.size * width)
        centers = 0.5 * (edges[:-1] + edges[1:])
        entries.append(CollapseEntry(t, T, centers, density, counts))
    return CollapsePlotData(tuple(entries))


# +--------+
# | Curves |
# +--------+

def kappa_curve(e: Ensemble, alpha: float, beta: float) -> CorrelatorCurve:
    '''Empirical kappa_{alpha,beta}(1, n) for n = 2..horizon.
    '''
    lags = range(2, e.n + 1)
    return curve_from_values(CorrelatorKind.KAPPA, [(1, n) for n in lags],
                             [emp_kappa(e, alpha, beta, n) for n in lags], alpha, beta)


def vol_autocorr_curve(e: Ensemble) -> CorrelatorCurve:
    '''Empirical c(1, n) for n = 2..horizon.
    '''
    lags = range(2, e.n + 1)
    return curve_from_values(CorrelatorKind.VOL_AUTOCORR, [(1, n) for n in lags],
                             [emp_vol_autocorr(e, n) for n in lags])


def linear_corr_curve(e: Ensemble) -> CorrelatorCurve:
    '''Empirical linear correlation of r_1 and r_n for n = 2..horizon.
    '''
    lags = range(2, e.n + 1)
    return curve_from_values(CorrelatorKind.LINEAR, [(1, n) for n in lags],
                             [emp_linear_corr(e, n) for n in lags])


def K_grid(e: Ensemble, alpha: float, beta: float, pairs) -> CorrelatorCurve:
    '''Empirical K_{alpha,beta}(t1, t2) over the given pairs.
    '''
    # pylint: disable=invalid-name
    return curve_from_values(CorrelatorKind.K, pairs,
                             [emp_K(e, alpha, beta, t1, t2) for (t1, t2) in pairs], alpha, beta)


def increment_curve(e: Ensemble) -> CorrelatorCurve:
    '''Empirical m_2(t, 1) for t = 1..horizon.
    '''
    return curve_from_values(CorrelatorKind.INCREMENT_M2, [(t,) for t in range(1, e.n + 1)],
                             emp_increment_second_moment(e))


def moment_curve(e: Ensemble, alpha: float) -> CorrelatorCurve:
    '''Empirical m_alpha(t, t) for t = 1..horizon.
    '''
    times = range(1, e.n + 1)
    return curve_from_values(CorrelatorKind.MOMENT, [(t,) for t in times],
                             [emp_moment(e, t, alpha) for t in times], alpha)
