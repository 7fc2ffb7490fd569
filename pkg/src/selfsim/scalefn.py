'''Scaling function g, time-inhomogeneous return densities, and characteristic functions.

The densities are always computed from the Gaussian-mixture form, never by Fourier inversion.
Characteristic functions are real since g is even.
'''

import functools
import math
from dataclasses import dataclass
import numpy as np
from . import mixture
from .errors import IndexOutOfRange
from .mixture import Degenerate, MixtureDensity
from .process import ProcessModel, aggregate_scale, coefficients

_SQRT_2PI = math.sqrt(2 * math.pi)
# Outer integrals over rho are memoized per (measure, argument)
_CACHE_SIZE = 1 << 16


# +-------+
# | Types |
# +-------+

@dataclass(frozen=True)
class ReturnPdfQuery:
    '''Point at which to evaluate the density of R(t, T).
    '''
    # pylint: disable=invalid-name
    t: int
    T: int
    r: float

    def __post_init__(self):
        if not 1 <= self.T <= self.t:
            raise IndexOutOfRange(f'need 1 <= T <= t, got t={self.t}, T={self.T}')


# +-----------+
# | Densities |
# +-----------+

def _normal_pdf(x: float, sigma: float) -> float:
    return math.exp(-0.5 * (x / sigma) ** 2) / (_SQRT_2PI * sigma)


def g_density(m: MixtureDensity, x: float) -> float:
    '''Evaluate the scaling function g(x) = E_rho[N(x; 0, sigma^2)].

    #### Arguments
        m (MixtureDensity): Volatility measure.
        x (float): Rescaled return.

    #### Return
        float: Density value.
    '''
    return _g_value(m, float(x))


@functools.lru_cache(maxsize=_CACHE_SIZE)
def _g_value(m: MixtureDensity, x: float) -> float:
    if isinstance(m, Degenerate):
        return _normal_pdf(x, m.sigma0)
    breaks = (abs(x),) if x != 0 else ()
    return mixture.expect(m, lambda sigma: _normal_pdf(x, sigma), breaks)


def return_pdf(model: ProcessModel, q: ReturnPdfQuery) -> float:
    '''Evaluate the density of R(t, T) at r: g(r / s) / s with s = sqrt(t^(2D) - (t-T)^(2D)).

    #### Arguments
        model (ProcessModel): Process model.
        q (ReturnPdfQuery): Evaluation point.

    #### Return
        float: Density value.
    '''
    scale = aggregate_scale(model.D, q.t, q.T)
    return g_density(model.mixture, q.r / scale) / scale


def g_table(m: MixtureDensity, xs) -> np.ndarray:
    '''Tabulate g on a grid.
    '''
    return np.array([g_density(m, float(x)) for x in xs])


def return_pdf_table(model: ProcessModel, t: int, T: int, rs) -> np.ndarray:
    '''Tabulate the density of R(t, T) on a grid.
    '''
    # pylint: disable=invalid-name
    return np.array([return_pdf(model, ReturnPdfQuery(t, T, float(r))) for r in rs])


# +--------------------------+
# | Characteristic functions |
# +--------------------------+

def char_fn(model: ProcessModel, ks) -> float:
    '''Evaluate the joint characteristic function of the first len(ks) elementary returns.

    #### Arguments
        model (ProcessModel): Process model.
        ks (Sequence[float]): Wave numbers k_1..k_n, with n <= horizon.

    #### Return
        float: E_rho[exp(-sigma^2 sum_i a_i^2 k_i^2 / 2)].
    '''
    ks = np.asarray(ks, dtype=float)
    if not 1 <= ks.size <= model.horizon_n:
        raise IndexOutOfRange(f'need 1 <= n <= {model.horizon_n}, got n={ks.size}')
    if not ks.any():
        return 1.0

    var = float(np.sum((coefficients(model.D, ks.size) * ks) ** 2))
    return _gaussian_transform(model.mixture, var)


@functools.lru_cache(maxsize=_CACHE_SIZE)
def _gaussian_transform(m: MixtureDensity, var: float) -> float:
    '''E_rho[exp(-var sigma^2 / 2)].
    '''
    return mixture.expect(m, lambda sigma: math.exp(-0.5 * var * sigma**2), (1 / math.sqrt(var),))


def char_fn_diag(model: ProcessModel, n: int, k: float) -> float:
    '''Evaluate p~^n(k, ..., k), which equals p~^1(n^D k).

    #### Arguments
        model (ProcessModel): Process model.
        n (int): Number of returns, 1 <= n <= horizon.
        k (float): Common wave number.

    #### Return
        float: Characteristic function value.
    '''
    if not 1 <= n <= model.horizon_n:
        raise IndexOutOfRange(f'need 1 <= n <= {model.horizon_n}, got n={n}')
    return char_fn(model, [k] * n)


def char_fn_marginal(model: ProcessModel, i: int, k: float) -> float:
    '''Evaluate p~^n(0, .., k_i, .., 0), which equals p~^1(a_i k).
    '''
    if not 1 <= i <= model.horizon_n:
        raise IndexOutOfRange(f'need 1 <= i <= {model.horizon_n}, got i={i}')
    ks = [0.0] * i
    ks[-1] = k
    return char_fn(model, ks)
