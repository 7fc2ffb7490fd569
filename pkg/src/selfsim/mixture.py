'''Volatility measure rho(sigma) mixing the Gaussian widths of the process.

A `PowerLaw` measure has density A sigma^gamma / (d + sigma^delta) on [sigma_min, +inf). All of
its integrals are evaluated in the dimensionless variable u = sigma / d^(1/delta), where the
density becomes u^gamma / (1 + u^delta) and the scale d only enters as a power of sigma.
'''

import functools
import math
from dataclasses import dataclass
from typing import Callable, Union
import intervals as interval
import numpy as np
from scipy import integrate
from .errors import DegenerateDensity, DivergentMoment, InvalidParameter, NonIntegrable


# +-------+
# | Types |
# +-------+

@dataclass(frozen=True)
class PowerLaw:
    '''Power-law volatility measure. Build instances with `normalize()`.
    '''
    gamma: float
    delta: float
    d: float
    sigma_min: float
    norm_A: float

    @functools.cached_property
    def scale(self) -> float:
        '''Width d^(1/delta) mapping sigma onto the dimensionless variable u.
        '''
        return self.d ** (1 / self.delta)

    @functools.cached_property
    def u_min(self) -> float:
        '''Lower support bound in the dimensionless variable.
        '''
        return self.sigma_min / self.scale

    @functools.cached_property
    def mass(self) -> float:
        '''Unnormalized mass of u^gamma / (1 + u^delta) over the support.
        '''
        return power_integral(self.gamma, self.delta, self.u_min)


@dataclass(frozen=True)
class Degenerate:
    '''Point mass at sigma0: the process reduces to independent Gaussian increments.
    '''
    sigma0: float


MixtureDensity = Union[PowerLaw, Degenerate]


# +------------+
# | Quadrature |
# +------------+

_EPS_REL = 1e-12
_QUAD_LIMIT = 200
# Beyond the cutoff u^-delta stays below this ratio and the tail is summed as a series
_TAIL_RATIO = 1e-4
_TAIL_TERMS = 64


def power_integral(p: float, delta: float, u_min: float) -> float:
    '''Compute the integral of u^p / (1 + u^delta) over [u_min, +inf).

    The finite core is integrated adaptively; beyond the cutoff the integrand is expanded as
    sum_k (-1)^k u^(p - delta (k+1)) and integrated term by term.

    #### Arguments
        p (float): Power of the numerator, with p + 1 < delta.
        delta (float): Power of the denominator.
        u_min (float): Lower integration bound, non-negative.

    #### Return
        float: Value of the integral.
    '''
    assert p + 1 < delta and u_min >= 0

    cutoff = max(u_min, _TAIL_RATIO ** (-1 / delta))

    core = 0.0
    edges = [u_min] + [b for b in (1.0,) if u_min < b < cutoff] + [cutoff]
    for (lo, hi) in zip(edges[:-1], edges[1:]):
        if hi > lo:
            (val, _) = integrate.quad(
                lambda u: u**p / (1 + u**delta), lo, hi,
                epsabs=0, epsrel=_EPS_REL, limit=_QUAD_LIMIT)
            core += val

    tail = 0.0
    for k in range(_TAIL_TERMS):
        expo = p - delta * (k + 1) + 1
        term = (-1)**k * cutoff**expo / -expo
        tail += term
        if abs(term) <= 1e-17 * abs(tail):
            break

    return core + tail


def _check_moment_order(m: PowerLaw, q: float):
    finite = interval.closedopen(0, m.delta - m.gamma - 1)
    if q < 0:
        raise InvalidParameter(f'moment order must be non-negative, got {q}')
    if q not in finite:
        raise DivergentMoment(
            f'<sigma^{q}> diverges: need q < delta - gamma - 1 = {m.delta - m.gamma - 1}')


# +--------------+
# | Construction |
# +--------------+

def normalize(gamma: float, delta: float, d: float, sigma_min: float = 0.0) -> PowerLaw:
    '''Build a normalized power-law volatility measure.

    #### Arguments
        gamma (float): Small-sigma exponent, 0 < gamma < delta.
        delta (float): Large-sigma exponent; the density decays as sigma^-(delta - gamma).
        d (float): Positive scale parameter.
        sigma_min (float): Lower support bound. Defaults to 0.

    #### Return
        PowerLaw: Measure whose density integrates to 1.
    '''
    if not 0 < gamma < delta:
        raise InvalidParameter(f'need 0 < gamma < delta, got gamma={gamma}, delta={delta}')
    if d <= 0:
        raise InvalidParameter(f'd must be positive, got {d}')
    if sigma_min < 0:
        raise InvalidParameter(f'sigma_min must be non-negative, got {sigma_min}')
    if delta - gamma <= 1:
        raise NonIntegrable(f'tail exponent delta - gamma = {delta - gamma} must exceed 1')

    scale = d ** (1 / delta)
    mass = power_integral(gamma, delta, sigma_min / scale)
    norm_a = d / (scale ** (gamma + 1) * mass)
    return PowerLaw(float(gamma), float(delta), float(d), float(sigma_min), norm_a)


def degenerate(sigma0: float) -> Degenerate:
    '''Build a point-mass measure.

    #### Arguments
        sigma0 (float): Location of the mass, positive.

    #### Return
        Degenerate: Built measure.
    '''
    if sigma0 <= 0:
        raise InvalidParameter(f'sigma0 must be positive, got {sigma0}')
    return Degenerate(float(sigma0))


# +------------+
# | Evaluation |
# +------------+

def density(m: MixtureDensity, sigma: float) -> float:
    '''Evaluate rho at a given width.

    #### Arguments
        m (MixtureDensity): Volatility measure.
        sigma (float): Width, non-negative.

    #### Return
        float: Density value, 0 below the support.
    '''
    if isinstance(m, Degenerate):
        raise DegenerateDensity('a point mass has no pointwise density')
    if sigma < 0:
        raise InvalidParameter(f'sigma must be non-negative, got {sigma}')
    if sigma < m.sigma_min:
        return 0.0
    return m.norm_A * sigma**m.gamma / (m.d + sigma**m.delta)


def moment(m: MixtureDensity, q: float) -> float:
    '''Compute <sigma^q> under rho.

    #### Arguments
        m (MixtureDensity): Volatility measure.
        q (float): Moment order, non-negative.

    #### Return
        float: Moment value.
    '''
    if isinstance(m, Degenerate):
        if q < 0:
            raise InvalidParameter(f'moment order must be non-negative, got {q}')
        return m.sigma0**q
    _check_moment_order(m, q)
    if q == 0:
        return 1.0
    return m.scale**q * power_integral(m.gamma + q, m.delta, m.u_min) / m.mass


def expect(m: MixtureDensity, fn: Callable[[float], float], breaks: tuple = ()) -> float:
    '''Integrate a function of sigma against rho.

    #### Arguments
        m (MixtureDensity): Volatility measure.
        fn (Callable[[float], float]): Integrand, bounded by a finite moment of rho.
        breaks (tuple): Widths where the integrand changes scale, passed to the quadrature as \
            subdivision points. Defaults to none.

    #### Return
        float: Value of E_rho[fn(sigma)].
    '''
    if isinstance(m, Degenerate):
        return float(fn(m.sigma0))

    def weighted(u):
        return u**m.gamma / (1 + u**m.delta) * fn(m.scale * u)

    points = sorted({1.0, *(b / m.scale for b in breaks)})
    edges = [m.u_min] + [p for p in points if p > m.u_min]

    total = 0.0
    for (lo, hi) in zip(edges, edges[1:] + [math.inf]):
        (val, _) = integrate.quad(weighted, lo, hi, epsabs=0, epsrel=1e-11, limit=_QUAD_LIMIT)
        total += val
    return total / m.mass


def tail_exponent(m: MixtureDensity) -> float:
    '''Return the exponent of the large-sigma decay sigma^-(delta - gamma), infinite for a point \
        mass.
    '''
    return math.inf if isinstance(m, Degenerate) else m.delta - m.gamma


# +----------+
# | Sampling |
# +----------+

def _sample_unit(m: PowerLaw, rng: np.random.Generator, count: int) -> np.ndarray:
    '''Rejection-sample the dimensionless width u.

    The proposal is u^gamma on the core [u_min, 1] (drawn by CDF inversion) and a Pareto tail
    u^(gamma - delta) on [max(1, u_min), +inf). It dominates the target everywhere and the
    acceptance probability is at least 1/2.
    '''
    (gamma, delta, u_min) = (m.gamma, m.delta, m.u_min)
    knee = max(1.0, u_min)
    pareto = delta - gamma - 1
    low = u_min ** (gamma + 1)
    w_core = (1 - low) / (gamma + 1) if u_min < 1 else 0.0
    w_tail = knee ** -pareto / pareto
    p_core = w_core / (w_core + w_tail)

    out = np.empty(count)
    filled = 0
    while filled < count:
        k = count - filled
        pick_core = rng.random(k) < p_core
        v = rng.random(k)
        with np.errstate(over='ignore', divide='ignore'):
            u = np.where(
                pick_core,
                (low + v * (1 - low)) ** (1 / (gamma + 1)),
                knee * (1 - v) ** (-1 / pareto),
            )
            ratio = np.where(pick_core, 1 / (1 + u**delta), 1 / (1 + u**-delta))
        accept = rng.random(k) < ratio
        taken = u[accept]
        out[filled:filled + taken.size] = taken
        filled += taken.size
    return out


def sample(m: MixtureDensity, rng: np.random.Generator, count: int) -> np.ndarray:
    '''Draw independent widths from rho.

    #### Arguments
        m (MixtureDensity): Volatility measure.
        rng (np.random.Generator): Random stream, owned by the caller.
        count (int): Number of draws, at least 1.

    #### Return
        np.ndarray: Drawn widths.
    '''
    if count < 1:
        raise InvalidParameter(f'count must be at least 1, got {count}')
    if isinstance(m, Degenerate):
        return np.full(count, m.sigma0)
    return m.scale * _sample_unit(m, rng, count)


# +---------------+
# | Serialization |
# +---------------+

def to_json(m: MixtureDensity) -> dict:
    '''Convert a measure to its JSON object. The normalization is never written.
    '''
    if isinstance(m, Degenerate):
        return {'type': 'degenerate', 'sigma0': m.sigma0}
    return {
        'type': 'powerlaw',
        'gamma': m.gamma,
        'delta': m.delta,
        'd': m.d,
        'sigma_min': m.sigma_min,
    }


def from_json(obj: dict) -> MixtureDensity:
    '''Rebuild a measure from its JSON object, recomputing the normalization.

    #### Arguments
        obj (dict): Object with a `type` key, either `powerlaw` or `degenerate`.

    #### Return
        MixtureDensity: Rebuilt measure.
    '''
    kind = obj.get('type')
    try:
        if kind == 'degenerate':
            return degenerate(float(obj['sigma0']))
        if kind == 'powerlaw':
            return normalize(
                float(obj['gamma']),
                float(obj['delta']),
                float(obj['d']),
                float(obj.get('sigma_min', 0.0)),
            )
    except KeyError as err:
        raise InvalidParameter(f'mixture object lacks field {err}') from err
    raise InvalidParameter(f'unknown mixture type {kind!r}')
