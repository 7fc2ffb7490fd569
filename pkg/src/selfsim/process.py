'''Process model: scaling exponent, volatility measure, and horizon of the return histories.
'''

import json
import math
from dataclasses import dataclass
from pathlib import Path as FilePath
import intervals as interval
import numpy as np
from . import mixture
from .errors import IndexOutOfRange, InvalidParameter
from .mixture import MixtureDensity


# +-------+
# | Types |
# +-------+

D_RANGE = interval.open(0, 1)
DEFAULT_HORIZON = 17  # Ten-minute bars between 9:00 and 11:50


@dataclass(frozen=True)
class ProcessModel:
    '''Joint law of the elementary returns of one history.

    #### Fields
        D (float): Scaling exponent, 0 < D < 1.
        mixture (MixtureDensity): Volatility measure shared by all returns of a history.
        horizon_n (int): Number of elementary returns per history.
    '''
    # pylint: disable=invalid-name
    D: float
    mixture: MixtureDensity
    horizon_n: int = DEFAULT_HORIZON

    def __post_init__(self):
        if self.D not in D_RANGE:
            raise InvalidParameter(f'need 0 < D < 1, got {self.D}')
        if self.horizon_n < 1:
            raise InvalidParameter(f'horizon must be at least 1, got {self.horizon_n}')


Path = tuple[float, ...]  # Elementary returns r_1..r_n of one history


# +--------------+
# | Coefficients |
# +--------------+

def coefficient_a(D: float, i: int) -> float:
    '''Return the width a_i = sqrt(i^(2D) - (i-1)^(2D)) of the i-th elementary return.

    #### Arguments
        D (float): Scaling exponent.
        i (int): 1-based position in the history.

    #### Return
        float: Coefficient a_i; a_1^2 + ... + a_t^2 = t^(2D).
    '''
    # pylint: disable=invalid-name
    if i < 1:
        raise IndexOutOfRange(f'position must be at least 1, got {i}')
    if D not in D_RANGE:
        raise InvalidParameter(f'need 0 < D < 1, got {D}')
    return math.sqrt(i ** (2 * D) - (i - 1) ** (2 * D))


def coefficients(D: float, n: int) -> np.ndarray:
    '''Return the vector (a_1, ..., a_n).
    '''
    # pylint: disable=invalid-name
    return np.array([coefficient_a(D, i) for i in range(1, n + 1)])


def aggregate_scale(D: float, t: int, T: int) -> float:
    '''Return sqrt(t^(2D) - (t-T)^(2D)), the width of R(t, T) in units of sigma.
    '''
    # pylint: disable=invalid-name
    return math.sqrt(t ** (2 * D) - (t - T) ** (2 * D))


# +-------------+
# | Aggregation |
# +-------------+

def check_window(t: int, T: int, n: int):
    '''Validate 1 <= T <= t <= n.
    '''
    # pylint: disable=invalid-name
    if not 1 <= T <= t <= n:
        raise IndexOutOfRange(f'need 1 <= T <= t <= {n}, got t={t}, T={T}')


def aggregate_return(path: Path, t: int, T: int) -> float:
    '''Return r(t, T), the sum of the elementary returns in (t - T, t].

    #### Arguments
        path (Path): Elementary returns of one history.
        t (int): End of the interval.
        T (int): Length of the interval.

    #### Return
        float: Aggregated return; r(t, t) is the total return up to t.
    '''
    # pylint: disable=invalid-name
    check_window(t, T, len(path))
    return math.fsum(path[t - T:t])


# +---------------+
# | Serialization |
# +---------------+

def model_to_json(model: ProcessModel) -> dict:
    '''Convert a model to its JSON object.
    '''
    return {
        'D': model.D,
        'horizon_n': model.horizon_n,
        'mixture': mixture.to_json(model.mixture),
    }


def model_from_json(obj: dict) -> ProcessModel:
    '''Rebuild a model from its JSON object.
    '''
    try:
        return ProcessModel(
            float(obj['D']),
            mixture.from_json(obj['mixture']),
            int(obj.get('horizon_n', DEFAULT_HORIZON)),
        )
    except KeyError as err:
        raise InvalidParameter(f'model object lacks field {err}') from err


def load_model(path: FilePath) -> ProcessModel:
    '''Read a model JSON file.
    '''
    with open(path, encoding='utf-8') as fp:
        return model_from_json(json.load(fp))


def save_model(model: ProcessModel, path: FilePath):
    '''Write a model JSON file.
    '''
    with open(path, 'w', encoding='utf-8') as fp:
        json.dump(model_to_json(model), fp, indent=2, sort_keys=True)
        fp.write('\n')
