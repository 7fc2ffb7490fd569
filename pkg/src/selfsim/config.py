'''Run configuration of the command-line front end, read from a JSON object.
'''

import json
from dataclasses import dataclass, field, fields
from pathlib import Path as FilePath
from typing import Optional
from .errors import ConfigError, SelfSimError
from .ingest import PriceFormat, SessionSpec


# +-------+
# | Types |
# +-------+

DEFAULT_EXPONENTS = (0.5, 1.0, 1.5, 2.0)
DEFAULT_K_PAIRS = ((0.5, 0.5), (1.0, 1.0))
COLLAPSE_TIMES = (1, 5, 10, 17)


@dataclass(frozen=True)
class CalibrationConfig:
    '''Inputs of the `calibrate` command.

    #### Fields
        variance (float): Target <sigma^2>; taken from the shape samples when `None`.
        tail_index (float): Survival tail exponent of the scaling function, above 2.
        gamma (float): Small-sigma exponent of the measure.
        sigma_min (float): Lower support bound, or starting point when it is fitted.
        shape_samples (str): Ensemble CSV whose first column holds samples of r_1.
        fit_sigma_min (bool): Solve sigma_min from the mean absolute sample.
        D (float): Scaling exponent of the written model; estimated from the samples if `None`.
        horizon_n (int): Horizon of the written model; the sample horizon if `None`.
    '''
    # pylint: disable=invalid-name,too-many-instance-attributes
    variance: Optional[float] = None
    tail_index: float = 3.0
    gamma: float = 1.0
    sigma_min: float = 0.0
    shape_samples: Optional[str] = None
    fit_sigma_min: bool = False
    D: Optional[float] = None
    horizon_n: Optional[int] = None


@dataclass(frozen=True)
class RunConfig:
    '''Parameters shared by all commands. Paths are relative to the working directory.
    '''
    # pylint: disable=invalid-name,too-many-instance-attributes
    model: Optional[str] = None
    ensemble: Optional[str] = None
    prices: Optional[str] = None
    price_format: PriceFormat = PriceFormat()
    session: SessionSpec = field(default_factory=SessionSpec)
    seed: Optional[int] = None
    M: Optional[int] = None
    alphas: tuple[float, ...] = DEFAULT_EXPONENTS
    betas: tuple[float, ...] = DEFAULT_EXPONENTS
    k_pairs: tuple[tuple[float, float], ...] = DEFAULT_K_PAIRS
    collapse: Optional[tuple[tuple[int, int], ...]] = None
    bins: int = 40
    bootstrap_reps: int = 100
    jobs: int = 1
    out: str = 'out'
    calibration: Optional[CalibrationConfig] = None

    def __post_init__(self):
        if not self.alphas or not self.betas:
            raise ConfigError('the alpha and beta grids must not be empty')
        if self.M is not None and self.M < 1:
            raise ConfigError(f'M must be at least 1, got {self.M}')
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise ConfigError(f'seed must be an unsigned 64-bit integer, got {self.seed}')
        if self.bins < 10:
            raise ConfigError(f'need at least 10 bins, got {self.bins}')
        if self.bootstrap_reps < 2:
            raise ConfigError(f'need at least 2 bootstrap replicates, got {self.bootstrap_reps}')
        if self.jobs == 0:
            raise ConfigError('jobs must be non-zero')

    def require(self, name: str):
        '''Return a field that the running command cannot do without.
        '''
        value = getattr(self, name)
        if value is None:
            raise ConfigError(f'missing required setting {name!r}')
        return value

    def require_file(self, name: str) -> FilePath:
        '''Return a required input path, checking that it exists.
        '''
        path = FilePath(self.require(name))
        if not path.is_file():
            raise ConfigError(f'{name}: no such file {str(path)!r}')
        return path

    def collapse_spec(self, n: int) -> list[tuple[int, int]]:
        '''Return the (t, T) collapse pairs, by default (t, t) and (t, 1) for t in 1, 5, 10, 17, \
            keeping only pairs within the horizon.
        '''
        if self.collapse is not None:
            return list(self.collapse)
        spec = []
        for t in COLLAPSE_TIMES:
            if t <= n:
                spec += [(t, t)] if t == 1 else [(t, t), (t, 1)]
        return spec


# +---------+
# | Loading |
# +---------+

def _pairs(value, name: str, cast) -> tuple:
    try:
        pairs = tuple((cast(a), cast(b)) for (a, b) in value)
    except (TypeError, ValueError) as err:
        raise ConfigError(f'{name} must be a list of pairs: {err}') from err
    return pairs


def config_from_json(obj: dict) -> RunConfig:
    '''Build a run configuration from its JSON object.

    #### Arguments
        obj (dict): Object whose keys are `RunConfig` fields; unknown keys are rejected.

    #### Return
        RunConfig: Validated configuration.
    '''
    if not isinstance(obj, dict):
        raise ConfigError('the configuration must be a JSON object')
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(obj) - known)
    if unknown:
        raise ConfigError(f'unknown settings: {", ".join(unknown)}')

    kwargs = dict(obj)
    try:
        if 'price_format' in kwargs:
            kwargs['price_format'] = PriceFormat(**kwargs['price_format'])
        if 'session' in kwargs:
            kwargs['session'] = SessionSpec.from_json(kwargs['session'])
        if 'calibration' in kwargs:
            kwargs['calibration'] = CalibrationConfig(**kwargs['calibration'])
        for name in ('alphas', 'betas'):
            if name in kwargs:
                kwargs[name] = tuple(float(a) for a in kwargs[name])
        if 'k_pairs' in kwargs:
            kwargs['k_pairs'] = _pairs(kwargs['k_pairs'], 'k_pairs', float)
        if kwargs.get('collapse') is not None:
            kwargs['collapse'] = _pairs(kwargs['collapse'], 'collapse', int)
        return RunConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError, SelfSimError) as err:
        raise ConfigError(f'invalid configuration: {err}') from err


def load_config(path: FilePath) -> RunConfig:
    '''Read a run configuration file.
    '''
    try:
        with open(path, encoding='utf-8') as fp:
            obj = json.load(fp)
    except OSError as err:
        raise ConfigError(f'cannot read configuration {str(path)!r}: {err.strerror}') from err
    except json.JSONDecodeError as err:
        raise ConfigError(f'{path}: line {err.lineno}: {err.msg}') from err
    return config_from_json(obj)
