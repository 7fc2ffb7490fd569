'''Error bars for empirical correlators.

Two procedures are available: the spread of a curve expected to be constant (used for kappa),
and the parametric bootstrap, which re-simulates many ensembles of the same size from the model
and scores every statistic in `compare`.
'''

import logging
from dataclasses import dataclass
from typing import Optional
import numpy as np
from joblib import Parallel, delayed
from .. import theory
from ..ensemble import CorrelatorCurve, CorrelatorKind, Ensemble
from ..errors import InsufficientData, InvalidParameter
from ..process import ProcessModel
from ..simul import simulate_ensemble
from . import estimators

logger = logging.getLogger(__name__)


# +------------+
# | Statistics |
# +------------+

@dataclass(frozen=True)
class Statistic:
    '''Descriptor of a curve-valued statistic, evaluable on an ensemble or predicted by a model.

    #### Fields
        kind (CorrelatorKind): Statistic to compute.
        alpha (float): First exponent, for kappa, K, and moments.
        beta (float): Second exponent, for kappa and K.
        pairs (tuple): (t1, t2) pairs, for K. Defaults to every pair in the horizon.
    '''
    kind: CorrelatorKind
    alpha: Optional[float] = None
    beta: Optional[float] = None
    pairs: Optional[tuple[tuple[int, int], ...]] = None

    def _pairs(self, n: int) -> list[tuple[int, int]]:
        return list(self.pairs) if self.pairs is not None else theory.time_pairs(n)

    def empirical(self, e: Ensemble) -> CorrelatorCurve:
        '''Evaluate the statistic on an ensemble.
        '''
        # pylint: disable=too-many-return-statements
        match self.kind:
            case CorrelatorKind.KAPPA:
                return estimators.kappa_curve(e, self.alpha, self.beta)
            case CorrelatorKind.VOL_AUTOCORR:
                return estimators.vol_autocorr_curve(e)
            case CorrelatorKind.LINEAR:
                return estimators.linear_corr_curve(e)
            case CorrelatorKind.K:
                return estimators.K_grid(e, self.alpha, self.beta, self._pairs(e.n))
            case CorrelatorKind.INCREMENT_M2:
                return estimators.increment_curve(e)
            case CorrelatorKind.MOMENT:
                return estimators.moment_curve(e, self.alpha)
        raise InvalidParameter(f'unknown statistic {self.kind}')

    def predicted(self, model: ProcessModel) -> CorrelatorCurve:
        '''Evaluate the model prediction of the statistic.
        '''
        # pylint: disable=too-many-return-statements
        match self.kind:
            case CorrelatorKind.KAPPA:
                return theory.kappa_curve(model, self.alpha, self.beta)
            case CorrelatorKind.VOL_AUTOCORR:
                return theory.vol_autocorr_curve(model)
            case CorrelatorKind.LINEAR:
                return theory.linear_corr_curve(model)
            case CorrelatorKind.K:
                return theory.K_grid(model, self.alpha, self.beta, self._pairs(model.horizon_n))
            case CorrelatorKind.INCREMENT_M2:
                return theory.increment_curve(model)
            case CorrelatorKind.MOMENT:
                return theory.moment_curve(model, self.alpha)
        raise InvalidParameter(f'unknown statistic {self.kind}')


# +----------------------+
# | Spread of a constant |
# +----------------------+

def kappa_error_bars(curve: CorrelatorCurve) -> float:
    '''Return the population standard deviation of the points of a kappa curve.

    #### Arguments
        curve (CorrelatorCurve): Empirical kappa_{alpha,beta}(1, n) over n = 2..horizon.

    #### Return
        float: Error bar to attach uniformly to every point.
    '''
    if curve.kind != CorrelatorKind.KAPPA:
        raise InvalidParameter(f'expected a kappa curve, got {curve.kind.value}')
    if len(curve.points) < 2:
        raise InsufficientData(f'need at least 2 points, got {len(curve.points)}')
    return float(np.std(curve.values))


# +----------------------+
# | Parametric bootstrap |
# +----------------------+

def _replicate(model: ProcessModel, M: int, seed: int,
               statistics: tuple[Statistic, ...]) -> list[np.ndarray]:
    # pylint: disable=invalid-name
    e = estimators.detrend(simulate_ensemble(model, M, seed))
    return [s.empirical(e).values for s in statistics]


def _replicate_seeds(reps: int, seed: int, replicate_seeds: Optional[list[int]]) -> list[int]:
    if replicate_seeds is None:
        if reps < 2:
            raise InsufficientData(f'need at least 2 replicates, got {reps}')
        return np.random.SeedSequence(seed).generate_state(reps).tolist()
    if len(replicate_seeds) < 2:
        raise InsufficientData(f'need at least 2 replicates, got {len(replicate_seeds)}')
    return list(replicate_seeds)


def bootstrap_many(
    model: ProcessModel,
    M: int,
    reps: int,
    statistics: list[Statistic],
    seed: int = 0,
    jobs: int = 1,
    replicate_seeds: Optional[list[int]] = None,
) -> list[np.ndarray]:
    '''Parametric bootstrap of several statistics, all evaluated on the same replicates.

    #### Arguments
        model (ProcessModel): Model to simulate.
        M (int): Histories per replicate, usually the size of the empirical ensemble.
        reps (int): Number of replicates, at least 2.
        statistics (list[Statistic]): Curve-valued statistics.
        seed (int): Root seed; replicate seeds are drawn from SeedSequence(seed). Defaults to 0.
        jobs (int): Number of parallel workers. Defaults to 1.
        replicate_seeds (list[int]): Explicit replicate seeds, overriding `seed` and `reps`.

    #### Return
        list[np.ndarray]: Population standard deviation per point, one array per statistic.
    '''
    # pylint: disable=invalid-name,too-many-arguments
    seeds = _replicate_seeds(reps, seed, replicate_seeds)
    statistics = tuple(statistics)
    logger.debug('bootstrap of %s over %d replicates of M=%d',
                 ', '.join(s.kind.value for s in statistics), len(seeds), M)
    if jobs == 1:
        values = [_replicate(model, M, s, statistics) for s in seeds]
    else:
        values = Parallel(n_jobs=jobs)(
            delayed(_replicate)(model, M, s, statistics) for s in seeds
        )
    return [np.std(np.vstack([v[k] for v in values]), axis=0) for k in range(len(statistics))]


def bootstrap_error_bars(
    model: ProcessModel,
    M: int,
    reps: int,
    statistic: Statistic,
    seed: int = 0,
    jobs: int = 1,
    replicate_seeds: Optional[list[int]] = None,
) -> np.ndarray:
    '''Simulate `reps` detrended ensembles of M histories and return the per-point standard \
        deviation of the statistic.

    #### Arguments
        model (ProcessModel): Model to simulate.
        M (int): Histories per replicate, usually the size of the empirical ensemble.
        reps (int): Number of replicates, at least 2.
        statistic (Statistic): Curve-valued statistic.
        seed (int): Root seed. Defaults to 0.
        jobs (int): Number of parallel workers. Defaults to 1.
        replicate_seeds (list[int]): Explicit replicate seeds, overriding `seed` and `reps`.

    #### Return
        np.ndarray: Population standard deviation per point.
    '''
    # pylint: disable=invalid-name,too-many-arguments
    return bootstrap_many(model, M, reps, [statistic], seed, jobs, replicate_seeds)[0]
