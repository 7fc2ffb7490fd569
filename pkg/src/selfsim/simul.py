'''Utility functions for simulating histories of the process.

A history is drawn in two stages: one width sigma from the volatility measure, then independent
centered Gaussians with standard deviations a_i sigma.
'''

import logging
import numpy as np
from joblib import Parallel, delayed
from . import mixture
from .ensemble import Ensemble
from .errors import InvalidParameter
from .process import Path, ProcessModel, coefficients, model_to_json

logger = logging.getLogger(__name__)

# Histories are generated in consecutive blocks of this size; block b draws from the b-th child
# of SeedSequence(seed), so the output does not depend on how blocks are scheduled.
BLOCK_SIZE = 256


def simulate_history(model: ProcessModel, rng: np.random.Generator) -> Path:
    '''Draw one history.

    #### Arguments
        model (ProcessModel): Process to simulate.
        rng (np.random.Generator): Random stream, owned by the caller.

    #### Return
        Path: Elementary returns r_1..r_n.
    '''
    sigma = mixture.sample(model.mixture, rng, 1)[0]
    widths = coefficients(model.D, model.horizon_n) * sigma
    return tuple((widths * rng.standard_normal(model.horizon_n)).tolist())


def _simulate_block(model: ProcessModel, seq: np.random.SeedSequence, count: int) -> np.ndarray:
    '''Draw `count` histories from the stream seeded by `seq`.
    '''
    rng = np.random.default_rng(seq)
    sigmas = mixture.sample(model.mixture, rng, count)
    noise = rng.standard_normal((count, model.horizon_n))
    return noise * coefficients(model.D, model.horizon_n)[None, :] * sigmas[:, None]


def simulate_ensemble(model: ProcessModel, M: int, seed: int, jobs: int = 1) -> Ensemble:
    '''Draw M independent histories.

    #### Arguments
        model (ProcessModel): Process to simulate.
        M (int): Number of histories, at least 1.
        seed (int): Root seed of the block streams.
        jobs (int): Number of parallel workers. Defaults to 1.

    #### Return
        Ensemble: Simulated ensemble; depends only on (model, M, seed).
    '''
    # pylint: disable=invalid-name
    if M < 1:
        raise InvalidParameter(f'M must be at least 1, got {M}')

    num_blocks = -(-M // BLOCK_SIZE)
    seqs = np.random.SeedSequence(seed).spawn(num_blocks)
    sizes = [min(BLOCK_SIZE, M - b * BLOCK_SIZE) for b in range(num_blocks)]
    logger.debug('simulating M=%d histories of n=%d returns (seed=%d, jobs=%d)',
                 M, model.horizon_n, seed, jobs)

    if jobs == 1:
        blocks = [_simulate_block(model, seq, size) for (seq, size) in zip(seqs, sizes)]
    else:
        blocks = Parallel(n_jobs=jobs)(
            delayed(_simulate_block)(model, seq, size) for (seq, size) in zip(seqs, sizes)
        )

    meta = {
        'source': 'simulation',
        'seed': int(seed),
        'block_size': BLOCK_SIZE,
        'model': model_to_json(model),
    }
    return Ensemble(np.vstack(blocks), meta)
