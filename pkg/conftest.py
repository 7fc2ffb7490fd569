'''Shared fixtures of the test suite.
'''

import pytest
from src import selfsim


@pytest.fixture(scope='session')
def light_mixture():
    '''Power-law measure with finite moments up to order 6, so Monte-Carlo errors of second
    and fourth moments are well defined.
    '''
    return selfsim.mixture.normalize(1.0, 8.0, 1.0)


@pytest.fixture(scope='session')
def light_model(light_mixture):
    '''Non-trivial process with a light-tailed measure.
    '''
    return selfsim.process.ProcessModel(0.36, light_mixture)


@pytest.fixture(scope='session')
def markov_model():
    '''Independent Gaussian increments of unit width.
    '''
    return selfsim.process.ProcessModel(0.5, selfsim.mixture.degenerate(1.0))


@pytest.fixture(scope='session')
def light_ensemble(light_model):
    '''Detrended ensemble of 20000 histories of `light_model`.
    '''
    e = selfsim.simul.simulate_ensemble(light_model, 20_000, seed=1)
    return selfsim.stats.estimators.detrend(e)


@pytest.fixture(scope='session')
def markov_ensemble(markov_model):
    '''Detrended ensemble of 20000 independent Gaussian histories.
    '''
    e = selfsim.simul.simulate_ensemble(markov_model, 20_000, seed=3)
    return selfsim.stats.estimators.detrend(e)
