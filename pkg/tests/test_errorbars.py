'''Tests of the error-bar procedures.
'''

import numpy as np
import pytest
from src.selfsim import ensemble, process
from src.selfsim.ensemble import CorrelatorKind
from src.selfsim.errors import InsufficientData, InvalidParameter
from src.selfsim.simul import simulate_ensemble
from src.selfsim.stats import errorbars
from src.selfsim.stats.errorbars import Statistic


@pytest.fixture(name='short_model')
def fixture_short_model(light_mixture):
    return process.ProcessModel(0.36, light_mixture, 5)


def test_kappa_error_bars():
    curve = ensemble.curve_from_values(CorrelatorKind.KAPPA, [(1, 2), (1, 3), (1, 4)],
                                       [1.0, 2.0, 3.0], 1, 1)
    assert errorbars.kappa_error_bars(curve) == pytest.approx(np.sqrt(2 / 3))
    with pytest.raises(InsufficientData):
        errorbars.kappa_error_bars(
            ensemble.curve_from_values(CorrelatorKind.KAPPA, [(1, 2)], [1.0], 1, 1))
    with pytest.raises(InvalidParameter):
        errorbars.kappa_error_bars(
            ensemble.curve_from_values(CorrelatorKind.LINEAR, [(1, 2), (1, 3)], [0.0, 0.1]))


def test_statistic_shapes(short_model, light_ensemble):
    for statistic in (Statistic(CorrelatorKind.VOL_AUTOCORR),
                      Statistic(CorrelatorKind.KAPPA, 1.0, 1.0),
                      Statistic(CorrelatorKind.K, 1.0, 1.0, ((1, 2), (2, 5))),
                      Statistic(CorrelatorKind.MOMENT, 2.0)):
        predicted = statistic.predicted(short_model)
        assert predicted.source == 'theory'
        assert predicted.kind == statistic.kind
    assert len(Statistic(CorrelatorKind.K, 1.0, 1.0).empirical(light_ensemble).points) == 153


def test_bootstrap_is_deterministic(short_model):
    statistic = Statistic(CorrelatorKind.VOL_AUTOCORR)
    first = errorbars.bootstrap_error_bars(short_model, 400, 5, statistic, seed=3)
    second = errorbars.bootstrap_error_bars(short_model, 400, 5, statistic, seed=3)
    assert first.shape == (4,)
    assert np.all(first > 0)
    assert np.array_equal(first, second)
    parallel = errorbars.bootstrap_error_bars(short_model, 400, 5, statistic, seed=3, jobs=2)
    assert np.array_equal(first, parallel)


def test_bootstrap_shares_replicates(short_model):
    statistics = [Statistic(CorrelatorKind.LINEAR), Statistic(CorrelatorKind.INCREMENT_M2)]
    together = errorbars.bootstrap_many(short_model, 300, 4, statistics, seed=8)
    for (statistic, errs) in zip(statistics, together):
        alone = errorbars.bootstrap_error_bars(short_model, 300, 4, statistic, seed=8)
        assert np.array_equal(errs, alone)


def test_bootstrap_explicit_seeds(short_model):
    statistic = Statistic(CorrelatorKind.INCREMENT_M2)
    errs = errorbars.bootstrap_error_bars(short_model, 300, 0, statistic,
                                          replicate_seeds=[1, 2, 3])
    assert errs.shape == (5,)
    with pytest.raises(InsufficientData):
        errorbars.bootstrap_error_bars(short_model, 300, 1, statistic)
    with pytest.raises(InsufficientData):
        errorbars.bootstrap_error_bars(short_model, 300, 5, statistic, replicate_seeds=[1])


def test_bootstrap_matches_sampling_spread(short_model):
    # The spread of m_2(t, 1) over replicates approaches std(r_t^2) / sqrt(M)
    size = 2000
    statistic = Statistic(CorrelatorKind.INCREMENT_M2)
    errs = errorbars.bootstrap_error_bars(short_model, size, 60, statistic, seed=4)
    e = simulate_ensemble(short_model, 200_000, seed=12)
    expected = (np.asarray(e.returns) ** 2).std(axis=0) / np.sqrt(size)
    assert errs == pytest.approx(expected, rel=0.5)
