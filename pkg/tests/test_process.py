'''Tests of the process model and of history simulation.
'''

import numpy as np
import pytest
from src.selfsim import mixture, process, simul
from src.selfsim.errors import IndexOutOfRange, InvalidParameter


@pytest.mark.parametrize('D', [0.2, 0.36, 0.5, 0.8])
def test_coefficients_telescope(D):
    a = process.coefficients(D, 17)
    assert a[0] == 1.0
    assert np.cumsum(a**2) == pytest.approx(np.arange(1, 18) ** (2 * D), rel=1e-12)


def test_brownian_coefficients_are_one():
    assert np.all(process.coefficients(0.5, 17) == 1.0)


def test_subdiffusive_coefficients_decrease():
    a = process.coefficients(0.36, 17)
    assert np.all(np.diff(a) < 0)


def test_model_validation():
    m = mixture.degenerate(1.0)
    for D in (0.0, 1.0, -0.1):
        with pytest.raises(InvalidParameter):
            process.ProcessModel(D, m)
    with pytest.raises(InvalidParameter):
        process.ProcessModel(0.5, m, 0)
    with pytest.raises(IndexOutOfRange):
        process.coefficient_a(0.5, 0)


def test_aggregation():
    path = (1.0, 2.0, 3.0, 4.0)
    assert process.aggregate_return(path, 3, 2) == 5.0
    assert process.aggregate_return(path, 4, 4) == 10.0
    assert process.aggregate_scale(0.36, 7, 7) == pytest.approx(7**0.36)
    with pytest.raises(IndexOutOfRange):
        process.aggregate_return(path, 2, 3)
    with pytest.raises(IndexOutOfRange):
        process.aggregate_return(path, 5, 1)


def test_model_file(tmp_path, light_model):
    path = tmp_path / 'model.json'
    process.save_model(light_model, path)
    assert process.load_model(path) == light_model
    with pytest.raises(InvalidParameter):
        process.model_from_json({'horizon_n': 17})


def test_simulate_history(light_model):
    path = simul.simulate_history(light_model, np.random.default_rng(0))
    assert isinstance(path, tuple)
    assert len(path) == light_model.horizon_n


def test_simulation_is_deterministic(light_model):
    first = simul.simulate_ensemble(light_model, 600, seed=5)
    second = simul.simulate_ensemble(light_model, 600, seed=5)
    parallel = simul.simulate_ensemble(light_model, 600, seed=5, jobs=2)
    assert np.array_equal(first.returns, second.returns)
    assert np.array_equal(first.returns, parallel.returns)
    assert (first.M, first.n) == (600, 17)
    assert first.meta['seed'] == 5


def test_block_streams_do_not_depend_on_ensemble_size(light_model):
    small = simul.simulate_ensemble(light_model, 300, seed=9)
    large = simul.simulate_ensemble(light_model, 600, seed=9)
    size = simul.BLOCK_SIZE
    assert np.array_equal(small.returns[:size], large.returns[:size])
    assert not np.array_equal(simul.simulate_ensemble(light_model, 300, seed=10).returns,
                              small.returns)


def test_simulated_increment_variance(light_model):
    e = simul.simulate_ensemble(light_model, 50_000, seed=2)
    squares = e.returns**2
    stderr = squares.std(axis=0) / np.sqrt(e.M)
    expected = mixture.moment(light_model.mixture, 2) * process.coefficients(0.36, 17) ** 2
    assert np.all(np.abs(squares.mean(axis=0) - expected) < 4 * stderr)


def test_invalid_ensemble_size(light_model):
    with pytest.raises(InvalidParameter):
        simul.simulate_ensemble(light_model, 0, seed=1)
