'''Tests of the ensemble and curve containers and their file formats.
'''

import numpy as np
import pandas as pd
import pytest
from src.selfsim import ensemble
from src.selfsim.ensemble import CorrelatorKind, Ensemble
from src.selfsim.errors import IndexOutOfRange, InsufficientData, InvalidParameter


def test_ensemble_is_read_only():
    e = Ensemble([[1.0, 2.0], [3.0, 4.0]])
    with pytest.raises(ValueError):
        e.returns[0, 0] = 5.0
    assert (e.M, e.n) == (2, 2)
    assert e.path(1) == (3.0, 4.0)
    assert np.array_equal(e.total(2), [3.0, 7.0])
    assert np.array_equal(e.window(2, 1), [2.0, 4.0])
    with pytest.raises(IndexOutOfRange):
        e.window(3, 1)


def test_empty_ensemble():
    with pytest.raises(InsufficientData):
        Ensemble(np.empty((0, 17)))


def test_ensemble_file(tmp_path):
    rng = np.random.default_rng(1)
    e = Ensemble(rng.standard_normal((5, 4)) * 1e-3, {'source': 'test', 'seed': 3}, True)
    path = tmp_path / 'ensemble.csv'
    ensemble.save_ensemble(e, path)

    header = path.read_text(encoding='utf-8').splitlines()[0]
    assert header == 'history,r1,r2,r3,r4'
    loaded = ensemble.load_ensemble(path)
    assert np.array_equal(loaded.returns, e.returns)
    assert loaded.meta == e.meta
    assert loaded.detrended


def test_bad_ensemble_header(tmp_path):
    path = tmp_path / 'bad.csv'
    path.write_text('id,a,b\n1,0.1,0.2\n', encoding='utf-8')
    with pytest.raises(InvalidParameter):
        ensemble.load_ensemble(path)


@pytest.mark.parametrize('text', [
    '',
    'history,r1,r2\n1,0.1,0.2\n2,0.1,0.2,0.3,0.4\n',
    'history,r1,r2\n1,0.1,abc\n',
    'history,r1,r2\n1,0.1\n',
])
def test_malformed_ensemble_file(tmp_path, text):
    path = tmp_path / 'malformed.csv'
    path.write_text(text, encoding='utf-8')
    with pytest.raises(InvalidParameter):
        ensemble.load_ensemble(path)


def test_curve_errors_all_or_none():
    curve = ensemble.curve_from_values(CorrelatorKind.KAPPA, [(1, 2), (1, 3)], [1.0, 1.1], 1, 1)
    assert curve.errors is None
    with_err = curve.with_errors(0.05)
    assert np.array_equal(with_err.errors, [0.05, 0.05])
    with pytest.raises(InvalidParameter):
        ensemble.CorrelatorCurve(CorrelatorKind.KAPPA, (
            ensemble.CorrelatorPoint((1, 2), 1.0, 0.1),
            ensemble.CorrelatorPoint((1, 3), 1.0),
        ))
    with pytest.raises(InvalidParameter):
        curve.with_errors(-1.0)


def test_curves_csv(tmp_path):
    curves = [
        ensemble.curve_from_values(CorrelatorKind.K, [(1, 1), (1, 2)], [1.2, 1.1], 1.0, 1.0),
        ensemble.curve_from_values(CorrelatorKind.INCREMENT_M2, [(1,), (2,)], [2.0, 1.0],
                                   source='theory'),
    ]
    path = tmp_path / 'curves.csv'
    ensemble.save_curves(curves, path)
    frame = pd.read_csv(path)
    assert list(frame.columns) == ['kind', 'source', 'alpha', 'beta', 't1', 't2', 'value', 'err']
    assert len(frame) == 4
    assert frame['t2'].isna().sum() == 2
    assert ensemble.curves_to_json(curves)[1]['points'][0] == {'index': [1], 'value': 2.0,
                                                               'err': None}
