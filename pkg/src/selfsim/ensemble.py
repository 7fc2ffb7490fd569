'''Ensembles of return histories and the curves computed from them, with their file formats.
'''

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path as FilePath
from typing import Optional
import numpy as np
import pandas as pd
from .errors import InsufficientData, InvalidParameter
from .process import Path, check_window


# +----------+
# | Ensemble |
# +----------+

@dataclass(frozen=True)
class Ensemble:
    '''M histories of n elementary returns each.

    #### Fields
        returns (np.ndarray): Read-only M x n matrix, one history per row.
        meta (dict): Provenance (simulation seed and model, or ingest source).
        detrended (bool): Whether every column has zero ensemble mean.
    '''
    returns: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)
    detrended: bool = False

    def __post_init__(self):
        returns = np.array(self.returns, dtype=float)
        if returns.ndim != 2 or returns.shape[0] < 1 or returns.shape[1] < 1:
            raise InsufficientData(
                f'an ensemble needs at least one history and one return, got shape '
                f'{returns.shape}')
        returns.setflags(write=False)
        object.__setattr__(self, 'returns', returns)

    @property
    def M(self) -> int:
        '''Number of histories.
        '''
        # pylint: disable=invalid-name
        return self.returns.shape[0]

    @property
    def n(self) -> int:
        '''Number of elementary returns per history.
        '''
        return self.returns.shape[1]

    def path(self, l: int) -> Path:
        '''Return the l-th history (0-based).
        '''
        return tuple(self.returns[l].tolist())

    def window(self, t: int, T: int) -> np.ndarray:
        '''Return r^l(t, T) for every history l.
        '''
        # pylint: disable=invalid-name
        check_window(t, T, self.n)
        return self.returns[:, t - T:t].sum(axis=1)

    def total(self, t: int) -> np.ndarray:
        '''Return r^l(t, t) for every history l.
        '''
        return self.window(t, t)


def sidecar_path(path: FilePath) -> FilePath:
    '''Return the JSON sidecar path associated to an ensemble CSV.
    '''
    return FilePath(path).with_suffix('.json')


def save_ensemble(e: Ensemble, path: FilePath):
    '''Write an ensemble as CSV (`history,r1,...,rn`) plus its JSON sidecar.

    #### Arguments
        e (Ensemble): Ensemble to write.
        path (Path): CSV destination; the sidecar replaces the suffix with `.json`.
    '''
    frame = pd.DataFrame(e.returns, columns=[f'r{i}' for i in range(1, e.n + 1)])
    frame.insert(0, 'history', np.arange(1, e.M + 1))
    frame.to_csv(path, index=False, float_format='%.17g', lineterminator='\n')
    with open(sidecar_path(path), 'w', encoding='utf-8') as fp:
        json.dump({'meta': e.meta, 'detrended': e.detrended, 'M': e.M, 'n': e.n},
                  fp, indent=2, sort_keys=True)
        fp.write('\n')


def load_ensemble(path: FilePath) -> Ensemble:
    '''Read an ensemble CSV and, when present, its sidecar.

    #### Arguments
        path (Path): CSV file with header `history,r1,...,rn`.

    #### Return
        Ensemble: Loaded ensemble.
    '''
    try:
        frame = pd.read_csv(path, float_precision='round_trip')
    except ValueError as err:
        raise InvalidParameter(f'{path}: malformed ensemble CSV: {err}') from err
    expected = ['history'] + [f'r{i}' for i in range(1, frame.shape[1])]
    if list(frame.columns) != expected:
        raise InvalidParameter(f'{path}: header must be {",".join(expected)}')

    meta, detrended = {}, False
    sidecar = sidecar_path(path)
    if sidecar.exists():
        with open(sidecar, encoding='utf-8') as fp:
            side = json.load(fp)
        (meta, detrended) = (side.get('meta', {}), bool(side.get('detrended', False)))
    try:
        returns = frame.drop(columns='history').to_numpy(dtype=float)
    except ValueError as err:
        raise InvalidParameter(f'{path}: non-numeric return: {err}') from err
    if not np.isfinite(returns).all():
        raise InvalidParameter(f'{path}: missing or non-finite returns')
    return Ensemble(returns, meta, detrended)


# +--------+
# | Curves |
# +--------+

class CorrelatorKind(str, Enum):
    '''Statistics stored in a `CorrelatorCurve`.
    '''
    KAPPA = 'kappa'
    VOL_AUTOCORR = 'vol_autocorr'
    K = 'K'
    LINEAR = 'linear'
    INCREMENT_M2 = 'increment_m2'
    MOMENT = 'moment'


Index = tuple[int, ...]  # (n,) for one-time statistics, (t1, t2) for two-time ones


@dataclass(frozen=True)
class CorrelatorPoint:
    '''One point of a curve.
    '''
    index: Index
    value: float
    err: Optional[float] = None


@dataclass(frozen=True)
class CorrelatorCurve:
    '''Labeled series of correlator values, theoretical or empirical.
    '''
    kind: CorrelatorKind
    points: tuple[CorrelatorPoint, ...]
    alpha: Optional[float] = None
    beta: Optional[float] = None
    source: str = 'empirical'

    def __post_init__(self):
        with_err = {p.err is not None for p in self.points}
        if len(with_err) > 1:
            raise InvalidParameter('error bars must be given for every point or for none')
        if any(p.err is not None and p.err < 0 for p in self.points):
            raise InvalidParameter('error bars must be non-negative')

    @property
    def values(self) -> np.ndarray:
        '''Point values, in order.
        '''
        return np.array([p.value for p in self.points])

    @property
    def errors(self) -> Optional[np.ndarray]:
        '''Point errors, or `None` if the curve has no error bars.
        '''
        if not self.points or self.points[0].err is None:
            return None
        return np.array([p.err for p in self.points])

    def with_errors(self, errs) -> 'CorrelatorCurve':
        '''Return a copy carrying the given per-point (or uniform, if scalar) error bars.
        '''
        errs = np.broadcast_to(np.asarray(errs, dtype=float), (len(self.points),))
        points = tuple(replace(p, err=float(e)) for (p, e) in zip(self.points, errs))
        return replace(self, points=points)


def curve_from_values(kind: CorrelatorKind, indices: list[Index], values, alpha=None,
                      beta=None, source: str = 'empirical') -> CorrelatorCurve:
    '''Build a curve from parallel lists of indices and values.
    '''
    # pylint: disable=too-many-arguments
    points = tuple(CorrelatorPoint(tuple(i), float(v)) for (i, v) in zip(indices, values))
    return CorrelatorCurve(CorrelatorKind(kind), points, alpha, beta, source)


def curves_to_frame(curves: list[CorrelatorCurve]) -> pd.DataFrame:
    '''Flatten curves into one row per point.

    Columns: kind, source, alpha, beta, t1, t2, value, err. One-time indices fill `t1` only.
    '''
    rows = []
    for curve in curves:
        for point in curve.points:
            rows.append({
                'kind': curve.kind.value,
                'source': curve.source,
                'alpha': curve.alpha,
                'beta': curve.beta,
                't1': point.index[0],
                't2': point.index[1] if len(point.index) > 1 else None,
                'value': point.value,
                'err': point.err,
            })
    columns = ['kind', 'source', 'alpha', 'beta', 't1', 't2', 'value', 'err']
    frame = pd.DataFrame(rows, columns=columns)
    return frame.astype({'t1': 'Int64', 't2': 'Int64'})


def save_curves(curves: list[CorrelatorCurve], path: FilePath):
    '''Write curves as CSV.
    '''
    curves_to_frame(curves).to_csv(path, index=False, float_format='%.17g', lineterminator='\n')


def curves_to_json(curves: list[CorrelatorCurve]) -> list[dict]:
    '''Convert curves to JSON objects.
    '''
    return [
        {
            'kind': c.kind.value,
            'source': c.source,
            'alpha': c.alpha,
            'beta': c.beta,
            'points': [
                {'index': list(p.index), 'value': p.value, 'err': p.err} for p in c.points
            ],
        }
        for c in curves
    ]


# +----------+
# | Collapse |
# +----------+

@dataclass(frozen=True)
class CollapseEntry:
    '''Rescaled histogram of r(t, T).

    #### Fields
        t (int): End of the return interval.
        T (int): Length of the return interval.
        bin_centers (np.ndarray): Uniform grid of rescaled returns.
        rescaled_density (np.ndarray): Histogram density on the rescaled axis.
        counts (np.ndarray): Raw counts per bin.
    '''
    # pylint: disable=invalid-name
    t: int
    T: int
    bin_centers: np.ndarray
    rescaled_density: np.ndarray
    counts: np.ndarray

    @property
    def bin_width(self) -> float:
        '''Width of the (uniform) bins.
        '''
        return float(self.bin_centers[1] - self.bin_centers[0])


@dataclass(frozen=True)
class CollapsePlotData:
    '''Set of rescaled histograms that should superpose onto the scaling function.
    '''
    entries: tuple[CollapseEntry, ...]


def save_collapse(data: CollapsePlotData, path: FilePath):
    '''Write collapse data as CSV with columns t, T, x, density, count.
    '''
    frames = [
        pd.DataFrame({
            't': entry.t,
            'T': entry.T,
            'x': entry.bin_centers,
            'density': entry.rescaled_density,
            'count': entry.counts,
        })
        for entry in data.entries
    ]
    frame = pd.concat(frames, ignore_index=True)
    frame.to_csv(path, index=False, float_format='%.17g', lineterminator='\n')


def collapse_to_json(data: CollapsePlotData) -> list[dict]:
    '''Convert collapse data to JSON objects, one per (t, T) pair.
    '''
    return [
        {
            't': entry.t,
            'T': entry.T,
            'bin_width': entry.bin_width,
            'x': entry.bin_centers.tolist(),
            'density': entry.rescaled_density.tolist(),
            'count': entry.counts.tolist(),
        }
        for entry in data.entries
    ]
