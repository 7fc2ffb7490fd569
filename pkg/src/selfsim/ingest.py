'''Build ensembles of daily histories from raw intraday price records.

Each calendar day contributes one history: the price is sampled on a grid of bars starting at
the session open (last record at or before each grid point) and the elementary returns are the
log-price differences between consecutive grid points.
'''

import csv
import logging
from dataclasses import dataclass, field
from datetime import datetime, time, timedelta
from datetime import tzinfo as TzInfo
from pathlib import Path as FilePath
from typing import Optional
import intervals as interval
import numpy as np
import pandas as pd
from dateutil import parser as dateparser
from dateutil import tz
from .ensemble import Ensemble
from .errors import InvalidParameter, NoCompleteSessions, NonPositivePrice, ParseError
from .stats.estimators import detrend

logger = logging.getLogger(__name__)


# +-------+
# | Types |
# +-------+

@dataclass(frozen=True)
class PriceRecord:
    '''Price level at a time-zone aware instant.
    '''
    timestamp: datetime
    price: float


@dataclass(frozen=True)
class PriceFormat:
    '''Layout of a raw price CSV.

    #### Fields
        timestamp_column (str): Header of the timestamp column.
        price_column (str): Header of the price column.
        time_format (str): strptime pattern; ISO-8601 when `None`.
        zone (str): Zone name applied to timestamps without an offset.
    '''
    timestamp_column: str = 'timestamp'
    price_column: str = 'price'
    time_format: Optional[str] = None
    zone: Optional[str] = None


COVERAGE_RANGE = interval.openclosed(0, 1)


@dataclass(frozen=True)
class SessionSpec:
    '''Daily sampling window.

    #### Fields
        session_start (time): Wall-clock time of the first grid point.
        zone (str): Zone of the wall clock, DST-aware.
        bar_interval (timedelta): Spacing of the grid.
        bar_count (int): Number of elementary returns per day.
        min_coverage (float): Fraction of grid points that must carry a fresh price.
    '''
    session_start: time = time(9, 0)
    zone: str = 'America/New_York'
    bar_interval: timedelta = timedelta(minutes=10)
    bar_count: int = 17
    min_coverage: float = 1.0
    tzinfo: TzInfo = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.bar_count < 1:
            raise InvalidParameter(f'bar_count must be at least 1, got {self.bar_count}')
        if self.min_coverage not in COVERAGE_RANGE:
            raise InvalidParameter(f'need 0 < min_coverage <= 1, got {self.min_coverage}')
        if self.bar_interval <= timedelta(0):
            raise InvalidParameter('bar_interval must be positive')
        zone = tz.gettz(self.zone)
        if zone is None:
            raise InvalidParameter(f'unknown time zone {self.zone!r}')
        object.__setattr__(self, 'tzinfo', zone)

    @classmethod
    def from_json(cls, obj: dict) -> 'SessionSpec':
        '''Build a session from its JSON object (`session_start` as "HH:MM").
        '''
        defaults = cls()
        start = obj.get('session_start')
        return cls(
            time.fromisoformat(start) if start else defaults.session_start,
            obj.get('zone', defaults.zone),
            timedelta(minutes=float(obj.get('bar_interval_minutes', 10))),
            int(obj.get('bar_count', defaults.bar_count)),
            float(obj.get('min_coverage', defaults.min_coverage)),
        )


# +---------+
# | Parsing |
# +---------+

def _parse_timestamp(value: str, fmt: PriceFormat, line: int) -> datetime:
    try:
        if fmt.time_format is None:
            stamp = dateparser.isoparse(value)
        else:
            stamp = datetime.strptime(value, fmt.time_format)
    except ValueError as err:
        raise ParseError(f'bad timestamp {value!r}: {err}', line) from err

    if stamp.tzinfo is None:
        zone = tz.gettz(fmt.zone) if fmt.zone else None
        if zone is None:
            raise ParseError(f'timestamp {value!r} has no offset and no zone is configured', line)
        stamp = stamp.replace(tzinfo=zone)
    return stamp.astimezone(tz.UTC)


def load_prices(path: FilePath, fmt: PriceFormat = PriceFormat()) -> list[PriceRecord]:
    '''Read a raw price CSV.

    #### Arguments
        path (Path): CSV file with a header row.
        fmt (PriceFormat): Column layout and timestamp format.

    #### Return
        list[PriceRecord]: Records in UTC, sorted, one per timestamp (the last one in file order \
            wins).
    '''
    by_stamp = {}
    duplicates = 0
    with open(path, newline='', encoding='utf-8') as fp:
        reader = csv.reader(fp)
        header = next(reader, None)
        if header is None:
            raise ParseError('empty file', 1)
        try:
            (i_ts, i_px) = (header.index(fmt.timestamp_column), header.index(fmt.price_column))
        except ValueError as err:
            raise ParseError(f'header lacks a required column: {err}', 1) from err

        for (line, row) in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) <= max(i_ts, i_px):
                raise ParseError(f'expected at least {max(i_ts, i_px) + 1} fields', line)
            stamp = _parse_timestamp(row[i_ts].strip(), fmt, line)
            try:
                price = float(row[i_px])
            except ValueError as err:
                raise ParseError(f'bad price {row[i_px]!r}', line) from err
            if not price > 0:
                raise NonPositivePrice(f'price must be positive, got {price}', line)
            if stamp in by_stamp:
                duplicates += 1
            by_stamp[stamp] = price

    if duplicates:
        logger.warning('%s: %d duplicate timestamps, keeping the last record of each', path,
                       duplicates)
    return [PriceRecord(stamp, by_stamp[stamp]) for stamp in sorted(by_stamp)]


# +-----------------+
# | Session windows |
# +-----------------+

def _grid(day, spec: SessionSpec) -> pd.DatetimeIndex:
    start = datetime.combine(day, spec.session_start, tzinfo=spec.tzinfo)
    points = [start + i * spec.bar_interval for i in range(spec.bar_count + 1)]
    return pd.DatetimeIndex([p.astimezone(tz.UTC) for p in points])


def build_ensemble(records: list[PriceRecord], spec: SessionSpec = SessionSpec(),
                   source: Optional[str] = None) -> Ensemble:
    '''Turn price records into a detrended ensemble of daily histories.

    #### Arguments
        records (list[PriceRecord]): Sorted records, as returned by `load_prices`.
        spec (SessionSpec): Sampling window.
        source (str): Description of the input, stored in the provenance. Defaults to `None`.

    #### Return
        Ensemble: One row per day with enough coverage; the provenance counts skipped and \
            dropped days.
    '''
    # pylint: disable=too-many-locals
    if not records:
        raise NoCompleteSessions('no price records')

    stamps = pd.DatetimeIndex([r.timestamp for r in records])
    prices = np.array([r.price for r in records])
    days = sorted({r.timestamp.astimezone(spec.tzinfo).date() for r in records})

    (rows, used, skipped, dropped) = ([], [], [], [])
    for day in days:
        grid = _grid(day, spec)
        lo = stamps.searchsorted(grid[0] - spec.bar_interval, side='left')
        hi = stamps.searchsorted(grid[-1], side='right')
        if hi == lo:
            skipped.append(day)
            continue

        idx = stamps.searchsorted(grid, side='right') - 1
        known = idx >= 0
        fresh = known.copy()
        fresh[known] = stamps[idx[known]] >= grid[known] - spec.bar_interval
        if not known.all() or fresh.mean() < spec.min_coverage:
            dropped.append(day)
            continue

        rows.append(np.diff(np.log(prices[idx])))
        used.append(day)

    if dropped:
        logger.warning('dropped %d days below coverage %.2f', len(dropped), spec.min_coverage)
    if not rows:
        raise NoCompleteSessions(
            f'all {len(days)} days were skipped or dropped (coverage {spec.min_coverage})')

    meta = {
        'source': 'ingest',
        'input': source,
        'session': {
            'session_start': spec.session_start.isoformat(timespec='minutes'),
            'zone': spec.zone,
            'bar_interval_minutes': spec.bar_interval.total_seconds() / 60,
            'bar_count': spec.bar_count,
            'min_coverage': spec.min_coverage,
        },
        'dates': [d.isoformat() for d in used],
        'days_skipped_empty': len(skipped),
        'days_dropped_coverage': len(dropped),
    }
    return detrend(Ensemble(np.vstack(rows), meta))


# +-----------+
# | Reporting |
# +-----------+

@dataclass(frozen=True)
class EnsembleSummary:
    '''Shape, per-position moments, and provenance of an ensemble.
    '''
    # pylint: disable=invalid-name
    M: int
    n: int
    column_means: tuple[float, ...]
    column_variances: tuple[float, ...]
    dropped_days: Optional[int]
    first_date: Optional[str]
    last_date: Optional[str]
    provenance: dict

    def to_json(self) -> dict:
        '''Convert the summary to a JSON object.
        '''
        return {
            'M': self.M,
            'n': self.n,
            'column_means': list(self.column_means),
            'column_variances': list(self.column_variances),
            'dropped_days': self.dropped_days,
            'first_date': self.first_date,
            'last_date': self.last_date,
            'provenance': {k: v for (k, v) in self.provenance.items() if k != 'dates'},
        }


def ensemble_report(e: Ensemble) -> EnsembleSummary:
    '''Summarize an ensemble.
    '''
    dates = e.meta.get('dates') or [None]
    dropped = None
    if e.meta.get('source') == 'ingest':
        dropped = e.meta.get('days_dropped_coverage', 0) + e.meta.get('days_skipped_empty', 0)
    return EnsembleSummary(
        e.M,
        e.n,
        tuple(e.returns.mean(axis=0).tolist()),
        tuple(e.returns.var(axis=0).tolist()),
        dropped,
        dates[0],
        dates[-1],
        dict(e.meta),
    )
