'''Batch command-line front end.

Every command reads a JSON run configuration and writes CSV/JSON files into the output
directory. Exit codes: 0 on success, 1 on a runtime failure, 2 on a usage or configuration error.
'''

import argparse
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path as FilePath
from typing import Callable, Optional
import numpy as np
import pandas as pd
from . import mixture, scalefn, theory
from .config import RunConfig, load_config
from .ensemble import (CorrelatorCurve, CorrelatorKind, collapse_to_json, curves_to_json,
                       load_ensemble, save_collapse, save_curves, save_ensemble)
from .errors import ConfigError, DivergentMoment, InsufficientData, InvalidParameter, SelfSimError
from .ingest import build_ensemble, ensemble_report, load_prices
from .process import DEFAULT_HORIZON, ProcessModel, aggregate_scale, load_model, save_model
from .simul import simulate_ensemble
from .stats import errorbars, estimators
from .stats.errorbars import Statistic

logger = logging.getLogger(__name__)

Z_OUTLIER = 3.0
# Density tables span this many standard deviations of r_1 on each side
DENSITY_SPAN = 5.0
DENSITY_POINTS = 101


def _out_dir(config: RunConfig) -> FilePath:
    out = FilePath(config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(obj, path: FilePath):
    with open(path, 'w', encoding='utf-8') as fp:
        json.dump(obj, fp, indent=2, sort_keys=True)
        fp.write('\n')


def _statistic(name: str, fn: Callable, *args):
    '''Evaluate a statistic, naming it in the log if it fails.
    '''
    try:
        return fn(*args)
    except SelfSimError:
        logger.error('statistic %s failed', name)
        raise


# +----------+
# | simulate |
# +----------+

def cmd_simulate(config: RunConfig) -> FilePath:
    '''Simulate an ensemble from a model file.

    #### Arguments
        config (RunConfig): Needs `model`, `M`, and `seed`.

    #### Return
        Path: Written ensemble CSV (its JSON sidecar sits next to it).
    '''
    model = load_model(config.require_file('model'))
    (M, seed) = (config.require('M'), config.require('seed'))  # pylint: disable=invalid-name
    logger.info('simulating M=%d histories of n=%d returns (seed=%d, jobs=%d)',
                M, model.horizon_n, seed, config.jobs)
    e = simulate_ensemble(model, M, seed, config.jobs)
    path = _out_dir(config) / 'ensemble.csv'
    save_ensemble(e, path)
    return path


# +--------+
# | ingest |
# +--------+

def cmd_ingest(config: RunConfig) -> FilePath:
    '''Build an ensemble from a raw price file and write it with an ingest report.
    '''
    source = config.require_file('prices')
    records = load_prices(source, config.price_format)
    e = build_ensemble(records, config.session, source=str(source))
    out = _out_dir(config)
    path = out / 'ensemble.csv'
    save_ensemble(e, path)
    report = ensemble_report(e)
    _write_json(report.to_json(), out / 'ingest_report.json')
    logger.info('ingested %d days of %d returns (%s dropped)', report.M, report.n,
                report.dropped_days)
    return path


# +---------+
# | analyze |
# +---------+

def cmd_analyze(config: RunConfig) -> FilePath:
    '''Compute every empirical statistic of an ensemble.

    Files written to the output directory:
        increments.csv    m_2(t, 1) per position
        moments.csv       m_alpha(t, t) per alpha and t
        scaling.json      estimate of D with per-alpha slopes
        linear.csv        linear correlation of r_1 and r_n
        kappa.csv         kappa_{alpha,beta}(1, n) with uniform error bars per curve
        vol_autocorr.csv  c(1, n)
        K.csv             K_{alpha,beta}(t1, t2) for the configured exponent pairs
        collapse.csv      rescaled histograms, rescaled with the estimated D
        collapse.json     the same histograms as JSON
        summary.json      ensemble report and list of files

    #### Return
        Path: Output directory.
    '''
    e = estimators.detrend(load_ensemble(config.require_file('ensemble')))
    out = _out_dir(config)

    save_curves([_statistic('increment_m2', estimators.increment_curve, e)],
                out / 'increments.csv')
    save_curves([_statistic('moment', estimators.moment_curve, e, a) for a in config.alphas],
                out / 'moments.csv')

    fit = _statistic('D', estimators.estimate_D, e, config.alphas)
    scaling = {
        'D': fit.D,
        'stderr': fit.stderr,
        'per_alpha': [{'alpha': a, 'D': d} for (a, d) in fit.per_alpha],
    }
    _write_json(scaling, out / 'scaling.json')

    save_curves([_statistic('linear', estimators.linear_corr_curve, e)], out / 'linear.csv')

    kappas = []
    for alpha in config.alphas:
        for beta in config.betas:
            curve = _statistic('kappa', estimators.kappa_curve, e, alpha, beta)
            kappas.append(curve.with_errors(errorbars.kappa_error_bars(curve)))
    save_curves(kappas, out / 'kappa.csv')

    save_curves([_statistic('vol_autocorr', estimators.vol_autocorr_curve, e)],
                out / 'vol_autocorr.csv')

    pairs = theory.time_pairs(e.n)
    save_curves([_statistic('K', estimators.K_grid, e, a, b, pairs) for (a, b) in config.k_pairs],
                out / 'K.csv')

    data = _statistic('collapse', estimators.collapse, e, fit.D, config.collapse_spec(e.n),
                      config.bins)
    save_collapse(data, out / 'collapse.csv')
    _write_json(collapse_to_json(data), out / 'collapse.json')

    summary = ensemble_report(e).to_json()
    summary['D'] = scaling
    summary['files'] = ['increments.csv', 'moments.csv', 'scaling.json', 'linear.csv',
                        'kappa.csv', 'vol_autocorr.csv', 'K.csv', 'collapse.csv',
                        'collapse.json']
    _write_json(summary, out / 'summary.json')
    logger.info('analyzed M=%d histories: D = %.4f +- %.4f', e.M, fit.D, fit.stderr)
    return out


# +---------+
# | compare |
# +---------+

def _predicted(model: ProcessModel, statistic: Statistic) -> Optional[CorrelatorCurve]:
    try:
        return statistic.predicted(model)
    except DivergentMoment as err:
        logger.warning('skipping %s (alpha=%s, beta=%s): %s', statistic.kind.value,
                       statistic.alpha, statistic.beta, err)
        return None


def _rows(empirical: CorrelatorCurve, predicted: CorrelatorCurve) -> list[dict]:
    rows = []
    for (emp, th) in zip(empirical.points, predicted.points):
        assert emp.index == th.index
        z = (emp.value - th.value) / emp.err if emp.err > 0 else None
        rows.append({
            'kind': empirical.kind.value,
            'alpha': empirical.alpha,
            'beta': empirical.beta,
            't1': emp.index[0],
            't2': emp.index[1] if len(emp.index) > 1 else None,
            'empirical': emp.value,
            'err': emp.err,
            'theory': th.value,
            'z': z,
        })
    return rows


def _write_densities(model: ProcessModel, spec: list[tuple[int, int]], out: FilePath):
    '''Tabulate g and the densities of R(t, T) over the collapse pairs.
    '''
    # pylint: disable=invalid-name
    width = DENSITY_SPAN * math.sqrt(mixture.moment(model.mixture, 2))
    xs = np.linspace(-width, width, DENSITY_POINTS)
    g = pd.DataFrame({'x': xs, 'density': scalefn.g_table(model.mixture, xs)})
    g.to_csv(out / 'g.csv', index=False, float_format='%.17g', lineterminator='\n')

    frames = []
    for (t, T) in spec:
        rs = xs * aggregate_scale(model.D, t, T)
        frames.append(pd.DataFrame({
            't': t,
            'T': T,
            'r': rs,
            'density': scalefn.return_pdf_table(model, t, T, rs),
        }))
    pd.concat(frames, ignore_index=True).to_csv(out / 'return_pdf.csv', index=False,
                                                float_format='%.17g', lineterminator='\n')


def cmd_compare(config: RunConfig) -> FilePath:
    '''Compare an ensemble against the predictions of a model.

    Every statistic carries parametric-bootstrap error bars from replicates of the ensemble
    size; the spread of each kappa curve is reported next to them. Files written to the output
    directory:
        comparison.csv    one row per point with value, error, prediction, and z-score
        comparison.json   counts of points beyond 3 standard errors, predicted curves
        g.csv             scaling function g on a grid of rescaled returns
        return_pdf.csv    densities of R(t, T) for the collapse pairs

    #### Return
        Path: Output directory.
    '''
    # pylint: disable=too-many-locals
    if not config.alphas or not config.betas:
        raise ConfigError('the alpha and beta grids must not be empty')
    model = load_model(config.require_file('model'))
    e = estimators.detrend(load_ensemble(config.require_file('ensemble')))
    if model.horizon_n != e.n:
        raise InvalidParameter(
            f'model horizon {model.horizon_n} differs from ensemble horizon {e.n}')

    candidates = [
        Statistic(CorrelatorKind.KAPPA, alpha, beta)
        for alpha in config.alphas for beta in config.betas
    ] + [
        Statistic(CorrelatorKind.VOL_AUTOCORR),
        Statistic(CorrelatorKind.LINEAR),
        Statistic(CorrelatorKind.INCREMENT_M2),
    ] + [Statistic(CorrelatorKind.K, a, b) for (a, b) in config.k_pairs]

    (bootstrapped, predictions, skipped) = ([], [], [])
    for statistic in candidates:
        predicted = _predicted(model, statistic)
        if predicted is None:
            skipped.append({'kind': statistic.kind.value, 'alpha': statistic.alpha,
                            'beta': statistic.beta})
            continue
        bootstrapped.append(statistic)
        predictions.append(predicted)
    if not bootstrapped:
        raise InsufficientData('no statistic could be compared with the model')

    seed = config.seed if config.seed is not None else 0
    errs = errorbars.bootstrap_many(model, e.M, config.bootstrap_reps, bootstrapped, seed,
                                    config.jobs)
    (rows, spreads) = ([], [])
    for (statistic, predicted, err) in zip(bootstrapped, predictions, errs):
        curve = _statistic(statistic.kind.value, statistic.empirical, e)
        if statistic.kind == CorrelatorKind.KAPPA:
            spreads.append({'alpha': statistic.alpha, 'beta': statistic.beta,
                            'spread': errorbars.kappa_error_bars(curve)})
        rows += _rows(curve.with_errors(err), predicted)

    frame = pd.DataFrame(rows).astype({'t1': 'Int64', 't2': 'Int64'})
    out = _out_dir(config)
    frame.to_csv(out / 'comparison.csv', index=False, float_format='%.17g', lineterminator='\n')

    z = frame['z'].dropna().to_numpy(dtype=float)
    outliers = int(np.sum(np.abs(z) > Z_OUTLIER))
    by_kind = {
        kind: int(np.sum(np.abs(group['z'].dropna().to_numpy(dtype=float)) > Z_OUTLIER))
        for (kind, group) in frame.groupby('kind', sort=True)
    }
    report = {
        'points': int(len(frame)),
        'scored_points': int(z.size),
        'outliers': outliers,
        'outlier_fraction': outliers / z.size if z.size else None,
        'outliers_by_kind': by_kind,
        'kappa_spread': spreads,
        'skipped': skipped,
        'model': config.model,
        'ensemble': config.ensemble,
        'curves': curves_to_json(predictions),
    }
    _write_json(report, out / 'comparison.json')
    _write_densities(model, config.collapse_spec(e.n), out)
    logger.info('compared %d points: %d beyond %g standard errors', z.size, outliers, Z_OUTLIER)
    return out


# +-----------+
# | calibrate |
# +-----------+

def cmd_calibrate(config: RunConfig) -> FilePath:
    '''Fit a volatility measure to the calibration targets and write the model JSON.
    '''
    calib = config.require('calibration')
    (shape, e) = (None, None)
    if calib.shape_samples is not None:
        e = estimators.detrend(load_ensemble(calib.shape_samples))
        shape = e.returns[:, 0]

    D = calib.D  # pylint: disable=invalid-name
    if D is None:
        if e is None:
            raise ConfigError('calibration needs either D or shape_samples')
        D = estimators.estimate_D(e, config.alphas).D  # pylint: disable=invalid-name
    horizon = calib.horizon_n or (e.n if e is not None else DEFAULT_HORIZON)

    targets = theory.CalibrationTargets(calib.variance, calib.tail_index, shape,
                                        calib.fit_sigma_min)
    m = theory.calibrate(targets, theory.PowerLawInit(calib.gamma, calib.sigma_min))
    path = _out_dir(config) / 'model.json'
    save_model(ProcessModel(D, m, horizon), path)
    return path


# +------+
# | Main |
# +------+

COMMANDS = {
    'simulate': cmd_simulate,
    'ingest': cmd_ingest,
    'analyze': cmd_analyze,
    'compare': cmd_compare,
    'calibrate': cmd_calibrate,
}


def build_parser() -> argparse.ArgumentParser:
    '''Build the argument parser.
    '''
    parser = argparse.ArgumentParser(
        prog='selfsim',
        description='Ensemble statistics of a self-similar, non-Markovian return process.')
    parser.add_argument('command', choices=sorted(COMMANDS))
    parser.add_argument('--config', type=FilePath, help='JSON run configuration')
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--seed', type=int, help='root seed (unsigned 64-bit)')
    parser.add_argument('--jobs', type=int, help='number of parallel workers')
    parser.add_argument('--quiet', action='store_true', help='only log warnings and errors')
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    '''Run a command.

    #### Arguments
        argv (list[str]): Command-line arguments. Defaults to `sys.argv[1:]`.

    #### Return
        int: Exit code.
    '''
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
        force=True,
    )

    try:
        config = load_config(args.config) if args.config is not None else RunConfig()
        overrides = {k: getattr(args, k) for k in ('out', 'seed', 'jobs')
                     if getattr(args, k) is not None}
        config = replace(config, **overrides)
        COMMANDS[args.command](config)
    except ConfigError as err:
        logger.error('%s', err)
        return 2
    except (SelfSimError, OSError, json.JSONDecodeError) as err:
        logger.error('%s', err)
        return 1
    return 0
