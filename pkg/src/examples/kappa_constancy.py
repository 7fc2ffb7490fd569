'''kappa_{alpha,beta}(1, n) does not depend on the lag n and is symmetric in (alpha, beta),
even though the volatility autocorrelation decays with n.
'''

from src import selfsim
from src.examples.util import pause, show_curve, tab

D = 0.36
M = 12_820
SEED = 2024
PAIRS = [(0.5, 0.5), (1.0, 1.0), (0.5, 1.5), (1.5, 0.5)]


def main():
    '''Entrypoint.
    '''
    rho = selfsim.theory.default_mixture()
    model = selfsim.process.ProcessModel(D, rho)
    print(f'Volatility measure: {rho}')
    print(f'<sigma^2> = {selfsim.mixture.moment(rho, 2):.4g}')
    print()
    pause()

    e = selfsim.stats.estimators.detrend(
        selfsim.simul.simulate_ensemble(model, M, SEED, jobs=-1))
    print(f'Simulated M = {e.M} histories of n = {e.n} returns.')
    print()
    pause()

    for (alpha, beta) in PAIRS:
        curve = selfsim.stats.estimators.kappa_curve(e, alpha, beta)
        curve = curve.with_errors(selfsim.stats.errorbars.kappa_error_bars(curve))
        predicted = selfsim.theory.kappa_curve(model, alpha, beta)
        print(f'kappa_({alpha},{beta})(1, n):\n{tab(show_curve(curve, predicted))}\n')
        pause()

    curve = selfsim.stats.estimators.vol_autocorr_curve(e)
    statistic = selfsim.stats.errorbars.Statistic(selfsim.ensemble.CorrelatorKind.VOL_AUTOCORR)
    err = selfsim.stats.errorbars.bootstrap_error_bars(model, M, 20, statistic, SEED, jobs=-1)
    predicted = selfsim.theory.vol_autocorr_curve(model)
    print('Volatility autocorrelation c(1, n):')
    print(tab(show_curve(curve.with_errors(err), predicted)))


if __name__ == '__main__':
    main()
