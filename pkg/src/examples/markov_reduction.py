'''With a point-mass volatility measure and D = 1/2 the process has independent Gaussian
increments: every correlator takes its independent-returns value.
'''

from src import selfsim
from src.examples.util import pause, show_curve, tab

SIGMA0 = 1e-3
M = 20_000
SEED = 7


def main():
    '''Entrypoint.
    '''
    model = selfsim.process.ProcessModel(0.5, selfsim.mixture.degenerate(SIGMA0))
    print(f'Model: D = {model.D}, sigma0 = {SIGMA0}, n = {model.horizon_n}.')
    print()
    pause()

    # Stability of the joint characteristic function
    print('Stability identity p^n(k, ..., k) = p^1(n^D k):')
    for n in (1, 5, 17):
        k = 300.0
        lhs = selfsim.scalefn.char_fn_diag(model, n, k)
        rhs = selfsim.scalefn.char_fn_diag(model, 1, n**model.D * k)
        print(tab(f'n = {n:2}: {lhs:.10f} vs {rhs:.10f}'))
    print()
    pause()

    e = selfsim.stats.estimators.detrend(selfsim.simul.simulate_ensemble(model, M, SEED))
    print(f'Simulated M = {e.M} histories.')
    print()

    fit = selfsim.stats.estimators.estimate_D(e, [0.5, 1.0, 1.5, 2.0])
    print(f'Estimated D = {fit.D:.4f} +- {fit.stderr:.4f} (expected 0.5).')
    print()
    pause()

    for (alpha, beta) in ((1, 1), (1, 2), (2, 2)):
        curve = selfsim.stats.estimators.kappa_curve(e, alpha, beta)
        curve = curve.with_errors(selfsim.stats.errorbars.kappa_error_bars(curve))
        print(f'kappa_({alpha},{beta})(1, n), expected 1:\n{tab(show_curve(curve))}\n')
        pause()

    curve = selfsim.stats.estimators.vol_autocorr_curve(e)
    print(f'Volatility autocorrelation c(1, n), expected 0:\n{tab(show_curve(curve))}\n')
    curve = selfsim.stats.estimators.linear_corr_curve(e)
    print(f'Linear correlation, expected 0:\n{tab(show_curve(curve))}\n')


if __name__ == '__main__':
    main()
