'''Returns over different intervals (t, T), rescaled by sqrt(t^(2D) - (t-T)^(2D)), all follow
the same non-Gaussian scaling function g.
'''

import numpy as np
from src import selfsim
from src.examples.util import pause, tab

D = 0.36
M = 12_820
SEED = 11


def main():
    '''Entrypoint.
    '''
    rho = selfsim.theory.default_mixture()
    model = selfsim.process.ProcessModel(D, rho)
    e = selfsim.stats.estimators.detrend(
        selfsim.simul.simulate_ensemble(model, M, SEED, jobs=-1))
    print(f'Simulated M = {e.M} histories of n = {e.n} returns.')
    print()

    fit = selfsim.stats.estimators.estimate_D(e, [0.5, 1.0, 1.5, 2.0])
    print(f'Estimated D = {fit.D:.4f} +- {fit.stderr:.4f} (simulated with {D}).')
    for (alpha, d) in fit.per_alpha:
        print(tab(f'alpha = {alpha}: {d:.4f}'))
    print()
    pause()

    spec = selfsim.config.RunConfig().collapse_spec(e.n)
    data = selfsim.stats.estimators.collapse(e, D, spec)
    for entry in data.entries:
        g = selfsim.scalefn.g_table(rho, entry.bin_centers)
        mask = entry.counts > 0
        worst = np.max(np.abs(entry.rescaled_density[mask] - g[mask]) / g[mask])
        print(f'(t, T) = ({entry.t:2}, {entry.T:2}): largest relative deviation from g '
              f'over occupied bins {worst:.2f}')
    print()
    pause()

    entry = data.entries[-1]
    g = selfsim.scalefn.g_table(rho, entry.bin_centers)
    print(f'Rescaled histogram of r({entry.t}, {entry.T}) against g:')
    for (x, h, y) in zip(entry.bin_centers[::4], entry.rescaled_density[::4], g[::4]):
        print(tab(f'x = {x:10.3g}: {h:10.4g} vs {y:10.4g}'))


if __name__ == '__main__':
    main()
