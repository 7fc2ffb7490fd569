'''The selfsim library: ensemble statistics of a self-similar, non-Markovian return process.
'''

from . import cli, config, ensemble, errors, ingest, mixture, process, scalefn, simul, stats, theory
