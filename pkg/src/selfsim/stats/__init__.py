'''Empirical statistics of ensembles and their error bars.
'''

from . import errorbars, estimators
