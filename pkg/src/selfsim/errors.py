'''Exceptions raised by the selfsim library.
'''


class SelfSimError(Exception):
    '''Base class of every error raised by the library.
    '''


class InvalidParameter(SelfSimError, ValueError):
    '''A model or estimator parameter lies outside its admissible domain.
    '''


class NonIntegrable(InvalidParameter):
    '''The requested volatility density cannot be normalized.
    '''


class DivergentMoment(SelfSimError, ArithmeticError):
    '''A moment of the volatility measure is infinite.
    '''


class DegenerateDensity(SelfSimError, TypeError):
    '''Pointwise evaluation was requested on a point-mass measure.
    '''


class IndexOutOfRange(SelfSimError, IndexError):
    '''A time index falls outside the ensemble horizon.
    '''


class DegenerateVariance(SelfSimError, ArithmeticError):
    '''A normalizing variance is zero.
    '''


class ZeroDenominator(SelfSimError, ZeroDivisionError):
    '''A ratio estimator has a vanishing denominator.
    '''


class InsufficientData(SelfSimError, ValueError):
    '''Not enough points, histories, or exponents for the requested statistic.
    '''


class CalibrationFailed(SelfSimError, RuntimeError):
    '''Root-finding could not bracket the calibration target.
    '''


class ParseError(SelfSimError, ValueError):
    '''A raw price file could not be parsed.

    #### Arguments
        message (str): Description of the problem.
        line (int): 1-based line number in the input file.
    '''

    def __init__(self, message: str, line: int):
        super().__init__(f'line {line}: {message}')
        self.line = line


class NonPositivePrice(ParseError):
    '''A price record carries a zero or negative price.
    '''


class NoCompleteSessions(SelfSimError, RuntimeError):
    '''Every trading day was dropped while building an ensemble.
    '''


class ConfigError(SelfSimError, ValueError):
    '''A run configuration is missing a field or holds an invalid value.
    '''
