"""Exception types shared across the library.

Two broad families: ``InputError`` for malformed or inconsistent input
(CLI exit code 2) and ``NumericalError`` for procedures that cannot
produce a valid result from otherwise well-formed data (CLI exit code 3).
"""


class EvtError(Exception):
    """Base class for all library errors."""


class InputError(EvtError):
    """Malformed, inconsistent or out-of-contract input."""


class NumericalError(EvtError):
    """A numerical procedure failed to produce a valid result."""


class TooFewExceedances(NumericalError):
    """Not enough threshold exceedances to run the requested estimator."""


class NonConvergence(NumericalError):
    """Optimizer failed its tolerance within the iteration budget."""


class DegenerateRange(NumericalError):
    """All excesses equal; range-normalized deviation is undefined."""


class DegenerateDenominator(NumericalError):
    """Moment ratio denominator is zero; estimator undefined."""


class MissingHistory(InputError):
    """A ticker has no quote before the first grid second."""


class NonpositivePrice(InputError):
    """Log returns require strictly positive prices."""


class ZeroVariance(InputError):
    """A return row is constant and cannot be standardized."""


class ZeroProfile(InputError):
    """Intraday volatility profile is (numerically) zero somewhere."""


class WindowTooLarge(InputError):
    """Rolling window does not leave any strictly-past window in the series."""


class NearSingular(NumericalError):
    """Correlation spectrum has an eigenvalue too close to zero to whiten."""


class NotSymmetric(InputError):
    """Spectral decomposition requires a symmetric matrix."""


class InvalidLoadings(InputError):
    """Factor loadings do not yield a positive-definite correlation matrix."""
