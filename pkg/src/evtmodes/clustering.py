"""Extremal-index estimation from interexceedance times.

The extremal index in (0, 1] is the inverse mean cluster size of
threshold exceedances; 1 means Poisson-like, unclustered exceedances.
It is estimated here from the first two moments of the gaps between
consecutive exceedance times, with the usual two-branch moment estimator
and its cap at 1. A seeded sampler for the limiting waiting-time mixture
provides the Monte Carlo oracle for consistency tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, InputError, TooFewExceedances

__all__ = [
    "InterexceedanceTimes",
    "interexceedance",
    "ferro_segers",
    "sample_interexceedance",
    "autocorrelation",
]


@dataclass(frozen=True)
class InterexceedanceTimes:
    """Gaps between consecutive exceedance time indices, all >= 1."""

    tau: np.ndarray
    n_exceedances: int

    def __post_init__(self):
        tau = np.asarray(self.tau)
        object.__setattr__(self, "tau", tau)
        if tau.size != self.n_exceedances - 1:
            raise InputError("gap count must be one less than exceedance count")
        if tau.size and tau.min() < 1:
            raise InputError("interexceedance times must be >= 1")


def interexceedance(times) -> InterexceedanceTimes:
    """Gaps of a strictly increasing integer vector of exceedance times."""
    t = np.asarray(times)
    if t.size < 2:
        raise TooFewExceedances("need at least two exceedances to form gaps")
    tau = np.diff(t)
    if tau.min() < 1:
        raise InputError("exceedance times must be strictly increasing")
    return InterexceedanceTimes(tau=tau, n_exceedances=int(t.size))


def ferro_segers(it: InterexceedanceTimes) -> float:
    """Moment estimator of the extremal index, capped at 1.

    Uses the shifted moments when any gap exceeds 2 and the plain first
    two moments otherwise; averages run over all gaps.
    """
    tau = it.tau.astype(float)
    if tau.size == 0:
        raise TooFewExceedances("no interexceedance times")
    if tau.max() > 2:
        num = 2.0 * np.mean(tau - 1.0) ** 2
        den = np.mean((tau - 1.0) * (tau - 2.0))
    else:
        num = 2.0 * np.mean(tau) ** 2
        den = np.mean(tau**2)
    if den == 0.0:
        raise DegenerateDenominator("zero denominator in extremal-index estimator")
    return min(num / den, 1.0)


def sample_interexceedance(theta: float, zeta_u: float, seed: int, n: int) -> np.ndarray:
    """Exceedance times whose gaps follow the limiting waiting-time mixture.

    With probability 1 - theta a gap is within-cluster and realized as the
    minimal integer gap 1; otherwise the rescaled waiting time is drawn
    from an exponential with mean 1/theta, converted to a gap by dividing
    by the exceedance probability ``zeta_u`` and rounding up. Deterministic
    per seed.

    Returns the integer time vector (first exceedance at 0), length n.
    """
    if not 0.0 < theta <= 1.0:
        raise InputError(f"theta must lie in (0, 1], got {theta}")
    if not 0.0 < zeta_u < 1.0:
        raise InputError(f"zeta_u must lie in (0, 1), got {zeta_u}")
    if n < 2:
        raise InputError("need n >= 2 exceedances")
    rng = np.random.default_rng(seed)
    n_gaps = n - 1
    within = rng.random(n_gaps) >= theta
    w = rng.exponential(scale=1.0 / theta, size=n_gaps)
    gaps = np.where(within, 1, np.ceil(w / zeta_u).astype(np.int64))
    times = np.empty(n, dtype=np.int64)
    times[0] = 0
    np.cumsum(gaps, out=times[1:])
    return times


def autocorrelation(series, max_lag: int) -> np.ndarray:
    """Sample Pearson autocorrelation at lags 1..max_lag.

    Each lag correlates the overlapping pair (x[:-lag], x[lag:]) with its
    own means and variances. Lag 0 is implicitly 1 and not emitted. A lag
    whose subseries is constant yields NaN.
    """
    x = np.asarray(series, dtype=float)
    if max_lag < 1:
        raise InputError("max_lag must be >= 1")
    if x.size <= max_lag:
        raise InputError("series must be longer than max_lag")
    out = np.empty(max_lag)
    for lag in range(1, max_lag + 1):
        a = x[:-lag]
        b = x[lag:]
        a = a - a.mean()
        b = b - b.mean()
        den = np.sqrt(a.dot(a) * b.dot(b))
        out[lag - 1] = a.dot(b) / den if den > 0.0 else np.nan
    return out
