"""Intraday seasonality and rolling local-threshold estimation.

The mean intraday volatility profile separates the predictable, seasonal
part of risk from the residual part; dividing a mode by its profile
deseasonalizes it. A trailing rolling-window quantile then supplies a
local threshold that adapts to the current state of the series, and the
block-maxima location parameter inherits the threshold's time
dependence while shape and scale stay fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd

from .distributions import GevParams, gev_pdf
from .errors import InputError, WindowTooLarge, ZeroProfile
from .estimation import ExcessSample, GpdFit, infer_gev, nearest_rank_index
from .preprocess import TradingGrid

__all__ = [
    "DEFAULT_WINDOW",
    "VolatilityProfile",
    "DynamicThreshold",
    "NonstationaryGev",
    "intraday_profile",
    "residuals",
    "rolling_quantile",
    "dynamic_exceedances",
    "nonstationary_gev",
]

# Roughly half a trading day at 1-second resolution.
DEFAULT_WINDOW = 10000

# Profile entries below this fraction of the peak signal degenerate input.
PROFILE_FLOOR = 1e-12


@dataclass(frozen=True)
class VolatilityProfile:
    """Mean absolute return at each intraday position, strictly positive."""

    values: np.ndarray
    mode: str = ""

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.size == 0:
            raise InputError("profile is empty")
        if v.min() < PROFILE_FLOOR * v.max() or v.max() <= 0.0:
            raise ZeroProfile("profile has (numerically) zero entries")

    @property
    def period(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class DynamicThreshold:
    """Per-second local threshold from a trailing rolling quantile.

    ``u[t]`` is defined for t >= window; the warmup region t < window
    carries the first defined value and is excluded from estimation.
    """

    u: np.ndarray
    window: int
    quantile: float

    @property
    def warmup(self) -> int:
        return self.window


@dataclass(frozen=True)
class NonstationaryGev:
    """Time-indexed block-maxima parameters: fixed shape/scale, moving location."""

    gamma: float
    scale: float
    loc: np.ndarray
    warmup: int

    def density(self, t: int, x) -> np.ndarray:
        """Density of the daily maximum at time t, normalized in x."""
        p = GevParams(gamma=self.gamma, loc=float(self.loc[t]), scale=self.scale)
        return gev_pdf(p, x)


def intraday_profile(series, grid: TradingGrid, mode: str = "") -> VolatilityProfile:
    """Mean absolute value at each intraday position, averaged over days.

    The series must hold ``grid.n_days`` equal-length day segments laid
    end to end (the day length may differ from the grid's price sampling
    length when returns shortened each day).
    """
    x = np.asarray(series, dtype=float)
    n_days = grid.n_days
    if x.size == 0 or x.size % n_days != 0:
        raise InputError("series length must be a multiple of the day count")
    day_len = x.size // n_days
    values = np.abs(x).reshape(n_days, day_len).mean(axis=0)
    return VolatilityProfile(values=values, mode=mode)


def residuals(series, profile: VolatilityProfile) -> np.ndarray:
    """Divide a series by the profile at the matching intraday position."""
    x = np.asarray(series, dtype=float)
    period = profile.period
    if x.size % period != 0:
        raise InputError("series length must be a multiple of the profile period")
    return (x.reshape(-1, period) / profile.values).ravel()


def rolling_quantile(series, window: int = DEFAULT_WINDOW, q: float = 0.999) -> DynamicThreshold:
    """Trailing nearest-rank quantile over the previous ``window`` points.

    ``u[t]`` is the ceil(q*window)-th order statistic of
    ``series[t-window : t]`` — strictly past values, never the current
    point. The warmup region carries the first defined value. Backed by an
    order-statistics skiplist, O(log window) per step.
    """
    x = np.asarray(series, dtype=float)
    t_total = x.size
    if not 0.0 < q < 1.0:
        raise InputError(f"q must lie in (0, 1), got {q}")
    if window < 1:
        raise InputError("window must be >= 1")
    if window >= t_total:
        raise WindowTooLarge(
            f"window {window} leaves no strictly-past window in {t_total} points"
        )
    k = nearest_rank_index(q, window)
    u = np.empty(t_total)
    if window == 1:
        u[1:] = x[:-1]
    else:
        q_eff = (k - 1) / (window - 1)
        # integer target position makes 'nearest' land exactly on the
        # k-th order statistic of every full window
        r = pd.Series(x).rolling(window).quantile(q_eff, interpolation="nearest")
        u[window:] = r.to_numpy()[window - 1 : t_total - 1]
    u[:window] = u[window]
    return DynamicThreshold(u=u, window=window, quantile=q)


def dynamic_exceedances(series, threshold: DynamicThreshold) -> ExcessSample:
    """Excesses of a series over its local threshold, past the warmup.

    The sample's threshold field is NaN (each excess has its own local
    threshold) and total_count excludes the warmup region. The result
    feeds the fitting and clustering estimators unchanged.
    """
    x = np.asarray(series, dtype=float)
    if x.size != threshold.u.size:
        raise InputError("series and threshold length differ")
    t0 = threshold.warmup
    mask = x[t0:] > threshold.u[t0:]
    times = np.nonzero(mask)[0] + t0
    return ExcessSample(
        threshold=math.nan,
        excesses=x[times] - threshold.u[times],
        source_times=times,
        total_count=int(x.size - t0),
    )


def nonstationary_gev(fit: GpdFit, threshold: DynamicThreshold, zeta: float,
                      block_len: int) -> NonstationaryGev:
    """Block-maxima parameters with the location tracking the threshold.

    Applies the return-period matching at every t with u = u(t), holding
    shape, scale and exceedance probability fixed: shape and scale are
    constant, the location is u(t) plus a constant offset.
    """
    base = infer_gev(replace(fit, threshold=0.0), zeta, block_len)
    return NonstationaryGev(
        gamma=base.gamma,
        scale=base.scale,
        loc=threshold.u + base.loc,
        warmup=threshold.warmup,
    )
