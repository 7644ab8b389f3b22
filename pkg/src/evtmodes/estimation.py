"""Peaks-over-threshold machinery.

Excess extraction above fixed thresholds, maximum-likelihood fitting of
the excess family, asymptotic standard errors, quantile-quantile
diagnostics with the range-normalized RMS deviation, threshold sweeps
over tail-quantile grids, and inference of block-maxima parameters from
a threshold fit by return-period matching.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .clustering import ferro_segers, interexceedance
from .distributions import GAMMA_ZERO_TOL, GevParams, GpdParams, gpd_quantile
from .errors import (
    DegenerateRange,
    InputError,
    NonConvergence,
    NumericalError,
    TooFewExceedances,
)

__all__ = [
    "DEFAULT_N_MIN",
    "ExcessSample",
    "GpdFit",
    "SeEstimate",
    "SweepEntry",
    "asymptotic_se",
    "extract_excesses",
    "fit_gpd_mle",
    "gpd_log_likelihood",
    "gpd_score",
    "infer_gev",
    "nearest_rank_index",
    "nearest_rank_quantile",
    "nrmsd",
    "qq_points",
    "theta_sweep",
    "threshold_sweep",
]

# Below this count the asymptotic standard errors (the only error bars we
# report) are meaningless, so no fit is attempted.
DEFAULT_N_MIN = 50

_TAILS = ("positive", "negative")


@dataclass(frozen=True)
class ExcessSample:
    """Excesses over a threshold, in time order, with their time indices.

    ``threshold`` is NaN for dynamic-threshold samples, where each excess
    was measured against its own local threshold.
    """

    threshold: float
    excesses: np.ndarray
    source_times: np.ndarray
    total_count: int

    def __post_init__(self):
        exc = np.asarray(self.excesses, dtype=float)
        times = np.asarray(self.source_times)
        object.__setattr__(self, "excesses", exc)
        object.__setattr__(self, "source_times", times)
        if exc.size != times.size:
            raise InputError("excesses and source_times must have equal length")
        if exc.size and exc.min() <= 0.0:
            raise InputError("excesses must be strictly positive")
        if times.size > 1 and np.diff(times).min() < 1:
            raise InputError("source_times must be strictly increasing")
        if self.total_count < exc.size:
            raise InputError("total_count cannot be below the exceedance count")

    @property
    def n(self) -> int:
        return int(self.excesses.size)

    @property
    def zeta_u(self) -> float:
        """Empirical exceedance probability n / total_count."""
        return self.n / self.total_count


@dataclass(frozen=True)
class GpdFit:
    """Maximum-likelihood estimate with asymptotic errors and diagnostics."""

    params: GpdParams
    se_gamma: float
    se_sigma: float
    se_valid: bool
    n: int
    threshold: float
    nrmsd: float
    log_likelihood: float


class SeEstimate(NamedTuple):
    se_gamma: float
    se_sigma: float
    valid: bool


def extract_excesses(series, threshold: float, tail: str = "positive") -> ExcessSample:
    """Excesses of a series above a threshold, for either tail.

    The negative tail negates the series first, with the threshold
    interpreted on the negated series, so the lower tail's shape is the
    upper-tail shape of the mirrored problem. An empty result is a valid
    sample with n = 0; the fit stage rejects it.
    """
    s = np.asarray(series, dtype=float)
    if s.size == 0:
        raise InputError("series is empty")
    if tail not in _TAILS:
        raise InputError(f"tail must be one of {_TAILS}, got {tail!r}")
    if tail == "negative":
        s = -s
    mask = s > threshold
    times = np.nonzero(mask)[0]
    return ExcessSample(
        threshold=float(threshold),
        excesses=s[times] - threshold,
        source_times=times,
        total_count=int(s.size),
    )


def gpd_log_likelihood(gamma: float, sigma: float, excesses) -> float:
    """Log-likelihood of the excess family; -inf outside the feasible set."""
    x = np.asarray(excesses, dtype=float)
    n = x.size
    if sigma <= 0.0:
        return -np.inf
    if abs(gamma) < GAMMA_ZERO_TOL:
        return -n * math.log(sigma) - float(np.sum(x)) / sigma
    t = gamma * x / sigma
    if np.min(t) <= -1.0:
        return -np.inf
    return -n * math.log(sigma) - (1.0 + 1.0 / gamma) * float(np.sum(np.log1p(t)))


def gpd_score(gamma: float, sigma: float, excesses) -> tuple[float, float]:
    """Analytic gradient of the log-likelihood in (gamma, sigma)."""
    x = np.asarray(excesses, dtype=float)
    n = x.size
    y = x / sigma
    if abs(gamma) < GAMMA_ZERO_TOL:
        # limits of the general expressions as gamma -> 0
        d_gamma = float(np.sum(y * y)) / 2.0 - float(np.sum(y))
        d_sigma = (float(np.sum(y)) - n) / sigma
        return d_gamma, d_sigma
    t = gamma * y
    s1 = float(np.sum(np.log1p(t)))
    s2 = float(np.sum(y / (1.0 + t)))
    d_gamma = s1 / gamma**2 - (1.0 + 1.0 / gamma) * s2
    d_sigma = -n / sigma + (1.0 + gamma) / sigma * s2
    return d_gamma, d_sigma


def _pwm_start(x: np.ndarray) -> tuple[float, float]:
    """Probability-weighted-moments start point, clamped to a sane box."""
    xs = np.sort(x)
    n = xs.size
    a0 = float(xs.mean())
    p = (np.arange(1, n + 1) - 0.35) / n
    a1 = float(np.mean(xs * (1.0 - p)))
    den = 2.0 * a1 - a0
    if den == 0.0 or not np.isfinite(den):
        return 0.1, a0
    gamma = (4.0 * a1 - a0) / den
    sigma = a0 * (1.0 - gamma)
    if not np.isfinite(gamma) or not np.isfinite(sigma) or sigma <= 0.0:
        return 0.1, a0
    gamma = float(np.clip(gamma, -0.9, 2.0))
    # keep the start strictly feasible for negative shapes
    if gamma < 0.0:
        sigma = max(sigma, 1.001 * (-gamma) * float(xs[-1]))
    return gamma, sigma


def fit_gpd_mle(sample: ExcessSample, n_min: int = DEFAULT_N_MIN) -> GpdFit:
    """Maximize the excess-family log-likelihood over (gamma, sigma).

    Nelder-Mead direct search on (gamma, log sigma) from a
    probability-weighted-moments start, followed by an analytic-gradient
    polish; the feasibility constraint 1 + gamma*x/sigma > 0 is enforced
    through a penalty during search and strictly on the result.

    Raises ``TooFewExceedances`` below ``n_min`` exceedances and
    ``NonConvergence`` when neither stage meets its tolerance.
    """
    if sample.n < n_min:
        raise TooFewExceedances(
            f"{sample.n} exceedances below the minimum of {n_min}"
        )
    x = sample.excesses
    x_max = float(x.max())

    def neg_ll(p):
        gamma, log_sigma = p
        if abs(gamma) > 50.0 or abs(log_sigma) > 200.0:
            return 1e12 * (1.0 + abs(gamma) + abs(log_sigma))
        sigma = math.exp(log_sigma)
        if gamma < 0.0 and 1.0 + gamma * x_max / sigma <= 0.0:
            # graded penalty steers the simplex back into the feasible set
            return 1e12 * (1.0 - gamma * x_max / sigma)
        ll = gpd_log_likelihood(gamma, sigma, x)
        if not np.isfinite(ll):
            return 1e12
        return -ll

    def neg_ll_grad(p):
        gamma, log_sigma = p
        sigma = math.exp(log_sigma)
        d_gamma, d_sigma = gpd_score(gamma, sigma, x)
        return np.array([-d_gamma, -d_sigma * sigma])

    g0, s0 = _pwm_start(x)
    start = np.array([g0, math.log(s0)])
    nm = minimize(
        neg_ll,
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-10, "maxiter": 4000, "maxfev": 4000},
    )
    best = nm.x
    best_val = nm.fun
    with warnings.catch_warnings():
        # the polish may stop on a failed line search at the optimum
        warnings.simplefilter("ignore")
        polish = minimize(neg_ll, nm.x, jac=neg_ll_grad, method="BFGS",
                          options={"gtol": 1e-8, "maxiter": 200})
    if polish.fun <= best_val and np.isfinite(polish.fun):
        best, best_val = polish.x, polish.fun

    gamma = float(best[0])
    sigma = float(math.exp(best[1]))
    if abs(gamma) < GAMMA_ZERO_TOL:
        gamma = 0.0
    feasible = gamma >= 0.0 or 1.0 + gamma * x_max / sigma > 0.0
    grad_norm = float(np.max(np.abs(neg_ll_grad(best)))) if feasible else np.inf
    converged = nm.success or polish.success or grad_norm < 1e-4 * max(1.0, sample.n)
    if not feasible or not converged or best_val >= 1e12:
        raise NonConvergence(
            f"GPD fit did not converge (n={sample.n}, gamma={gamma:.4g}, "
            f"sigma={sigma:.4g}, grad={grad_norm:.3g})"
        )

    params = GpdParams(gamma=gamma, sigma=sigma)
    se = asymptotic_se(gamma, sigma, sample.n)
    return GpdFit(
        params=params,
        se_gamma=se.se_gamma,
        se_sigma=se.se_sigma,
        se_valid=se.valid,
        n=sample.n,
        threshold=sample.threshold,
        nrmsd=_nrmsd_arrays(*_qq_arrays(x, params)),
        log_likelihood=gpd_log_likelihood(gamma, sigma, x),
    )


def asymptotic_se(gamma: float, sigma: float, n: int) -> SeEstimate:
    """Asymptotic standard errors of the ML estimates.

    se_gamma = sqrt((1+gamma)^2 / n) and se_sigma = sqrt(2 sigma^2 (1+gamma) / n),
    valid for gamma > -1/2; outside that domain the estimate is flagged.
    """
    if n < 1:
        raise InputError("n must be >= 1")
    se_gamma = math.sqrt((1.0 + gamma) ** 2 / n)
    v_sigma = 2.0 * sigma**2 * (1.0 + gamma) / n
    se_sigma = math.sqrt(v_sigma) if v_sigma >= 0.0 else math.nan
    return SeEstimate(se_gamma=se_gamma, se_sigma=se_sigma, valid=gamma > -0.5)


def _qq_arrays(excesses: np.ndarray, params: GpdParams) -> tuple[np.ndarray, np.ndarray]:
    xs = np.sort(excesses)
    n = xs.size
    # plotting position i/(n+1) keeps the top quantile finite for gamma >= 0
    p = np.arange(1, n + 1) / (n + 1.0)
    return xs, gpd_quantile(params, p)


def qq_points(sample: ExcessSample, fit: GpdFit) -> np.ndarray:
    """Quantile-quantile pairs, shape (n, 2): (empirical, theoretical).

    Sorted excesses paired with the fitted quantiles at plotting
    positions i/(n+1).
    """
    emp, theo = _qq_arrays(sample.excesses, fit.params)
    return np.column_stack([emp, theo])


def _nrmsd_arrays(empirical: np.ndarray, theoretical: np.ndarray) -> float:
    rng = float(empirical.max() - empirical.min())
    if rng <= 0.0:
        raise DegenerateRange("all excesses equal; NRMSD undefined")
    return float(np.sqrt(np.mean((theoretical - empirical) ** 2)) / rng)


def nrmsd(sample: ExcessSample, fit: GpdFit) -> float:
    """Range-normalized RMS deviation between the Q-Q columns."""
    if sample.n < 2:
        raise InputError("need at least two excesses")
    return _nrmsd_arrays(*_qq_arrays(sample.excesses, fit.params))


def nearest_rank_index(q: float, n: int) -> int:
    """1-based nearest-rank index: the ceil(q*n)-th order statistic.

    A tiny downward nudge keeps q*n values that are integers up to float
    round-off from spilling into the next rank.
    """
    if n < 1:
        raise InputError("n must be >= 1")
    if not 0.0 < q <= 1.0:
        raise InputError(f"quantile level must lie in (0, 1], got {q}")
    k = int(math.ceil(q * n - 1e-9))
    return min(max(k, 1), n)


def nearest_rank_quantile(values, q: float, *, is_sorted: bool = False) -> float:
    """Empirical q-quantile by the nearest-rank convention."""
    x = np.asarray(values, dtype=float)
    if not is_sorted:
        x = np.sort(x)
    return float(x[nearest_rank_index(q, x.size) - 1])


@dataclass(frozen=True)
class SweepEntry:
    """One tail-quantile row of a threshold sweep.

    ``fit`` and ``theta`` are None when the corresponding estimator could
    not run; ``error`` then carries the error type name.
    """

    alpha: float
    threshold: float
    n: int
    fit: GpdFit | None
    theta: float | None
    error: str | None = None


def _sweep(series, tail_quantiles, tail, n_min, with_fit) -> list[SweepEntry]:
    s = np.asarray(series, dtype=float)
    if s.size == 0:
        raise InputError("series is empty")
    if tail not in _TAILS:
        raise InputError(f"tail must be one of {_TAILS}, got {tail!r}")
    alphas = sorted({float(a) for a in tail_quantiles}, reverse=True)
    if not alphas or alphas[0] >= 1.0 or alphas[-1] <= 0.0:
        raise InputError("tail quantiles must lie in (0, 1)")
    signed = -s if tail == "negative" else s
    sorted_vals = np.sort(signed)
    entries = []
    for alpha in alphas:
        u = nearest_rank_quantile(sorted_vals, 1.0 - alpha, is_sorted=True)
        sample = extract_excesses(signed, u, "positive")
        theta = None
        fit = None
        error = None
        try:
            theta = ferro_segers(interexceedance(sample.source_times))
        except NumericalError as exc:
            error = type(exc).__name__
        if with_fit:
            try:
                fit = fit_gpd_mle(sample, n_min=n_min)
            except NumericalError as exc:
                error = type(exc).__name__
        entries.append(
            SweepEntry(alpha=alpha, threshold=u, n=sample.n, fit=fit,
                       theta=theta, error=error)
        )
    return entries


def threshold_sweep(series, tail_quantiles, tail: str = "positive",
                    n_min: int = DEFAULT_N_MIN) -> list[SweepEntry]:
    """Fit and extremal-index estimates over a grid of tail quantiles.

    For each tail-quantile alpha the threshold is the nearest-rank
    (1-alpha)-quantile of the (tail-adjusted) series. Rows are ordered by
    alpha descending; per-row estimator failures are recorded on the row
    without aborting the sweep.
    """
    return _sweep(series, tail_quantiles, tail, n_min, with_fit=True)


def theta_sweep(series, tail_quantiles, tail: str = "positive") -> list[SweepEntry]:
    """Extremal-index-only variant of :func:`threshold_sweep`."""
    return _sweep(series, tail_quantiles, tail, DEFAULT_N_MIN, with_fit=False)


def infer_gev(fit: GpdFit, zeta_u: float, block_len: int) -> GevParams:
    """Block-maxima parameters implied by a threshold fit.

    Matches return periods for blocks of ``block_len`` observations with
    exceedance probability ``zeta_u`` at the fit threshold: the shape
    carries over, scale and location follow from the linear relation
    between the two families, so substituting them back recovers the fit
    scale exactly.
    """
    if not 0.0 < zeta_u <= 1.0:
        raise InputError(f"zeta_u must lie in (0, 1], got {zeta_u}")
    if block_len < 1:
        raise InputError("block_len must be >= 1")
    mz = block_len * zeta_u
    if mz <= 0.0:
        raise InputError("block_len * zeta_u must be positive")
    gamma = fit.params.gamma
    sigma = fit.params.sigma
    u = fit.threshold
    if abs(gamma) < GAMMA_ZERO_TOL:
        scale = sigma
        loc = u + sigma * math.log(mz)
        return GevParams(gamma=0.0, loc=loc, scale=scale)
    scale = sigma * mz**gamma
    loc = u + (sigma / gamma) * (mz**gamma - 1.0)
    return GevParams(gamma=gamma, loc=loc, scale=scale)
