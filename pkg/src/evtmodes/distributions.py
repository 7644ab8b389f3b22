"""Generalized extreme value and generalized Pareto families.

Closed-form densities, cumulative distributions, quantiles, support
bounds and inverse-transform sampling. The shape parameter ``gamma``
selects exponential-type (``gamma = 0``), heavy (``gamma > 0``) or
bounded (``gamma < 0``) tail behavior in both families.

All evaluators accept scalars or arrays and return a float for scalar
input. They are pure functions; the sampler takes its seed explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GAMMA_ZERO_TOL",
    "GevParams",
    "GpdParams",
    "gev_cdf",
    "gev_pdf",
    "gev_quantile",
    "gev_support",
    "gpd_cdf",
    "gpd_pdf",
    "gpd_quantile",
    "gpd_sample",
    "gpd_support",
]

# Below this magnitude the shape parameter is treated as exactly zero and
# the exponential-type branch is used; avoids cancellation in (1+g*z)**(-1/g).
GAMMA_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class GevParams:
    """Block-maxima family parameters: shape, location, scale (> 0)."""

    gamma: float
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")


@dataclass(frozen=True)
class GpdParams:
    """Excess-over-threshold family parameters: shape and scale (> 0)."""

    gamma: float
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")


def _prepare(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _finish(out, scalar):
    return float(out) if scalar else out


def gev_support(p: GevParams) -> tuple[float, float]:
    """Support interval; infinite endpoints where the tail is unbounded."""
    if p.gamma > GAMMA_ZERO_TOL:
        return p.loc - p.scale / p.gamma, np.inf
    if p.gamma < -GAMMA_ZERO_TOL:
        return -np.inf, p.loc + p.scale / abs(p.gamma)
    return -np.inf, np.inf


def gpd_support(p: GpdParams) -> tuple[float, float]:
    """Support of the excess distribution: [0, inf) or [0, -sigma/gamma]."""
    if p.gamma < -GAMMA_ZERO_TOL:
        return 0.0, p.sigma / abs(p.gamma)
    return 0.0, np.inf


def gev_cdf(p: GevParams, x):
    """Cumulative distribution of the extreme value family.

    Clamps to 0 below the lower support bound (gamma > 0) and to 1 above
    the upper bound (gamma < 0) so sweeps may probe arbitrary x.
    """
    z, scalar = _prepare(x)
    z = (z - p.loc) / p.scale
    g = p.gamma
    if abs(g) < GAMMA_ZERO_TOL:
        out = np.exp(-np.exp(-z))
        return _finish(out, scalar)
    t = 1.0 + g * z
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.exp(-np.exp((-1.0 / g) * np.log1p(g * z)))
    out = np.where(t > 0.0, out, 0.0 if g > 0 else 1.0)
    return _finish(out, scalar)


def gev_pdf(p: GevParams, x):
    """Probability density of the extreme value family; 0 outside support.

    At a finite support endpoint the closed-form limit is returned:
    0 for gamma in (-1, 0), 1/scale at gamma = -1, +inf for gamma < -1.
    """
    z, scalar = _prepare(x)
    z = (z - p.loc) / p.scale
    g = p.gamma
    if abs(g) < GAMMA_ZERO_TOL:
        out = np.exp(-z - np.exp(-z)) / p.scale
        return _finish(out, scalar)
    t = 1.0 + g * z
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log1p_gz = np.log1p(g * z)
        out = np.exp(-(1.0 + 1.0 / g) * log1p_gz - np.exp((-1.0 / g) * log1p_gz)) / p.scale
    out = np.where(t > 0.0, out, 0.0)
    if g < 0:
        if g > -1.0:
            edge = 0.0
        elif g == -1.0:
            edge = 1.0 / p.scale
        else:
            edge = np.inf
        out = np.where(t == 0.0, edge, out)
    return _finish(out, scalar)


def gev_quantile(p: GevParams, q):
    """Inverse of :func:`gev_cdf` on (0, 1)."""
    qa, scalar = _prepare(q)
    if np.any((qa <= 0.0) | (qa >= 1.0)):
        raise ValueError("quantile level must lie in (0, 1)")
    g = p.gamma
    if abs(g) < GAMMA_ZERO_TOL:
        out = p.loc - p.scale * np.log(-np.log(qa))
    else:
        out = p.loc + (p.scale / g) * np.expm1(-g * np.log(-np.log(qa)))
    return _finish(out, scalar)


def gpd_cdf(p: GpdParams, x):
    """Cumulative distribution of the excess family; 0 for x < 0."""
    xa, scalar = _prepare(x)
    g, s = p.gamma, p.sigma
    if abs(g) < GAMMA_ZERO_TOL:
        out = -np.expm1(-xa / s)
    else:
        t = 1.0 + g * xa / s
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = -np.expm1((-1.0 / g) * np.log1p(g * xa / s))
        out = np.where(t > 0.0, out, 1.0)
    out = np.where(xa < 0.0, 0.0, out)
    return _finish(out, scalar)


def gpd_pdf(p: GpdParams, x):
    """Probability density of the excess family; 0 outside support.

    At the finite endpoint (gamma < 0) the closed-form limit is returned,
    as for :func:`gev_pdf`.
    """
    xa, scalar = _prepare(x)
    g, s = p.gamma, p.sigma
    if abs(g) < GAMMA_ZERO_TOL:
        out = np.exp(-xa / s) / s
    else:
        t = 1.0 + g * xa / s
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.exp(-(1.0 + 1.0 / g) * np.log1p(g * xa / s)) / s
        out = np.where(t > 0.0, out, 0.0)
        if g < 0:
            if g > -1.0:
                edge = 0.0
            elif g == -1.0:
                edge = 1.0 / s
            else:
                edge = np.inf
            out = np.where(t == 0.0, edge, out)
    out = np.where(xa < 0.0, 0.0, out)
    return _finish(out, scalar)


def gpd_quantile(p: GpdParams, q):
    """Inverse of :func:`gpd_cdf` on [0, 1); rejects q outside that range."""
    qa, scalar = _prepare(q)
    if np.any((qa < 0.0) | (qa >= 1.0)):
        raise ValueError("quantile level must lie in [0, 1)")
    g, s = p.gamma, p.sigma
    if abs(g) < GAMMA_ZERO_TOL:
        out = -s * np.log1p(-qa)
    else:
        out = (s / g) * np.expm1(-g * np.log1p(-qa))
    return _finish(out, scalar)


def gpd_sample(p: GpdParams, seed: int, n: int) -> np.ndarray:
    """Draw n excesses by inverse transform of a seeded PCG64 stream.

    Deterministic for a fixed seed; every sampler in this package runs on
    NumPy's PCG64 via ``default_rng``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    return gpd_quantile(p, rng.random(n))
