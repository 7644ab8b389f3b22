"""Seeded synthetic market generator.

Correlated heavy-tailed returns with a market factor, optional sector
factors, volatility clustering via an AR(1) log-volatility state shared
across assets (so the collective modes inherit the clustering), and a
multiplicative intraday seasonality profile. Every estimator in the
package has its ground truth injected here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .clustering import sample_interexceedance
from .errors import InputError, InvalidLoadings
from .preprocess import ReturnMatrix, TradingGrid

__all__ = [
    "SectorSpec",
    "SimConfig",
    "GroundTruth",
    "named_profile",
    "simulate_returns",
    "simulate_cluster_process",
]

# Stationary standard deviation of the log-volatility state.
LOGVOL_STD = 0.5

PROFILE_NAMES = ("flat", "u_shape", "u_shape_with_spikes")


@dataclass(frozen=True)
class SectorSpec:
    """A sector factor: number of member assets and their loading."""

    size: int
    loading: float


@dataclass(frozen=True)
class SimConfig:
    """Generator configuration; all randomness flows from ``seed``."""

    n_assets: int
    t_day: int
    n_days: int
    market_loading: float
    sectors: tuple[SectorSpec, ...] = ()
    innovation: str = "gaussian"
    df: float | None = None
    vol_persistence: float = 0.0
    profile: str | tuple[float, ...] = "flat"
    seed: int = 0

    def __post_init__(self):
        if self.n_assets < 1 or self.t_day < 1 or self.n_days < 1:
            raise InputError("n_assets, t_day and n_days must be >= 1")
        if not 0.0 < self.market_loading < 1.0:
            raise InvalidLoadings("market loading must lie in (0, 1)")
        if sum(s.size for s in self.sectors) > self.n_assets:
            raise InvalidLoadings("sector sizes exceed the asset count")
        for s in self.sectors:
            if s.size < 1:
                raise InvalidLoadings("sector size must be >= 1")
            if not 0.0 <= s.loading < 1.0:
                raise InvalidLoadings("sector loading must lie in [0, 1)")
            if self.market_loading**2 + s.loading**2 >= 1.0:
                raise InvalidLoadings(
                    "market and sector loadings leave no idiosyncratic variance"
                )
        if self.innovation not in ("gaussian", "student_t"):
            raise InputError(f"unknown innovation family {self.innovation!r}")
        if self.innovation == "student_t" and (self.df is None or self.df <= 2.0):
            raise InputError("student_t innovations need df > 2")
        if not 0.0 <= self.vol_persistence < 1.0:
            raise InputError("vol_persistence must lie in [0, 1)")
        if isinstance(self.profile, str):
            if self.profile not in PROFILE_NAMES:
                raise InputError(f"unknown profile {self.profile!r}")
        else:
            object.__setattr__(self, "profile", tuple(float(v) for v in self.profile))
            if len(self.profile) != self.t_day:
                raise InputError("explicit profile must have length t_day")
            if min(self.profile) <= 0.0:
                raise InputError("profile values must be positive")

    @classmethod
    def from_json(cls, path) -> "SimConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        sectors = tuple(SectorSpec(int(s["size"]), float(s["loading"]))
                        for s in raw.get("sectors", ()))
        profile = raw.get("profile", "flat")
        if not isinstance(profile, str):
            profile = tuple(float(v) for v in profile)
        return cls(
            n_assets=int(raw["n_assets"]),
            t_day=int(raw["t_day"]),
            n_days=int(raw["n_days"]),
            market_loading=float(raw["market_loading"]),
            sectors=sectors,
            innovation=str(raw.get("innovation", "gaussian")),
            df=float(raw["df"]) if raw.get("df") is not None else None,
            vol_persistence=float(raw.get("vol_persistence", 0.0)),
            profile=profile,
            seed=int(raw.get("seed", 0)),
        )


@dataclass
class GroundTruth:
    """Injected quantities for assertions against pipeline estimates."""

    market_loading: float
    sector_of: list[int]
    sector_loadings: list[float]
    idio_loadings: np.ndarray
    profile: np.ndarray
    factors: np.ndarray
    vol_path: np.ndarray
    seeds: dict = field(default_factory=dict)

    def sidecar(self) -> dict:
        """JSON payload: loadings, sub-stream seeds and the profile."""
        return {
            "market_loading": self.market_loading,
            "sector_of": list(self.sector_of),
            "sector_loadings": list(self.sector_loadings),
            "idio_loadings": [float(v) for v in self.idio_loadings],
            "profile": [float(v) for v in self.profile],
            "seeds": self.seeds,
        }


def named_profile(name: str, t_day: int) -> np.ndarray:
    """Built-in intraday seasonality shapes, mean approximately one.

    ``u_shape`` is a smile raised at open and close;
    ``u_shape_with_spikes`` adds sharp one-second bursts at seven evenly
    spaced intraday times, mimicking recurring rebalancing activity.
    """
    x = (np.arange(t_day) + 0.5) / t_day
    if name == "flat":
        return np.ones(t_day)
    base = 0.7 + 0.9 * (2.0 * x - 1.0) ** 2
    if name == "u_shape":
        return base
    if name == "u_shape_with_spikes":
        step = max(1, t_day // 8)
        idx = np.arange(step, t_day, step)[:7]
        base[idx] *= 3.0
        return base
    raise InputError(f"unknown profile {name!r}")


def _draw(rng: np.random.Generator, config: SimConfig, size) -> np.ndarray:
    if config.innovation == "gaussian":
        return rng.standard_normal(size)
    # standardized to unit variance so the loading algebra is unchanged
    return rng.standard_t(config.df, size) / np.sqrt(config.df / (config.df - 2.0))


def simulate_returns(config: SimConfig) -> tuple[ReturnMatrix, GroundTruth]:
    """Generate the raw return panel plus its ground truth.

    Asset k at time t is profile(t_intra) * vol(t) * (market term +
    sector term + idiosyncratic term) with unit-variance inner sum.
    Deterministic per seed; identical configs give bit-identical panels.
    Memory grows as n_assets * t_day * n_days.
    """
    k, t_total = config.n_assets, config.t_day * config.n_days
    root = np.random.SeedSequence(config.seed)
    ss_factors, ss_vol, ss_idio = root.spawn(3)
    idio_children = ss_idio.spawn(k)

    n_factors = 1 + len(config.sectors)
    factors = _draw(np.random.default_rng(ss_factors), config, (n_factors, t_total))

    phi = config.vol_persistence
    rng_vol = np.random.default_rng(ss_vol)
    eps = rng_vol.standard_normal(t_total)
    innov = LOGVOL_STD * np.sqrt(1.0 - phi**2) * eps
    innov[0] = LOGVOL_STD * eps[0]  # stationary start
    logvol = lfilter([1.0], [1.0, -phi], innov)
    vol = np.exp(logvol)

    sector_of = np.full(k, -1, dtype=int)
    pos = 0
    for s_idx, spec in enumerate(config.sectors):
        sector_of[pos : pos + spec.size] = s_idx
        pos += spec.size
    sector_loadings = np.array([s.loading for s in config.sectors])
    beta_s = np.zeros(k)
    if config.sectors:
        in_sector = sector_of >= 0
        beta_s[in_sector] = sector_loadings[sector_of[in_sector]]
    beta_m = config.market_loading
    beta_i = np.sqrt(1.0 - beta_m**2 - beta_s**2)

    if isinstance(config.profile, str):
        profile = named_profile(config.profile, config.t_day)
    else:
        profile = np.asarray(config.profile, dtype=float)
    season = np.tile(profile, config.n_days)

    values = np.empty((k, t_total))
    for a in range(k):
        inner = beta_m * factors[0]
        if sector_of[a] >= 0:
            inner = inner + beta_s[a] * factors[1 + sector_of[a]]
        idio = _draw(np.random.default_rng(idio_children[a]), config, t_total)
        values[a] = season * vol * (inner + beta_i[a] * idio)

    grid = TradingGrid.contiguous(config.n_days, config.t_day)
    matrix = ReturnMatrix(
        values=values,
        tickers=[f"asset_{a + 1}" for a in range(k)],
        grid=grid,
        delta_t=1,
        kind="raw",
    )
    truth = GroundTruth(
        market_loading=beta_m,
        sector_of=[int(v) for v in sector_of],
        sector_loadings=[float(v) for v in sector_loadings],
        idio_loadings=beta_i,
        profile=profile,
        factors=factors,
        vol_path=vol,
        seeds={
            "root": config.seed,
            "factors_spawn_key": [int(v) for v in ss_factors.spawn_key],
            "vol_spawn_key": [int(v) for v in ss_vol.spawn_key],
            "idio_spawn_key": [int(v) for v in ss_idio.spawn_key],
        },
    )
    return matrix, truth


def simulate_cluster_process(theta: float, zeta_u: float, n: int, seed: int) -> np.ndarray:
    """Exceedance times from the limiting waiting-time mixture."""
    return sample_interexceedance(theta, zeta_u, seed, n)
