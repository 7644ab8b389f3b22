"""Quote ingestion, midpoints, log returns and normalization.

A trading grid of retained 1-second samples is built from session opens
by trimming the volatile opening and pre-close phases. Midpoint prices
are forward-filled onto the grid, log returns are taken strictly within
days, and rows are standardized with the population variance so the
correlation matrix downstream has an exact unit diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import pandas as pd

from .errors import (
    InputError,
    MissingHistory,
    NonpositivePrice,
    ZeroVariance,
)

__all__ = [
    "DEFAULT_SESSION_SECONDS",
    "DEFAULT_OPEN_TRIM",
    "DEFAULT_CLOSE_TRIM",
    "QuoteRecord",
    "QuoteStats",
    "TradingGrid",
    "ReturnMatrix",
    "build_grid",
    "midpoint_series",
    "log_returns",
    "normalize",
    "read_quotes_csv",
    "read_matrix_csv",
    "write_matrix_csv",
    "matrix_meta",
    "load_meta",
]

QUOTES_HEADER = "timestamp_ms,ticker,bid,ask"

# NYSE-style defaults: 6.5 h session sampled at 1 s, first ten minutes and
# last fifteen minutes discarded.
DEFAULT_SESSION_SECONDS = 23400
DEFAULT_OPEN_TRIM = 600
DEFAULT_CLOSE_TRIM = 900


@dataclass(frozen=True)
class QuoteRecord:
    """One best bid/ask observation at millisecond resolution."""

    timestamp_ms: int
    ticker: str
    bid: float
    ask: float

    @property
    def crossed(self) -> bool:
        return self.ask < self.bid


class QuoteStats(NamedTuple):
    """Counters of records skipped during midpoint construction."""

    n_crossed: int
    n_nonpositive: int


@dataclass(frozen=True)
class TradingGrid:
    """Retained 1-second sampling grid: uniform days, non-overlapping."""

    day_starts: np.ndarray
    seconds_per_day: int

    def __post_init__(self):
        starts = np.asarray(self.day_starts, dtype=np.int64)
        object.__setattr__(self, "day_starts", starts)
        if starts.size == 0:
            raise InputError("grid needs at least one day")
        if self.seconds_per_day < 1:
            raise InputError("seconds_per_day must be >= 1")
        if starts.size > 1 and np.diff(starts).min() < self.seconds_per_day:
            raise InputError("trading days overlap")

    @property
    def n_days(self) -> int:
        return int(self.day_starts.size)

    @property
    def total_seconds(self) -> int:
        return self.n_days * self.seconds_per_day

    def all_seconds(self) -> np.ndarray:
        """Epoch second of every grid sample, day by day."""
        offsets = np.arange(self.seconds_per_day, dtype=np.int64)
        return (self.day_starts[:, None] + offsets[None, :]).ravel()

    @classmethod
    def contiguous(cls, n_days: int, seconds_per_day: int) -> "TradingGrid":
        """Synthetic grid with back-to-back days starting at epoch 0."""
        starts = np.arange(n_days, dtype=np.int64) * seconds_per_day
        return cls(day_starts=starts, seconds_per_day=seconds_per_day)


@dataclass
class ReturnMatrix:
    """K x T return panel with ticker labels and trading-day boundaries."""

    values: np.ndarray
    tickers: list[str]
    grid: TradingGrid
    delta_t: int = 1
    kind: str = "raw"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise InputError("values must be a K x T matrix")
        if len(self.tickers) != self.values.shape[0]:
            raise InputError("one ticker per row required")
        if self.values.shape[1] % self.grid.n_days != 0:
            raise InputError("columns must divide evenly into trading days")

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]

    @property
    def day_len(self) -> int:
        """Columns per trading day."""
        return self.values.shape[1] // self.grid.n_days


def build_grid(day_opens, session_seconds: int = DEFAULT_SESSION_SECONDS,
               open_trim: int = DEFAULT_OPEN_TRIM,
               close_trim: int = DEFAULT_CLOSE_TRIM,
               exclusions=()) -> TradingGrid:
    """Per-day second grid covering the retained part of each session.

    ``day_opens`` are the epoch seconds of each session open; days listed
    in ``exclusions`` (e.g. early closes) are dropped entirely. A positive
    ``open_trim`` discards the first ``open_trim`` seconds plus the
    boundary second, whose forward-filled quote state was formed entirely
    inside the discarded opening interval; a positive ``close_trim``
    discards exactly the final ``close_trim`` seconds. With NYSE defaults
    each day retains 23400 - 900 - 600 - 1 = 21899 samples.
    """
    if open_trim < 0 or close_trim < 0:
        raise InputError("trims must be >= 0")
    excluded = {int(t) for t in exclusions}
    opens = sorted(int(t) for t in day_opens if int(t) not in excluded)
    if not opens:
        raise InputError("no trading days remain after exclusions")
    start_off = open_trim + 1 if open_trim > 0 else 0
    seconds_per_day = session_seconds - close_trim - start_off
    if seconds_per_day < 1:
        raise InputError("trims leave no retained session")
    starts = np.asarray(opens, dtype=np.int64) + start_off
    return TradingGrid(day_starts=starts, seconds_per_day=seconds_per_day)


def midpoint_series(timestamps_ms, bids, asks, grid: TradingGrid) -> tuple[np.ndarray, QuoteStats]:
    """Forward-filled midpoints of one ticker on the grid.

    For each grid second the midpoint of the last usable quote at or
    before that second is used; seconds without a quote inherit the last
    existing midpoint, across day boundaries. Crossed quotes (ask < bid)
    and nonpositive quotes are skipped and counted. Raises
    ``MissingHistory`` when no quote precedes the first grid second.
    """
    ts = np.asarray(timestamps_ms, dtype=np.int64)
    bid = np.asarray(bids, dtype=float)
    ask = np.asarray(asks, dtype=float)
    if not (ts.size == bid.size == ask.size):
        raise InputError("quote columns must have equal length")
    if ts.size > 1 and np.diff(ts).min() < 0:
        raise InputError("quotes must be time-sorted")
    positive = bid > 0.0
    uncrossed = ask >= bid
    keep = positive & uncrossed
    stats = QuoteStats(
        n_crossed=int(np.count_nonzero(positive & ~uncrossed)),
        n_nonpositive=int(np.count_nonzero(~positive)),
    )
    ts, bid, ask = ts[keep], bid[keep], ask[keep]
    if ts.size == 0:
        raise MissingHistory("no usable quotes for ticker")
    mids = 0.5 * (ask + bid)
    seconds = grid.all_seconds()
    # a quote belongs to second t when its timestamp is < (t+1)*1000
    idx = np.searchsorted(ts, (seconds + 1) * 1000, side="left") - 1
    if idx[0] < 0:
        raise MissingHistory("no quote at or before the first grid second")
    return mids[idx], stats


def log_returns(prices: np.ndarray, grid: TradingGrid, delta_t: int = 1,
                tickers=None) -> ReturnMatrix:
    """Log returns over ``delta_t`` seconds, computed within days only.

    ``prices`` is (K, total_seconds) on the grid; overnight price jumps
    never produce a return, so each day yields seconds_per_day - delta_t
    columns.
    """
    p = np.atleast_2d(np.asarray(prices, dtype=float))
    if delta_t < 1:
        raise InputError("delta_t must be >= 1")
    if delta_t >= grid.seconds_per_day:
        raise InputError("delta_t must be smaller than the trading day")
    if p.shape[1] != grid.total_seconds:
        raise InputError("price columns must match the grid")
    if np.min(p) <= 0.0:
        raise NonpositivePrice("prices must be strictly positive")
    k = p.shape[0]
    if tickers is None:
        tickers = [f"series_{i + 1}" for i in range(k)]
    logp = np.log(p).reshape(k, grid.n_days, grid.seconds_per_day)
    ret = logp[:, :, delta_t:] - logp[:, :, :-delta_t]
    return ReturnMatrix(
        values=ret.reshape(k, -1),
        tickers=list(tickers),
        grid=grid,
        delta_t=delta_t,
        kind="raw",
    )


def normalize(raw: ReturnMatrix) -> ReturnMatrix:
    """Standardize each row to zero mean and unit standard deviation.

    Uses the population (1/T) variance so the correlation matrix of the
    result has an exact unit diagonal. Constant rows are rejected with
    their ticker names.
    """
    v = raw.values
    mu = v.mean(axis=1, keepdims=True)
    sd = v.std(axis=1, keepdims=True)
    dead = np.nonzero(sd.ravel() == 0.0)[0]
    if dead.size:
        names = ", ".join(raw.tickers[i] for i in dead)
        raise ZeroVariance(f"constant return rows: {names}")
    return ReturnMatrix(
        values=(v - mu) / sd,
        tickers=list(raw.tickers),
        grid=raw.grid,
        delta_t=raw.delta_t,
        kind="normalized",
    )


def read_quotes_csv(path) -> dict[str, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Quote file -> per-ticker (timestamps_ms, bids, asks), time-sorted."""
    df = pd.read_csv(path)
    if list(df.columns) != QUOTES_HEADER.split(","):
        raise InputError(f"quotes CSV must have header '{QUOTES_HEADER}'")
    out = {}
    for ticker, sub in df.groupby("ticker", sort=True):
        sub = sub.sort_values("timestamp_ms", kind="stable")
        out[str(ticker)] = (
            sub["timestamp_ms"].to_numpy(np.int64),
            sub["bid"].to_numpy(float),
            sub["ask"].to_numpy(float),
        )
    return out


def write_matrix_csv(path, matrix: ReturnMatrix) -> None:
    """Write a panel as ticker-labelled CSV rows with round-trip floats."""
    with open(path, "w", encoding="utf-8") as fh:
        for ticker, row in zip(matrix.tickers, matrix.values):
            fh.write(ticker)
            fh.write(",")
            # repr of the builtin float is the shortest exact round-trip form
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


def matrix_meta(matrix: ReturnMatrix) -> dict:
    """Sidecar payload describing a panel CSV."""
    return {
        "tickers": list(matrix.tickers),
        "T_day": matrix.day_len,
        "N_days": matrix.grid.n_days,
        "delta_t": matrix.delta_t,
        "kind": matrix.kind,
    }


def read_matrix_csv(path, meta: dict | None = None) -> ReturnMatrix:
    """Read a ticker-labelled panel CSV, optionally with its sidecar.

    Without a sidecar the panel is treated as a single trading day of raw
    returns at delta_t = 1.
    """
    df = pd.read_csv(path, header=None, index_col=0, float_precision="round_trip")
    values = df.to_numpy(float)
    tickers = [str(t) for t in df.index]
    if meta is None:
        grid = TradingGrid.contiguous(1, values.shape[1])
        return ReturnMatrix(values=values, tickers=tickers, grid=grid,
                            delta_t=1, kind="raw")
    n_days = int(meta["N_days"])
    if values.shape[1] % n_days != 0:
        raise InputError("matrix columns do not divide into N_days")
    day_len = values.shape[1] // n_days
    if "T_day" in meta and int(meta["T_day"]) != day_len:
        raise InputError("sidecar T_day does not match the matrix shape")
    grid = TradingGrid.contiguous(n_days, day_len)
    if meta.get("tickers") and list(meta["tickers"]) != tickers:
        raise InputError("sidecar tickers do not match the matrix rows")
    return ReturnMatrix(
        values=values,
        tickers=tickers,
        grid=grid,
        delta_t=int(meta.get("delta_t", 1)),
        kind=str(meta.get("kind", "raw")),
    )


def load_meta(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
