"""Pipeline orchestrator.

Subcommands wire the library stages over a run directory: ``simulate``
produces a seeded synthetic panel, ``preprocess`` normalizes quotes or a
prebuilt panel, ``modes`` rotates into the correlation eigenbasis,
``sweep`` runs threshold sweeps (optionally on deseasonalized residuals
and with rolling local thresholds) and ``infer-gev`` converts threshold
fits into block-maxima parameters. Every artifact is written atomically
and listed in the run directory's manifest.json with a hash of the
resolved command configuration.

Exit codes: 0 success, 2 input/schema error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import clustering, estimation, modes, nonstationary, preprocess, synthetic
from .distributions import GpdParams, gev_pdf, gev_quantile
from .errors import EvtError, InputError, NumericalError

TAIL_NAMES = {"pos": "positive", "neg": "negative"}

DEFAULT_ALPHAS = "0.01,0.005,0.002,0.001"
QQ_MAX_POINTS = 2000


# ---------------------------------------------------------------------------
# atomic file output and the run manifest
# ---------------------------------------------------------------------------

def _atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: Path, payload) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_csv(path: Path, header: str | None, rows) -> None:
    lines = [] if header is None else [header]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_matrix(path: Path, matrix) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    os.close(fd)
    try:
        preprocess.write_matrix_csv(tmp, matrix)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return repr(float(v))


def _jsonable(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, float):
        return None if math.isnan(v) else v
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return _jsonable(float(v))
    raise TypeError(f"cannot serialize {type(v)}")


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


class RunDir:
    """A run directory with a cumulative manifest of emitted artifacts."""

    def __init__(self, out: str, command: str, config: dict):
        self.root = Path(out)
        self.root.mkdir(parents=True, exist_ok=True)
        self.command = command
        self.config = config
        self.artifacts: list[dict] = []

    def path(self, name: str) -> Path:
        return self.root / name

    def add(self, kind: str, name: str, **meta) -> Path:
        entry = {"kind": kind, "path": name}
        entry.update(meta)
        self.artifacts.append(entry)
        return self.path(name)

    def finish(self) -> None:
        manifest_path = self.root / "manifest.json"
        manifest = {"runs": []}
        if manifest_path.exists():
            with open(manifest_path, "r", encoding="utf-8") as fh:
                manifest = json.load(fh)
        # re-running a command replaces its previous manifest entry
        manifest["runs"] = [r for r in manifest["runs"] if r["command"] != self.command]
        manifest["runs"].append(
            {
                "command": self.command,
                "config": self.config,
                "config_hash": config_hash(self.config),
                "artifacts": sorted(self.artifacts, key=lambda a: a["path"]),
            }
        )
        manifest["runs"].sort(key=lambda r: r["command"])
        write_json(manifest_path, manifest)


def _load_run_matrix(run: Path, stem: str) -> preprocess.ReturnMatrix:
    csv_path = run / f"{stem}.csv"
    meta_path = run / f"{stem}_meta.json"
    if not csv_path.exists():
        raise InputError(f"missing {csv_path}; run the earlier pipeline stage first")
    meta = preprocess.load_meta(meta_path) if meta_path.exists() else None
    return preprocess.read_matrix_csv(csv_path, meta)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> None:
    config = synthetic.SimConfig.from_json(args.config)
    if args.seed is not None:
        config = synthetic.SimConfig(
            n_assets=config.n_assets, t_day=config.t_day, n_days=config.n_days,
            market_loading=config.market_loading, sectors=config.sectors,
            innovation=config.innovation, df=config.df,
            vol_persistence=config.vol_persistence, profile=config.profile,
            seed=args.seed,
        )
    run = RunDir(args.out, "simulate", _sim_config_dict(config))
    matrix, truth = synthetic.simulate_returns(config)
    write_matrix(run.add("returns_matrix", "returns.csv"), matrix)
    write_json(run.add("returns_meta", "returns_meta.json"),
               preprocess.matrix_meta(matrix))
    write_json(run.add("ground_truth", "ground_truth.json"), truth.sidecar())
    run.finish()


def _sim_config_dict(config: synthetic.SimConfig) -> dict:
    return {
        "n_assets": config.n_assets,
        "t_day": config.t_day,
        "n_days": config.n_days,
        "market_loading": config.market_loading,
        "sectors": [{"size": s.size, "loading": s.loading} for s in config.sectors],
        "innovation": config.innovation,
        "df": config.df,
        "vol_persistence": config.vol_persistence,
        "profile": config.profile if isinstance(config.profile, str) else list(config.profile),
        "seed": config.seed,
    }


def cmd_preprocess(args) -> None:
    config = {
        "input": str(args.input),
        "delta_t": args.delta_t,
        "session_seconds": args.session_seconds,
        "open_trim": args.open_trim,
        "close_trim": args.close_trim,
    }
    run = RunDir(args.out, "preprocess", config)
    with open(args.input, "r", encoding="utf-8") as fh:
        first = fh.readline().strip()
    if first == preprocess.QUOTES_HEADER:
        matrix = _preprocess_quotes(args)
    else:
        meta = None
        if args.meta:
            meta = preprocess.load_meta(args.meta)
        else:
            sidecar = Path(args.input).parent / (Path(args.input).stem + "_meta.json")
            if sidecar.exists():
                meta = preprocess.load_meta(sidecar)
        matrix = preprocess.read_matrix_csv(args.input, meta)
    # an already-normalized panel passes through untouched, so a
    # load -> save -> load cycle is bit-identical
    normalized = matrix if matrix.kind == "normalized" else preprocess.normalize(matrix)
    write_matrix(run.add("normalized_matrix", "normalized.csv"), normalized)
    write_json(run.add("returns_meta", "normalized_meta.json"),
               preprocess.matrix_meta(normalized))
    run.finish()


def _preprocess_quotes(args) -> preprocess.ReturnMatrix:
    if not args.session_starts:
        raise InputError("quote input requires --session-starts FILE")
    opens = [int(line) for line in Path(args.session_starts).read_text().split()]
    exclusions = []
    if args.exclude:
        exclusions = [int(line) for line in Path(args.exclude).read_text().split()]
    grid = preprocess.build_grid(
        opens, session_seconds=args.session_seconds,
        open_trim=args.open_trim, close_trim=args.close_trim,
        exclusions=exclusions,
    )
    quotes = preprocess.read_quotes_csv(args.input)
    tickers = sorted(quotes)
    prices = np.empty((len(tickers), grid.total_seconds))
    for i, ticker in enumerate(tickers):
        ts, bid, ask = quotes[ticker]
        prices[i], _ = preprocess.midpoint_series(ts, bid, ask, grid)
    return preprocess.log_returns(prices, grid, args.delta_t, tickers)


def cmd_modes(args) -> None:
    config = {"modes": args.modes, "bins": args.bins,
              "density_bins": args.density_bins, "unscaled": args.unscaled}
    run = RunDir(args.out, "modes", config)
    nm = _load_run_matrix(run.root, "normalized")
    corr = modes.correlation_matrix(nm)
    spectrum = modes.spectral_decompose(corr)
    mode_matrix = modes.rotate_rescale(nm, spectrum)

    write_csv(run.add("eigenvalues", "eigenvalues.csv"), "mode,eigenvalue",
              [(k + 1, v) for k, v in enumerate(spectrum.eigenvalues)])
    header = "ticker," + ",".join(f"mode_{k + 1}" for k in range(spectrum.size))
    rows = [[t] + [repr(float(v)) for v in spectrum.eigenvectors[i]]
            for i, t in enumerate(nm.tickers)]
    _atomic_write(run.add("eigenvectors", "eigenvectors.csv"),
                  header + "\n" + "\n".join(",".join(map(str, r)) for r in rows) + "\n")
    write_matrix(run.add("modes_matrix", "modes.csv"), mode_matrix)
    write_json(run.add("returns_meta", "modes_meta.json"),
               preprocess.matrix_meta(mode_matrix))

    sector_map = {t: "unassigned" for t in nm.tickers}
    if args.sectors:
        with open(args.sectors, "r", encoding="utf-8") as fh:
            sector_map.update(json.load(fh))
    report = modes.eigenvector_report(spectrum, sector_map, nm.tickers,
                                      top_k=min(args.modes, spectrum.size))
    write_json(run.add("eigenvector_report", "eigenvector_report.json"), report)

    edges, density = modes.eigenvalue_density(spectrum, n_bins=args.bins)
    write_csv(run.add("eigenvalue_density", "eigenvalue_density.csv"),
              "bin_left,bin_right,density",
              zip(edges[:-1], edges[1:], density))

    _write_mode_density(run, mode_matrix, args.modes, args.density_bins,
                        "mode_density.csv", "mode_density")
    if args.unscaled:
        unscaled = modes.rotate_rescale(nm, spectrum, rescale=False)
        write_matrix(run.add("modes_unscaled_matrix", "modes_unscaled.csv"), unscaled)
        _write_mode_density(run, unscaled, args.modes, args.density_bins,
                            "mode_density_unscaled.csv", "mode_density_unscaled")
    run.finish()


def _write_mode_density(run: RunDir, matrix, n_modes: int, bins: int,
                        name: str, kind: str) -> None:
    rows = []
    for k in range(min(n_modes, matrix.n_series)):
        series = matrix.values[k]
        density, edges = np.histogram(series, bins=bins, density=True)
        centers = 0.5 * (edges[:-1] + edges[1:])
        rows.extend((k + 1, c, d) for c, d in zip(centers, density))
    write_csv(run.add(kind, name), "mode,bin_center,density", rows)


def _sweep_one(series, alphas, tail_name, args):
    """One (mode, tail) sweep; returns records plus per-alpha QQ data."""
    tail = TAIL_NAMES[tail_name]
    records, qq_data = [], {}
    if args.rolling:
        signed = -series if tail == "negative" else series
        for alpha in sorted(alphas, reverse=True):
            thr = nonstationary.rolling_quantile(signed, window=args.window,
                                                 q=1.0 - alpha)
            sample = nonstationary.dynamic_exceedances(signed, thr)
            records.append(_record_from_sample(sample, alpha, tail_name, qq_data))
    else:
        for entry in estimation.threshold_sweep(series, alphas, tail):
            rec = {
                "tail": tail_name, "alpha": entry.alpha,
                "threshold": entry.threshold, "n": entry.n,
                "theta": entry.theta, "error": entry.error,
                "gamma": None, "se_gamma": None, "sigma": None,
                "se_sigma": None, "nrmsd": None,
            }
            if entry.fit is not None:
                rec.update(_fit_fields(entry.fit))
                sample = estimation.extract_excesses(series, entry.threshold, tail)
                qq_data[entry.alpha] = estimation.qq_points(sample, entry.fit)
            records.append(rec)
    return records, qq_data


def _record_from_sample(sample, alpha, tail_name, qq_data) -> dict:
    rec = {
        "tail": tail_name, "alpha": alpha, "threshold": None, "n": sample.n,
        "theta": None, "error": None, "gamma": None, "se_gamma": None,
        "sigma": None, "se_sigma": None, "nrmsd": None,
    }
    try:
        rec["theta"] = clustering.ferro_segers(
            clustering.interexceedance(sample.source_times))
    except NumericalError as exc:
        rec["error"] = type(exc).__name__
    try:
        fit = estimation.fit_gpd_mle(sample)
        rec.update(_fit_fields(fit))
        qq_data[alpha] = estimation.qq_points(sample, fit)
    except NumericalError as exc:
        rec["error"] = type(exc).__name__
    return rec


def _fit_fields(fit) -> dict:
    return {
        "gamma": fit.params.gamma, "se_gamma": fit.se_gamma,
        "sigma": fit.params.sigma, "se_sigma": fit.se_sigma,
        "nrmsd": fit.nrmsd,
    }


def cmd_sweep(args) -> None:
    alphas = _parse_floats(args.alpha)
    tails = _parse_tails(args.tails)
    config = {
        "alpha": alphas, "tails": tails, "modes": args.modes,
        "residuals": args.residuals, "rolling": args.rolling,
        "window": args.window, "quantile": args.quantile,
        "acf_lags": args.acf_lags,
    }
    # fixed and rolling sweeps coexist in the manifest as separate runs
    run = RunDir(args.out, "sweep-rolling" if args.rolling else "sweep", config)
    matrix = _load_run_matrix(run.root, "modes")
    n_modes = min(args.modes, matrix.n_series)

    series_by_mode = {}
    for k in range(n_modes):
        series = matrix.values[k]
        if args.residuals:
            profile = nonstationary.intraday_profile(series, matrix.grid,
                                                     mode=matrix.tickers[k])
            write_csv(run.add("volatility_profile",
                              f"volatility_profile_mode{k + 1}.csv", mode=k + 1),
                      None, ((v,) for v in profile.values))
            series = nonstationary.residuals(series, profile)
        series_by_mode[k] = series

    tasks = [(k, tail) for k in range(n_modes) for tail in tails]
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(
            lambda kt: _sweep_one(series_by_mode[kt[0]], alphas, kt[1], args), tasks))

    records = []
    for (k, tail), (recs, qq_data) in zip(tasks, results):
        for rec in recs:
            rec["mode"] = k + 1
            records.append(rec)
        for alpha, pairs in qq_data.items():
            suffix = "_rolling" if args.rolling else ""
            name = f"qq_mode{k + 1}_{tail}_alpha{_alpha_tag(alpha)}{suffix}.csv"
            write_csv(run.add("qq", name, mode=k + 1, tail=tail, alpha=alpha),
                      "empirical,theoretical", _thin(pairs, QQ_MAX_POINTS))

    records.sort(key=lambda r: (r["mode"], r["tail"], -r["alpha"]))
    report_name = "fit_report_rolling.json" if args.rolling else "fit_report.json"
    payload = {
        "kind": "rolling" if args.rolling else "fixed",
        "window": args.window if args.rolling else None,
        "residuals": bool(args.residuals),
        "records": [{k: _jsonable(v) for k, v in r.items()} for r in records],
    }
    write_json(run.add("fit_report", report_name), payload)

    for tail in tails:
        rows = [(r["alpha"], _nan_if_none(r["theta"]), r["n"])
                for r in records if r["tail"] == tail and r["mode"] == 1]
        suffix = "_rolling" if args.rolling else ""
        write_csv(run.add("theta_table", f"theta_{tail}{suffix}.csv", tail=tail),
                  "alpha,theta,n_exceedances", rows)

    acf_name = "acf_residuals.csv" if args.residuals else "acf.csv"
    lags = np.arange(1, args.acf_lags + 1)
    cols = [lags]
    for k in range(n_modes):
        cols.append(clustering.autocorrelation(np.abs(series_by_mode[k]), args.acf_lags))
    write_csv(run.add("acf", acf_name),
              "lag," + ",".join(f"mode_{k + 1}" for k in range(n_modes)),
              zip(*cols))

    if args.rolling:
        _write_rolling_overlays(run, series_by_mode, args)
    run.finish()


def _write_rolling_overlays(run: RunDir, series_by_mode, args) -> None:
    for k, series in series_by_mode.items():
        thr = nonstationary.rolling_quantile(series, window=args.window,
                                             q=args.quantile)
        write_csv(run.add("rolling_threshold", f"rolling_threshold_mode{k + 1}.csv",
                          mode=k + 1),
                  "t,u", _thin_rows(np.column_stack([np.arange(series.size), thr.u]),
                                    args.overlay_points))
        fixed_u = estimation.nearest_rank_quantile(series, args.quantile)
        overlay = np.column_stack([
            np.arange(series.size), series, thr.u, np.full(series.size, fixed_u),
        ])
        write_csv(run.add("rolling_overlay", f"rolling_overlay_mode{k + 1}.csv",
                          mode=k + 1),
                  "t,value,u_rolling,u_fixed", _thin_rows(overlay, args.overlay_points))


def cmd_infer_gev(args) -> None:
    tails = _parse_tails(args.tails)
    config = {
        "alpha": args.alpha, "block_len": args.block_len, "tails": tails,
        "report": args.report, "nonstationary": args.nonstationary,
        "window": args.window, "quantile": args.quantile, "stride": args.stride,
    }
    run = RunDir(args.out, "infer-gev", config)
    matrix = _load_run_matrix(run.root, "modes")
    report_path = run.path(args.report)
    if not report_path.exists():
        raise InputError(f"missing {report_path}; run 'sweep' first")
    with open(report_path, "r", encoding="utf-8") as fh:
        report = json.load(fh)
    if report["kind"] != "fixed":
        raise InputError(
            "the parameter table needs a fixed-threshold report; rolling "
            "estimates feed the --nonstationary surface instead"
        )
    block_len = args.block_len or matrix.day_len
    total = matrix.n_samples

    selected = _select_records(report["records"], tails, args.alpha)
    gev_records, density_rows, blockmax_rows = [], [], []
    for rec in selected:
        k = rec["mode"]
        series = matrix.values[k - 1]
        fit = estimation.GpdFit(
            params=GpdParams(rec["gamma"], rec["sigma"]),
            se_gamma=rec["se_gamma"], se_sigma=rec["se_sigma"], se_valid=True,
            n=rec["n"], threshold=rec["threshold"] if rec["threshold"] is not None else math.nan,
            nrmsd=rec["nrmsd"], log_likelihood=0.0,
        )
        zeta = rec["n"] / total
        gev = estimation.infer_gev(fit, zeta, block_len)
        gev_records.append({
            "mode": k, "tail": rec["tail"], "alpha": rec["alpha"],
            "gamma": gev.gamma, "a": gev.scale, "b": gev.loc,
            "block_len": block_len, "zeta": zeta,
        })
        qs = np.linspace(0.001, 0.999, args.density_points)
        xs = gev_quantile(gev, qs)
        density_rows.extend((k, rec["tail"], x, d)
                            for x, d in zip(xs, gev_pdf(gev, xs)))
        blockmax_rows.extend(_block_maxima_rows(series, rec["tail"], k, block_len))

    write_json(run.add("gev_table", "gev_table.json"), {"records": gev_records})
    write_csv(run.add("gev_density", "gev_density.csv"),
              "mode,tail,x,density", density_rows)
    write_csv(run.add("blockmax_density", "blockmax_density.csv"),
              "mode,tail,bin_center,density", blockmax_rows)

    if args.nonstationary:
        _write_nonstationary_surfaces(run, matrix, gev_records, args)
    run.finish()


def _select_records(records, tails, alpha):
    """Per (mode, tail): the requested alpha, or the best-NRMSD fit."""
    chosen = {}
    for rec in records:
        if rec["gamma"] is None or rec["tail"] not in tails:
            continue
        key = (rec["mode"], rec["tail"])
        if alpha is not None:
            if rec["alpha"] == alpha:
                chosen[key] = rec
        elif key not in chosen or rec["nrmsd"] < chosen[key]["nrmsd"]:
            chosen[key] = rec
    if not chosen:
        raise InputError("no usable fit records match the request")
    return [chosen[k] for k in sorted(chosen)]


def _block_maxima_rows(series, tail_name, mode_idx, block_len):
    signed = -series if tail_name == "neg" else series
    n_blocks = signed.size // block_len
    if n_blocks < 2:
        raise InputError("series too short for the requested block length")
    maxima = signed[: n_blocks * block_len].reshape(n_blocks, block_len).max(axis=1)
    density, edges = np.histogram(maxima, bins=min(30, max(5, n_blocks // 4)),
                                  density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return [(mode_idx, tail_name, c, d) for c, d in zip(centers, density)]


def _write_nonstationary_surfaces(run: RunDir, matrix, gev_records, args) -> None:
    alpha = 1.0 - args.quantile
    for rec in gev_records:
        k, tail_name = rec["mode"], rec["tail"]
        series = matrix.values[k - 1]
        signed = -series if tail_name == "neg" else series
        thr = nonstationary.rolling_quantile(signed, window=args.window,
                                             q=args.quantile)
        sample = nonstationary.dynamic_exceedances(signed, thr)
        fit = estimation.fit_gpd_mle(sample)
        ns = nonstationary.nonstationary_gev(fit, thr, sample.zeta_u,
                                             rec["block_len"])
        ts = np.arange(thr.warmup, signed.size, args.stride)
        b_lo, b_hi = float(ns.loc[ts].min()), float(ns.loc[ts].max())
        xs = np.linspace(b_lo - 2.0 * ns.scale, b_hi + 6.0 * ns.scale, 81)
        rows = []
        for t in ts:
            dens = ns.density(int(t), xs)
            rows.extend((int(t), x, d) for x, d in zip(xs, dens))
        write_csv(run.add("nonstationary_surface",
                          f"nonstationary_surface_mode{k}_{tail_name}.csv",
                          mode=k, tail=tail_name),
                  "t,x,density", rows)


# ---------------------------------------------------------------------------
# small helpers and the entry point
# ---------------------------------------------------------------------------

def _parse_floats(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v]
    except ValueError as exc:
        raise InputError(f"bad float list {text!r}") from exc
    if not values or any(not 0.0 < v < 1.0 for v in values):
        raise InputError("quantile levels must lie in (0, 1)")
    return sorted(set(values), reverse=True)


def _parse_tails(text: str) -> list[str]:
    tails = [t.strip() for t in text.split(",") if t.strip()]
    for t in tails:
        if t not in TAIL_NAMES:
            raise InputError(f"tails must be pos and/or neg, got {t!r}")
    return sorted(set(tails), reverse=True)  # pos before neg


def _alpha_tag(alpha: float) -> str:
    return f"{alpha:g}".replace(".", "p")


def _thin(pairs: np.ndarray, max_points: int) -> list:
    if pairs.shape[0] <= max_points:
        return [tuple(row) for row in pairs]
    idx = np.unique(np.linspace(0, pairs.shape[0] - 1, max_points).astype(int))
    return [tuple(row) for row in pairs[idx]]


def _thin_rows(rows: np.ndarray, max_points: int) -> list:
    return _thin(rows, max_points)


def _nan_if_none(v):
    return math.nan if v is None else v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evtmodes",
        description="Extreme value analysis of correlated return panels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a seeded synthetic market")
    p.add_argument("config", help="simulation config JSON")
    p.add_argument("--out", required=True, help="run directory")
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("preprocess", help="normalize quotes or a return panel")
    p.add_argument("input", help="quotes CSV or ticker-labelled return matrix CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--delta-t", type=int, default=1)
    p.add_argument("--meta", default=None, help="sidecar JSON for a matrix input")
    p.add_argument("--session-starts", default=None,
                   help="file of session-open epoch seconds (quote input)")
    p.add_argument("--session-seconds", type=int, default=preprocess.DEFAULT_SESSION_SECONDS)
    p.add_argument("--open-trim", type=int, default=preprocess.DEFAULT_OPEN_TRIM)
    p.add_argument("--close-trim", type=int, default=preprocess.DEFAULT_CLOSE_TRIM)
    p.add_argument("--exclude", default=None, help="file of excluded session opens")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("modes", help="correlation spectrum and whitened modes")
    p.add_argument("--out", required=True)
    p.add_argument("--modes", type=int, default=5, help="modes in reports")
    p.add_argument("--bins", type=int, default=50, help="eigenvalue histogram bins")
    p.add_argument("--density-bins", type=int, default=200)
    p.add_argument("--sectors", default=None, help="ticker->sector JSON map")
    p.add_argument("--unscaled", action="store_true",
                   help="also emit the rotation without variance rescaling")
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("sweep", help="threshold sweeps over tail quantiles")
    p.add_argument("--out", required=True)
    p.add_argument("--alpha", default=DEFAULT_ALPHAS, help="comma-separated tail quantiles")
    p.add_argument("--tails", default="pos,neg")
    p.add_argument("--modes", type=int, default=5)
    p.add_argument("--residuals", action="store_true",
                   help="deseasonalize by the intraday volatility profile first")
    p.add_argument("--rolling", action="store_true",
                   help="rolling local thresholds instead of fixed ones")
    p.add_argument("--window", type=int, default=nonstationary.DEFAULT_WINDOW)
    p.add_argument("--quantile", type=float, default=0.999,
                   help="level for the rolling-threshold overlay artifact")
    p.add_argument("--acf-lags", type=int, default=100)
    p.add_argument("--overlay-points", type=int, default=2000)
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("infer-gev", help="block-maxima parameters from threshold fits")
    p.add_argument("--out", required=True)
    p.add_argument("--report", default="fit_report.json")
    p.add_argument("--alpha", type=float, default=None,
                   help="tail quantile of the fit to use (default: best NRMSD)")
    p.add_argument("--block-len", type=int, default=None,
                   help="block length (default: the trading-day length)")
    p.add_argument("--tails", default="pos")
    p.add_argument("--density-points", type=int, default=241)
    p.add_argument("--nonstationary", action="store_true",
                   help="emit the time-dependent density surface")
    p.add_argument("--window", type=int, default=nonstationary.DEFAULT_WINDOW)
    p.add_argument("--quantile", type=float, default=0.999)
    p.add_argument("--stride", type=int, default=200)
    p.set_defaults(func=cmd_infer_gev)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    warnings.filterwarnings("ignore",
                            message="The line search algorithm did not converge")
    try:
        args.func(args)
    except EvtError as exc:
        code = 2 if isinstance(exc, InputError) else 3
        payload = {"error": type(exc).__name__, "message": str(exc),
                   "command": args.command}
        out = getattr(args, "out", None)
        if out:
            try:
                write_json(Path(out) / "error.json", payload)
            except OSError:
                pass
        print(f"error: {payload['error']}: {payload['message']}", file=sys.stderr)
        return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
