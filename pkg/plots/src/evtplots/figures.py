"""Figure builders: one function per figure kind.

Each builder turns already-computed artifact columns into a matplotlib
figure. Numbers are plotted verbatim; the only manipulation allowed here
is selection (subsetting, reshaping, axis limits from min/max).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import artifacts as art

MODE_COLORS = plt.colormaps["tab10"]


def _fig(width=7.0, height=4.5):
    return plt.subplots(figsize=(width, height), dpi=110)


def eigenvalue_density(run_dir, spec):
    table = art.read_table(run_dir, spec.inputs[0])
    fig, ax = _fig()
    widths = table["bin_right"] - table["bin_left"]
    ax.bar(table["bin_left"], table["density"], width=widths, align="edge",
           color="#2a7f7f", edgecolor="none")
    ax.set_xlabel("eigenvalue")
    ax.set_ylabel("spectral density")
    ax.set_title("Correlation-matrix eigenvalue density")
    return fig


def eigenvector_bars(run_dir, spec):
    report = art.read_json(run_dir, spec.inputs[0])
    n = len(report)
    fig, axes = plt.subplots(n, 1, figsize=(7.0, 1.9 * n), dpi=110, sharex=True)
    axes = np.atleast_1d(axes)
    for ax, entry in zip(axes, report):
        values = entry["entries"]
        ax.bar(range(1, len(values) + 1), values, color=MODE_COLORS(entry["mode"] - 1))
        ax.axhline(0.0, color="black", linewidth=0.6)
        ax.set_ylabel(f"mode {entry['mode']}")
        ax.set_title(
            f"eigenvalue {entry['eigenvalue']:.3g}, dominant: {entry['dominant_sector']}",
            fontsize=8,
        )
    axes[-1].set_xlabel("component index")
    fig.suptitle("Leading eigenvectors")
    fig.tight_layout()
    return fig


def tail_pdfs(run_dir, spec):
    table = art.read_table(run_dir, spec.inputs[0])
    fig, ax = _fig()
    for mode in np.unique(table["mode"]):
        sel = table["mode"] == mode
        ax.semilogy(table["bin_center"][sel], table["density"][sel],
                    label=f"mode {int(mode)}", color=MODE_COLORS(int(mode) - 1),
                    linewidth=1.0)
    ax.set_xlabel("mode return")
    ax.set_ylabel("probability density")
    title = "Mode densities (log ordinate)"
    if "unscaled" in spec.output:
        title = "Rotated series densities without rescaling (log ordinate)"
    ax.set_title(title)
    ax.legend(fontsize=8)
    return fig


def _per_mode_errorbar(ax, records, x_key, y_key, err_key):
    for (mode,), recs in sorted(art.group_records(records, "mode").items()):
        xs = [r[x_key] for r in recs if r[y_key] is not None]
        ys = [r[y_key] for r in recs if r[y_key] is not None]
        errs = [r[err_key] for r in recs if r[y_key] is not None]
        if not xs:
            continue
        ax.errorbar(xs, ys, yerr=errs, fmt="o-", capsize=2.5, markersize=3.5,
                    linewidth=1.0, label=f"mode {int(mode)}",
                    color=MODE_COLORS(int(mode) - 1))


def gamma_vs_alpha(run_dir, spec):
    records = [r for r in art.fit_records(run_dir, spec.inputs[0])
               if r["tail"] == spec.params["tail"]]
    fig, ax = _fig()
    _per_mode_errorbar(ax, records, "alpha", "gamma", "se_gamma")
    ax.set_xscale("log")
    ax.invert_xaxis()  # deeper tail to the right
    ax.set_xlabel("tail quantile")
    ax.set_ylabel("estimated shape")
    variant = " (rolling threshold)" if spec.params.get("rolling") else ""
    ax.set_title(f"Tail shape vs tail quantile, {spec.params['tail']} tail{variant}")
    ax.legend(fontsize=8)
    return fig


def gamma_vs_threshold(run_dir, spec):
    records = [r for r in art.fit_records(run_dir, spec.inputs[0])
               if r["tail"] == spec.params["tail"]]
    fig, ax = _fig()
    _per_mode_errorbar(ax, records, "threshold", "gamma", "se_gamma")
    ax.set_xlabel("threshold")
    ax.set_ylabel("estimated shape")
    ax.set_title(f"Tail shape vs threshold, {spec.params['tail']} tail")
    ax.legend(fontsize=8)
    return fig


def nrmsd_vs_threshold(run_dir, spec):
    records = [r for r in art.fit_records(run_dir, spec.inputs[0])
               if r["tail"] == spec.params["tail"]]
    fig, ax = _fig()
    for (mode,), recs in sorted(art.group_records(records, "mode").items()):
        xs = [r["threshold"] for r in recs if r["nrmsd"] is not None]
        ys = [r["nrmsd"] for r in recs if r["nrmsd"] is not None]
        if xs:
            ax.plot(xs, ys, "o-", markersize=3.5, linewidth=1.0,
                    label=f"mode {int(mode)}", color=MODE_COLORS(int(mode) - 1))
    ax.set_xlabel("threshold")
    ax.set_ylabel("NRMSD")
    ax.set_title(f"Goodness of fit vs threshold, {spec.params['tail']} tail")
    ax.legend(fontsize=8)
    return fig


def theta_vs_alpha(run_dir, spec):
    table = art.read_table(run_dir, spec.inputs[0])
    fig, ax = _fig()
    ax.plot(table["alpha"], table["theta"], "o-", color="#8a1c3c",
            markersize=4, linewidth=1.0)
    ax.set_xscale("log")
    ax.invert_xaxis()
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel("tail quantile")
    ax.set_ylabel("extremal index")
    ax.set_title(f"Extremal index vs tail quantile ({spec.inputs[0]})")
    return fig


def acf(run_dir, spec):
    table = art.read_table(run_dir, spec.inputs[0])
    fig, ax = _fig()
    lags = table["lag"]
    # evenly spaced markers keep dense lag grids readable
    every = max(1, lags.shape[0] // 25)
    for key in table:
        if key == "lag":
            continue
        ax.plot(lags, table[key], marker="o", markevery=every, markersize=3.5,
                linewidth=1.0, label=key,
                color=MODE_COLORS(int(key.rsplit("_", 1)[1]) - 1))
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xlabel("lag (s)")
    ax.set_ylabel("autocorrelation of |series|")
    residual = "residual " if "residual" in spec.inputs[0] else ""
    ax.set_title(f"Autocorrelation of absolute {residual}mode series")
    ax.legend(fontsize=8)
    return fig


def volatility_profile(run_dir, spec):
    values = art.read_single_column(run_dir, spec.inputs[0])
    fig, ax = _fig()
    ax.plot(range(1, values.shape[0] + 1), values, linewidth=0.7, color="#2a7f7f")
    ax.set_xlabel("intraday second")
    ax.set_ylabel("mean |return|")
    ax.set_title(f"Intraday volatility profile, mode {spec.params['mode']}")
    return fig


def rolling_threshold_overlay(run_dir, spec):
    table = art.read_table(run_dir, spec.inputs[0])
    fig, ax = _fig()
    ax.plot(table["t"], table["value"], linewidth=0.4, color="#999999",
            label="series")
    ax.plot(table["t"], table["u_fixed"], linewidth=1.2, color="#8a1c3c",
            label="fixed quantile")
    ax.plot(table["t"], table["u_rolling"], linewidth=1.2, color="#1f4196",
            label="rolling quantile")
    ax.set_xlabel("t (s)")
    ax.set_ylabel("value")
    ax.set_title(f"Local vs fixed threshold, mode {spec.params['mode']}")
    ax.legend(fontsize=8)
    return fig


def _mode_tail_groups(table):
    for mode in np.unique(table["mode"]):
        for tail in np.unique(table["tail"]):
            sel = (table["mode"] == mode) & (table["tail"] == tail)
            if np.any(sel):
                yield int(mode), str(tail), sel


def gev_densities(run_dir, spec):
    table = art.read_table(run_dir, spec.inputs[0])
    fig, ax = _fig()
    for mode, tail, sel in _mode_tail_groups(table):
        style = "-" if tail == "pos" else "--"
        ax.plot(table["x"][sel], table["density"][sel], style, linewidth=1.2,
                label=f"mode {mode} {tail}", color=MODE_COLORS(mode - 1))
    ax.set_xlabel("block maximum")
    ax.set_ylabel("probability density")
    ax.set_title("Inferred block-maxima densities")
    ax.legend(fontsize=8)
    return fig


def gev_vs_blockmaxima(run_dir, spec):
    inferred = art.read_table(run_dir, spec.inputs[0])
    empirical = art.read_table(run_dir, spec.inputs[1])
    fig, ax = _fig()
    for mode, tail, sel in _mode_tail_groups(inferred):
        color = MODE_COLORS(mode - 1)
        style = "-" if tail == "pos" else "--"
        ax.plot(inferred["x"][sel], inferred["density"][sel], style,
                linewidth=1.2, color=color, label=f"mode {mode} {tail} inferred")
        sel_e = (empirical["mode"] == mode) & (empirical["tail"] == tail)
        ax.plot(empirical["bin_center"][sel_e], empirical["density"][sel_e],
                "o", markersize=3.5, color=color,
                label=f"mode {mode} {tail} block maxima")
    ax.set_xlabel("block maximum")
    ax.set_ylabel("probability density")
    ax.set_title("Inferred densities vs empirical block maxima")
    ax.legend(fontsize=7)
    return fig


def qq_grid(run_dir, spec):
    entries = spec.params["entries"]
    modes = sorted({e["mode"] for e in entries})
    alphas = sorted({e["alpha"] for e in entries}, reverse=True)
    fig, axes = plt.subplots(
        len(modes), len(alphas),
        figsize=(2.6 * len(alphas), 2.6 * len(modes)), dpi=110,
        squeeze=False,
    )
    by_key = {(e["mode"], e["alpha"]): e for e in entries}
    for i, mode in enumerate(modes):
        for j, alpha in enumerate(alphas):
            ax = axes[i][j]
            entry = by_key.get((mode, alpha))
            if entry is None:
                ax.set_axis_off()
                continue
            table = art.read_table(run_dir, entry["path"])
            emp, theo = table["empirical"], table["theoretical"]
            ax.plot(emp, theo, ".", markersize=2, color="#2a7f7f")
            lo, hi = float(emp.min()), float(emp.max())
            ax.plot([lo, hi], [lo, hi], "-", linewidth=0.8, color="#8a1c3c")
            ax.set_title(f"mode {mode}, alpha {alpha:g}", fontsize=7)
            if i == len(modes) - 1:
                ax.set_xlabel("empirical", fontsize=7)
            if j == 0:
                ax.set_ylabel("fitted quantile", fontsize=7)
    tail = spec.params["tail"]
    variant = " (rolling)" if spec.params.get("rolling") else ""
    fig.suptitle(f"Q-Q against fitted excess distribution, {tail} tail{variant}")
    fig.tight_layout()
    return fig


def nonstationary_surface(run_dir, spec):
    table = art.read_table(run_dir, spec.inputs[0])
    ts = np.unique(table["t"])
    xs = np.unique(table["x"])
    grid = table["density"].reshape(ts.shape[0], xs.shape[0])
    fig, ax = _fig(width=8.0)
    mesh = ax.pcolormesh(ts, xs, grid.T, shading="nearest", cmap="magma")
    fig.colorbar(mesh, ax=ax, label="density of the block maximum")
    ax.set_xlabel("t (s)")
    ax.set_ylabel("value")
    ax.set_title(f"Time-dependent block-maxima density, mode {spec.params['mode']}")
    return fig


BUILDERS = {
    "eigenvalue_density": eigenvalue_density,
    "eigenvector_bars": eigenvector_bars,
    "tail_pdfs": tail_pdfs,
    "gamma_vs_alpha": gamma_vs_alpha,
    "gamma_vs_threshold": gamma_vs_threshold,
    "nrmsd_vs_threshold": nrmsd_vs_threshold,
    "theta_vs_alpha": theta_vs_alpha,
    "acf": acf,
    "volatility_profile": volatility_profile,
    "rolling_threshold_overlay": rolling_threshold_overlay,
    "gev_densities": gev_densities,
    "gev_vs_blockmaxima": gev_vs_blockmaxima,
    "qq_grid": qq_grid,
    "nonstationary_surface": nonstationary_surface,
}
