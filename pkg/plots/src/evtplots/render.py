"""Figure discovery and the render_figures command line.

``discover`` maps a run directory's manifest onto figure specifications;
``render`` materializes one specification as a PNG. Output is
deterministic: identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import artifacts as art
from .figures import BUILDERS

FIGURE_KINDS = tuple(BUILDERS)


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str
    params: dict = field(default_factory=dict)


def _report_specs(index) -> list[FigureSpec]:
    specs = []
    for entry in index.get("fit_report", []):
        name = entry["path"]
        rolling = entry["command"] == "sweep-rolling"
        tag = "_rolling" if rolling else ""
        tails = sorted({r["tail"] for r in art.fit_records(entry["run_dir"], name)},
                       reverse=True)
        for tail in tails:
            params = {"tail": tail, "rolling": rolling}
            specs.append(FigureSpec("gamma_vs_alpha", (name,),
                                    f"gamma_vs_alpha{tag}_{tail}.png", params))
            if not rolling:
                specs.append(FigureSpec("gamma_vs_threshold", (name,),
                                        f"gamma_vs_threshold_{tail}.png", params))
                specs.append(FigureSpec("nrmsd_vs_threshold", (name,),
                                        f"nrmsd_vs_threshold_{tail}.png", params))
    return specs


def _qq_specs(index) -> list[FigureSpec]:
    specs = []
    grouped: dict[tuple, list[dict]] = {}
    for entry in index.get("qq", []):
        rolling = entry["command"] == "sweep-rolling"
        grouped.setdefault((entry["tail"], rolling), []).append(entry)
    for (tail, rolling), entries in sorted(grouped.items()):
        tag = "_rolling" if rolling else ""
        specs.append(FigureSpec(
            "qq_grid",
            tuple(sorted(e["path"] for e in entries)),
            f"qq_grid{tag}_{tail}.png",
            {"tail": tail, "rolling": rolling, "entries": entries},
        ))
    return specs


def discover(run_dir: Path) -> list[FigureSpec]:
    """Figure specifications supported by the artifacts actually present."""
    run_dir = Path(run_dir)
    index = art.artifacts_by_kind(run_dir)
    for entries in index.values():
        for entry in entries:
            entry["run_dir"] = run_dir
    specs: list[FigureSpec] = []

    def single(kind, artifact_kind, output, params=None):
        for entry in index.get(artifact_kind, []):
            specs.append(FigureSpec(kind, (entry["path"],), output, params or {}))

    single("eigenvalue_density", "eigenvalue_density", "eigenvalue_density.png")
    single("eigenvector_bars", "eigenvector_report", "eigenvector_bars.png")
    for entry in index.get("mode_density", []):
        specs.append(FigureSpec("tail_pdfs", (entry["path"],), "tail_pdfs.png"))
    for entry in index.get("mode_density_unscaled", []):
        specs.append(FigureSpec("tail_pdfs", (entry["path"],),
                                "tail_pdfs_unscaled.png"))
    specs.extend(_report_specs(index))
    for entry in index.get("theta_table", []):
        stem = Path(entry["path"]).stem
        specs.append(FigureSpec("theta_vs_alpha", (entry["path"],), f"{stem}.png"))
    for entry in index.get("acf", []):
        stem = Path(entry["path"]).stem
        specs.append(FigureSpec("acf", (entry["path"],), f"{stem}.png"))
    for entry in index.get("volatility_profile", []):
        specs.append(FigureSpec("volatility_profile", (entry["path"],),
                                f"volatility_profile_mode{entry['mode']}.png",
                                {"mode": entry["mode"]}))
    for entry in index.get("rolling_overlay", []):
        specs.append(FigureSpec("rolling_threshold_overlay", (entry["path"],),
                                f"rolling_threshold_overlay_mode{entry['mode']}.png",
                                {"mode": entry["mode"]}))
    for entry in index.get("gev_density", []):
        specs.append(FigureSpec("gev_densities", (entry["path"],),
                                "gev_densities.png"))
        for blockmax in index.get("blockmax_density", []):
            specs.append(FigureSpec("gev_vs_blockmaxima",
                                    (entry["path"], blockmax["path"]),
                                    "gev_vs_blockmaxima.png"))
    specs.extend(_qq_specs(index))
    for entry in index.get("nonstationary_surface", []):
        specs.append(FigureSpec(
            "nonstationary_surface", (entry["path"],),
            f"nonstationary_surface_mode{entry['mode']}_{entry['tail']}.png",
            {"mode": entry["mode"], "tail": entry["tail"]},
        ))
    return specs


def render(spec: FigureSpec, run_dir: Path, out_dir: Path | None = None) -> Path:
    """Render one figure specification to its PNG file."""
    run_dir = Path(run_dir)
    out_dir = Path(out_dir) if out_dir else run_dir / "figures"
    out_dir.mkdir(parents=True, exist_ok=True)
    fig = BUILDERS[spec.kind](run_dir, spec)
    out_path = out_dir / spec.output
    fig.savefig(out_path, format="png")
    plt.close(fig)
    return out_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render the standard figure set from an evtmodes run directory.",
    )
    parser.add_argument("run_dir")
    parser.add_argument("--only", default=None,
                        help="comma-separated figure kinds to render")
    parser.add_argument("--out", default=None,
                        help="output directory (default: RUN_DIR/figures)")
    args = parser.parse_args(argv)

    only = None
    if args.only:
        only = {k.strip() for k in args.only.split(",") if k.strip()}
        unknown = only - set(FIGURE_KINDS)
        if unknown:
            print(f"error: unknown figure kinds: {', '.join(sorted(unknown))}",
                  file=sys.stderr)
            return 2
    try:
        specs = discover(Path(args.run_dir))
    except art.ArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if only is not None:
        specs = [s for s in specs if s.kind in only]
        missing = only - {s.kind for s in specs}
        if missing:
            print(f"error: no artifacts for kinds: {', '.join(sorted(missing))}",
                  file=sys.stderr)
            return 2
    if not specs:
        print("error: nothing to render", file=sys.stderr)
        return 2
    for spec in specs:
        try:
            path = render(spec, Path(args.run_dir), args.out)
        except art.ArtifactError as exc:
            print(f"error: {spec.kind}: {exc}", file=sys.stderr)
            return 2
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
