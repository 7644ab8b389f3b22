"""Run-directory artifact discovery and loading.

Pure data access: values are parsed and regrouped but never aggregated
or transformed. A lint test enforces that no statistics are computed on
this path.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


class ArtifactError(Exception):
    """Missing or malformed run-directory artifact."""


def load_manifest(run_dir: Path) -> dict:
    path = Path(run_dir) / "manifest.json"
    if not path.exists():
        raise ArtifactError(f"no manifest.json in {run_dir}")
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def artifacts_by_kind(run_dir: Path) -> dict[str, list[dict]]:
    """kind -> [{path, mode, tail, ...}] collected across all runs."""
    index: dict[str, list[dict]] = {}
    for run in load_manifest(run_dir)["runs"]:
        for artifact in run["artifacts"]:
            entry = dict(artifact)
            entry["command"] = run["command"]
            index.setdefault(artifact["kind"], []).append(entry)
    for entries in index.values():
        entries.sort(key=lambda a: a["path"])
    return index


def read_json(run_dir: Path, name: str):
    path = Path(run_dir) / name
    if not path.exists():
        raise ArtifactError(f"missing artifact {name}")
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def read_table(run_dir: Path, name: str) -> dict[str, np.ndarray]:
    """Header CSV -> column name to float column."""
    path = Path(run_dir) / name
    if not path.exists():
        raise ArtifactError(f"missing artifact {name}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    if not rows:
        raise ArtifactError(f"empty artifact {name}")
    columns: dict[str, np.ndarray] = {}
    for j, key in enumerate(header):
        raw = [row[j] for row in rows]
        try:
            columns[key] = np.array(
                [float("nan") if c in ("", "nan", "None") else float(c) for c in raw]
            )
        except ValueError:
            columns[key] = np.array(raw)  # label column
    return columns


def read_single_column(run_dir: Path, name: str) -> np.ndarray:
    """Headerless one-column CSV (the volatility profile layout)."""
    path = Path(run_dir) / name
    if not path.exists():
        raise ArtifactError(f"missing artifact {name}")
    with open(path, "r", encoding="utf-8") as fh:
        return np.array([float(line) for line in fh if line.strip()])


def read_labelled_matrix(run_dir: Path, name: str) -> tuple[list[str], np.ndarray]:
    """Ticker-labelled matrix CSV -> (labels, rows)."""
    path = Path(run_dir) / name
    if not path.exists():
        raise ArtifactError(f"missing artifact {name}")
    labels, rows = [], []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for record in csv.reader(fh):
            labels.append(record[0])
            rows.append([float(v) for v in record[1:]])
    return labels, np.array(rows)


def fit_records(run_dir: Path, name: str) -> list[dict]:
    report = read_json(run_dir, name)
    return report["records"]


def group_records(records: list[dict], *keys: str) -> dict[tuple, list[dict]]:
    grouped: dict[tuple, list[dict]] = {}
    for rec in records:
        grouped.setdefault(tuple(rec[k] for k in keys), []).append(rec)
    return grouped
