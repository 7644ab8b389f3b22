"""Correlation spectrum and rotation into uncorrelated modes.

The Pearson correlation matrix of the normalized panel is
eigendecomposed; projecting the panel onto the eigenvectors and dividing
each projection by the square root of its eigenvalue yields modes that
are exactly uncorrelated with unit sample variance. Modes are numbered
by descending eigenvalue: the first reflects the market as a whole, the
next ones the dominant sectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NearSingular, NotSymmetric
from .preprocess import ReturnMatrix

__all__ = [
    "Spectrum",
    "correlation_matrix",
    "spectral_decompose",
    "rotate_rescale",
    "eigenvector_report",
    "eigenvalue_density",
]

SIGN_CONVENTION = "largest-magnitude entry nonnegative"


@dataclass(frozen=True)
class Spectrum:
    """Descending eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sign_convention: str = SIGN_CONVENTION

    @property
    def size(self) -> int:
        return int(self.eigenvalues.size)


def correlation_matrix(m: ReturnMatrix) -> np.ndarray:
    """Pearson correlation matrix of a normalized panel.

    With population-standardized rows this is the cross product over T,
    symmetrized, with an exact unit diagonal.
    """
    if m.kind != "normalized":
        raise InputError(f"expected a normalized panel, got kind={m.kind!r}")
    v = m.values
    c = v @ v.T / v.shape[1]
    c = 0.5 * (c + c.T)
    np.fill_diagonal(c, 1.0)
    np.clip(c, -1.0, 1.0, out=c)
    return c


def spectral_decompose(c: np.ndarray, symmetry_tol: float = 1e-8) -> Spectrum:
    """Eigendecomposition of a symmetric matrix, deterministically ordered.

    Eigenvalues descend; exact ties are ordered by the index of the
    eigenvector's largest-magnitude entry, and every eigenvector is
    flipped so that entry is nonnegative. Two runs on identical input are
    bit-identical.
    """
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise NotSymmetric("matrix must be square")
    if np.max(np.abs(c - c.T)) > symmetry_tol:
        raise NotSymmetric("matrix is not symmetric within tolerance")
    vals, vecs = np.linalg.eigh(0.5 * (c + c.T))
    peak = np.argmax(np.abs(vecs), axis=0)
    order = np.lexsort((peak, -vals))
    vals = vals[order]
    vecs = vecs[:, order]
    peak = peak[order]
    signs = np.where(vecs[peak, np.arange(vecs.shape[1])] < 0.0, -1.0, 1.0)
    return Spectrum(eigenvalues=vals, eigenvectors=vecs * signs)


def rotate_rescale(m: ReturnMatrix, spectrum: Spectrum, rescale: bool = True,
                   eigenvalue_floor: float = 1e-10) -> ReturnMatrix:
    """Rotate a panel into the eigenbasis, normalizing mode variances.

    Row k of the result is the projection onto eigenvector k divided by
    the square root of eigenvalue k, so the sample correlation of the
    modes is the identity up to round-off. ``rescale=False`` skips the
    variance normalization, leaving the raw rotated series.
    """
    if spectrum.size != m.n_series:
        raise InputError("spectrum size does not match the panel")
    r = spectrum.eigenvectors.T @ m.values
    if rescale:
        small = spectrum.eigenvalues < eigenvalue_floor
        if np.any(small):
            raise NearSingular(
                f"{int(np.count_nonzero(small))} eigenvalue(s) below "
                f"{eigenvalue_floor}; cannot rescale"
            )
        r /= np.sqrt(spectrum.eigenvalues)[:, None]
    labels = [f"mode_{k + 1}" for k in range(m.n_series)]
    return ReturnMatrix(values=r, tickers=labels, grid=m.grid,
                        delta_t=m.delta_t, kind="modes")


def eigenvector_report(spectrum: Spectrum, sector_map: dict[str, str],
                       tickers: list[str], top_k: int = 5) -> list[dict]:
    """Dominant-sector summary of the leading eigenvectors.

    For each of the top_k eigenvectors: the entry list, the participation
    ratio 1 / sum(u_i^4) and the sector with the largest sum of squared
    entries. The sector map must cover all tickers.
    """
    missing = [t for t in tickers if t not in sector_map]
    if missing:
        raise InputError(f"sector_map misses tickers: {', '.join(missing[:5])}")
    top_k = min(top_k, spectrum.size)
    report = []
    for k in range(top_k):
        vec = spectrum.eigenvectors[:, k]
        weights: dict[str, float] = {}
        for ticker, entry in zip(tickers, vec):
            sector = sector_map[ticker]
            weights[sector] = weights.get(sector, 0.0) + float(entry) ** 2
        dominant = max(sorted(weights), key=lambda s: weights[s])
        report.append(
            {
                "mode": k + 1,
                "eigenvalue": float(spectrum.eigenvalues[k]),
                "participation_ratio": float(1.0 / np.sum(vec**4)),
                "dominant_sector": dominant,
                "sector_weights": {s: weights[s] for s in sorted(weights)},
                "entries": [float(v) for v in vec],
            }
        )
    return report


def eigenvalue_density(spectrum: Spectrum, n_bins: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Normalized histogram (edges, density) of the eigenvalue spectrum."""
    if n_bins < 1:
        raise InputError("n_bins must be >= 1")
    vals = spectrum.eigenvalues
    lo, hi = float(vals.min()), float(vals.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    density, edges = np.histogram(vals, bins=n_bins, range=(lo, hi), density=True)
    return edges, density
