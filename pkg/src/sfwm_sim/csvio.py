"""CSV interchange formats.

All emitters write floats with ``repr`` (shortest round-trip form) and prefix
a comment header recording the sha256 of the originating config, so identical
runs produce byte-identical files and every artifact is traceable.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .engine import BiphotonSpectrum, SpectralGrid
from .errors import DataError

SPECTRUM_HEADER = ("omega_rad_s", "detuning_thz", "flux_density_per_hz")
MISMATCH_HEADER = ("omega_rad_s", "detuning_thz", "delta_k_rad_per_m")
HISTOGRAM_HEADER = ("bin_center_s", "counts")


def _open_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    comments = []
    data = []
    for row in rows:
        if row[0].lstrip().startswith("#"):
            comments.append(",".join(row))
        else:
            data.append(row)
    if not data:
        raise DataError(f"{path}: no data rows")
    return comments, data


def _write_table(
    path: Path, header: tuple[str, ...], columns, config_sha: str | None
) -> None:
    with path.open("w", newline="") as fh:
        if config_sha is not None:
            fh.write(f"# config_sha256={config_sha}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else str(v) for v in row])


def write_spectrum_csv(
    path: str | Path,
    spectrum: BiphotonSpectrum,
    omega_c: float,
    config_sha: str | None = None,
) -> None:
    omegas = spectrum.grid.omegas
    det_thz = spectrum.grid.detunings_hz(omega_c) / 1e12
    _write_table(
        Path(path), SPECTRUM_HEADER, (omegas, det_thz, spectrum.flux_density), config_sha
    )


def read_spectrum_csv(path: str | Path) -> BiphotonSpectrum:
    """Re-ingest an emitted spectrum; exact float round trip."""
    path = Path(path)
    _, data = _open_rows(path)
    if tuple(data[0]) != SPECTRUM_HEADER:
        raise DataError(f"{path}: expected header {','.join(SPECTRUM_HEADER)!r}")
    try:
        values = np.array([[float(v) for v in row] for row in data[1:]], dtype=float)
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric cell ({exc})") from exc
    if values.shape[0] < 2:
        raise DataError(f"{path}: need at least 2 samples")
    omegas, flux = values[:, 0], values[:, 2]
    grid = SpectralGrid(float(omegas[0]), float(omegas[-1]), omegas.size)
    if not np.array_equal(grid.omegas, omegas):
        # Mirrored-symmetric grids: every sample pair sums to 2*center.
        sums = omegas + omegas[::-1]
        if np.all(sums == sums[0]):
            candidate = SpectralGrid(
                float(omegas[0]), float(omegas[-1]), omegas.size, float(sums[0]) / 2.0
            )
            if np.array_equal(candidate.omegas, omegas):
                grid = candidate
    return BiphotonSpectrum(grid, flux, label=path.stem)


def write_mismatch_csv(
    path: str | Path,
    grid: SpectralGrid,
    omega_c: float,
    delta_k: np.ndarray,
    config_sha: str | None = None,
) -> None:
    det_thz = grid.detunings_hz(omega_c) / 1e12
    _write_table(Path(path), MISMATCH_HEADER, (grid.omegas, det_thz, delta_k), config_sha)


def write_histogram_csv(path: str | Path, hist, config_sha: str | None = None) -> None:
    _write_table(
        Path(path),
        HISTOGRAM_HEADER,
        (hist.bin_centers_s, hist.counts.astype(float)),
        config_sha,
    )


def read_histogram_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    path = Path(path)
    _, data = _open_rows(path)
    if tuple(data[0]) != HISTOGRAM_HEADER:
        raise DataError(f"{path}: expected header {','.join(HISTOGRAM_HEADER)!r}")
    centers = np.array([float(r[0]) for r in data[1:]])
    counts = np.array([int(float(r[1])) for r in data[1:]], dtype=np.int64)
    return centers, counts
