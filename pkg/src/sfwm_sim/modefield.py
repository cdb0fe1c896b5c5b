"""Effective nonlinear coefficient from sampled waveguide mode fields.

The Kerr coefficient of a guided mode follows from an overlap of the full
vectorial mode profile with the nonlinear core region:

    gamma(omega) = (omega * n2 / c) * n0^2 * I4 / (Z0^2 * |Ip|^2)

    I4 = integral over the core of |E(x,y)|^4            [V^4/m^2]
    Ip = integral over the full cross-section of
         Re{ E(x,y) x H*(x,y) . e_z }                    [W]

Both integrals are evaluated by 2-D trapezoidal quadrature on the ingested
rectilinear grid, which may be non-uniform.  No mode solving happens here:
fields come from a mode-solver export (see ``read_mode_field_csv``), one file
per frequency.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.constants import c as C_VACUUM

from .errors import DataError, DomainError

# Free-space wave impedance sqrt(mu0/eps0), ohm.
Z0_OHM = 376.730313668

# Silicon at 1550 nm: linear index and Kerr index (central value of the
# commonly quoted 3..6e-18 m^2/W band).
N0_SILICON = 3.48
N2_SILICON_M2_PER_W = 4.5e-18


@dataclass(frozen=True)
class MaterialConstants:
    """Material/impedance constants entering the overlap quadrature."""

    n0: float = N0_SILICON
    n2_m2_per_w: float = N2_SILICON_M2_PER_W
    z0_ohm: float = Z0_OHM
    c_m_per_s: float = C_VACUUM

    def __post_init__(self) -> None:
        for name in ("n0", "n2_m2_per_w", "z0_ohm", "c_m_per_s"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)!r}")


@dataclass(frozen=True, eq=False)
class ModeFieldGrid:
    """Vector mode fields sampled on a rectilinear (x, y) grid.

    ``e_field`` and ``h_field`` hold complex samples shaped (nx, ny, 3) in
    V/m and A/m; ``core_mask`` marks grid points belonging to the nonlinear
    core.  Coordinates must be strictly increasing (spacing may vary).
    """

    x_coords: np.ndarray
    y_coords: np.ndarray
    e_field: np.ndarray
    h_field: np.ndarray
    core_mask: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        x = np.asarray(self.x_coords, dtype=float)
        y = np.asarray(self.y_coords, dtype=float)
        e = np.asarray(self.e_field, dtype=complex)
        h = np.asarray(self.h_field, dtype=complex)
        mask = np.asarray(self.core_mask, dtype=bool)
        if x.ndim != 1 or y.ndim != 1 or x.size < 2 or y.size < 2:
            raise DataError("x_coords and y_coords must be 1-D with >= 2 samples")
        if np.any(np.diff(x) <= 0) or np.any(np.diff(y) <= 0):
            raise DataError("grid coordinates must be strictly increasing")
        shape = (x.size, y.size, 3)
        if e.shape != shape or h.shape != shape:
            raise DataError(f"field arrays must have shape {shape}")
        if mask.shape != (x.size, y.size):
            raise DataError(f"core_mask must have shape {(x.size, y.size)}")
        for name, arr in (("x_coords", x), ("y_coords", y), ("e_field", e), ("h_field", h)):
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "core_mask", mask)

    def poynting_z(self) -> np.ndarray:
        """Re{E x H* . e_z} on the grid (W/m^2)."""
        ex, ey = self.e_field[..., 0], self.e_field[..., 1]
        hx, hy = self.h_field[..., 0], self.h_field[..., 1]
        return np.real(ex * np.conj(hy) - ey * np.conj(hx))


def _trapz2d(values: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    return float(np.trapezoid(np.trapezoid(values, y, axis=1), x, axis=0))


def effective_gamma(
    grid: ModeFieldGrid, omega: float, constants: MaterialConstants = MaterialConstants()
) -> float:
    """Effective nonlinear coefficient gamma (1/(W m)) at angular frequency omega."""
    report = gamma_report(grid, omega, constants)
    return report["gamma_per_w_m"]


def gamma_report(
    grid: ModeFieldGrid, omega: float, constants: MaterialConstants = MaterialConstants()
) -> dict[str, float]:
    """Gamma plus its quadrature components, for itemized CLI output.

    Returns keys ``gamma_per_w_m``, ``core_quartic_integral`` (V^4/m^2) and
    ``poynting_integral_w`` (W).
    """
    if not omega > 0.0:
        raise DomainError(f"omega must be > 0, got {omega!r}")
    if not np.any(grid.core_mask):
        raise DataError("core_mask selects no grid points (empty core region)")

    e2 = np.sum(np.abs(grid.e_field) ** 2, axis=-1)
    quartic = np.where(grid.core_mask, e2 * e2, 0.0)
    i4 = _trapz2d(quartic, grid.x_coords, grid.y_coords)
    ip = _trapz2d(grid.poynting_z(), grid.x_coords, grid.y_coords)
    if ip <= 0.0:
        raise DataError(
            f"mode carries no power in +z (Poynting integral {ip:.3e} W); "
            "degenerate or mis-oriented mode fields"
        )
    z0 = constants.z0_ohm
    gamma = (
        (omega * constants.n2_m2_per_w / constants.c_m_per_s)
        * constants.n0**2
        * i4
        / (z0 * z0 * ip * ip)
    )
    return {
        "gamma_per_w_m": gamma,
        "core_quartic_integral": i4,
        "poynting_integral_w": ip,
    }


MODE_FIELD_COLUMNS = (
    "x_m", "y_m",
    "ex_re", "ex_im", "ey_re", "ey_im", "ez_re", "ez_im",
    "hx_re", "hx_im", "hy_re", "hy_im", "hz_re", "hz_im",
    "in_core",
)


def read_mode_field_csv(path: str | Path) -> ModeFieldGrid:
    """Read a mode-field export (one row per grid point, row-major, SI units).

    The file must carry the header ``x_m,y_m,ex_re,...,in_core`` and the rows
    must form a full rectilinear grid; anything else raises DataError.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise DataError(f"{path}: empty mode-field file")
    header = tuple(name.strip() for name in rows[0])
    if header != MODE_FIELD_COLUMNS:
        raise DataError(
            f"{path}: bad header {','.join(header)!r}; "
            f"expected {','.join(MODE_FIELD_COLUMNS)!r}"
        )
    try:
        data = np.array([[float(v) for v in row] for row in rows[1:]], dtype=float)
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric cell ({exc})") from exc
    if data.ndim != 2 or data.shape[1] != len(MODE_FIELD_COLUMNS) or data.shape[0] < 4:
        raise DataError(f"{path}: expected >= 4 complete rows")

    x = np.unique(data[:, 0])
    y = np.unique(data[:, 1])
    if x.size * y.size != data.shape[0]:
        raise DataError(
            f"{path}: {data.shape[0]} rows do not form a rectilinear "
            f"{x.size} x {y.size} grid"
        )
    # Row-major check: sort by (x, y) and verify coordinates tile exactly.
    order = np.lexsort((data[:, 1], data[:, 0]))
    data = data[order]
    expect_x = np.repeat(x, y.size)
    expect_y = np.tile(y, x.size)
    if not (np.array_equal(data[:, 0], expect_x) and np.array_equal(data[:, 1], expect_y)):
        raise DataError(f"{path}: grid points are not a full rectilinear product")

    def cplx(re_col: int, im_col: int) -> np.ndarray:
        return (data[:, re_col] + 1j * data[:, im_col]).reshape(x.size, y.size)

    e = np.stack([cplx(2, 3), cplx(4, 5), cplx(6, 7)], axis=-1)
    h = np.stack([cplx(8, 9), cplx(10, 11), cplx(12, 13)], axis=-1)
    mask = data[:, 14].reshape(x.size, y.size) != 0.0
    return ModeFieldGrid(x, y, e, h, mask)


def write_mode_field_csv(path: str | Path, grid: ModeFieldGrid) -> None:
    """Write a grid back out in the ingestion format (row-major)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MODE_FIELD_COLUMNS)
        for i, xv in enumerate(grid.x_coords):
            for j, yv in enumerate(grid.y_coords):
                e = grid.e_field[i, j]
                h = grid.h_field[i, j]
                row = [repr(float(xv)), repr(float(yv))]
                for vec in (e, h):
                    for comp in vec:
                        row.append(repr(float(comp.real)))
                        row.append(repr(float(comp.imag)))
                row.append("1" if grid.core_mask[i, j] else "0")
                writer.writerow(row)
