"""
Real-space coupling matrices ``V`` for ``H = 1/2 sum p^2 + 1/2 q.V.q``.

``V`` is the inverse Fourier transform of ``omega(k)**2`` over the antiperiodic
grid, so it is Toeplitz with a sign flip under a shift by ``N`` along any
axis. Units: oscillator mass 1, hbar 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import NumericalError, RegularizationError, ValidationError
from .gaussian import MAX_DENSE_SITES, gather
from .kspace import (
    Dispersion,
    LatticeGeometry,
    check_regularized,
    displacement_table,
    make_kgrid,
)

FLUSH_TOL = 1e-12
IMAG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """
    Dense ``V`` plus, for factorized dispersions, the per-axis chain matrices
    whose Kronecker product it equals.
    """

    geometry: LatticeGeometry
    dense: np.ndarray
    table: np.ndarray  # V by displacement, components in [-(N-1), N-1]
    spectrum: np.ndarray  # omega(k)**2 on the grid, lexicographic
    axis_matrices: Optional[tuple] = None

    def displacement(self, r) -> float:
        """``V_r`` for any integer displacement, antiperiodically continued."""
        N = self.geometry.edge
        r = np.mod(np.atleast_1d(np.asarray(r, dtype=int)), 2 * N)
        if r.shape != (self.geometry.dims,):
            raise ValidationError(f"displacement must have {self.geometry.dims} components")
        over = r >= N
        sign = -1.0 if np.count_nonzero(over) % 2 else 1.0
        r = np.where(over, r - N, r)
        return sign * float(self.table[tuple(r + N - 1)])


def _coupling_table(omega_grid: np.ndarray) -> np.ndarray:
    t, imag = displacement_table(omega_grid, power=2.0)
    if imag > IMAG_TOL:
        raise NumericalError(f"inverse transform of omega^2 is not real (max imaginary part {imag:.2e})")
    t = t.copy()
    t[np.abs(t) < FLUSH_TOL] = 0.0
    return t


def _lattice_sites(geom: LatticeGeometry) -> np.ndarray:
    return np.indices(geom.shape).reshape(geom.dims, -1).T


def build_coupling(disp: Dispersion, geom: LatticeGeometry) -> CouplingMatrix:
    if geom.n_sites > MAX_DENSE_SITES:
        raise ValidationError(
            f"dense coupling matrix limited to {MAX_DENSE_SITES} sites, got N^d={geom.n_sites}"
        )
    w = check_regularized(disp, geom)
    table = _coupling_table(w)
    dense = gather(table, _lattice_sites(geom))
    axes = None
    if disp.kind == "factorized":
        axes = tuple(axis_chain_matrix(disp, geom, i).dense for i in range(geom.dims))
    for a in (dense, table):
        a.setflags(write=False)
    return CouplingMatrix(geom, dense, table, (w**2).ravel(), axes)


def axis_chain_matrix(disp: Dispersion, geom: LatticeGeometry, axis: int) -> CouplingMatrix:
    """``N x N`` chain matrix ``V^axis`` with spectrum ``|f_axis(k)|**2``."""
    if disp.kind != "factorized":
        raise ValidationError(f"axis chain matrices need a factorized dispersion, got {disp.kind!r}")
    if not 0 <= axis < geom.dims:
        raise ValidationError(f"axis {axis} out of range for d={geom.dims}")
    g1 = LatticeGeometry(1, geom.edge)
    k = make_kgrid(g1).points
    f = np.abs(np.asarray(disp._axis_factor(axis)(k[:, 0]), dtype=float))
    if not np.all(f > 0):
        i = int(np.argmin(f))
        raise RegularizationError(k[i], f[i])
    table = _coupling_table(f)
    dense = gather(table, np.arange(geom.edge)[:, None])
    for a in (dense, table):
        a.setflags(write=False)
    return CouplingMatrix(g1, dense, table, f**2)


def coupling_range(V: CouplingMatrix) -> int:
    """Largest Chebyshev displacement (antiperiodic wrap) with ``|V_r| > 1e-10``."""
    N = V.geometry.edge
    r = np.arange(-(N - 1), N)
    # distance on the ring: a displacement r and r -/+ N are the same bond
    ring = np.minimum(np.abs(r), N - np.abs(r))
    grids = np.meshgrid(*([ring] * V.geometry.dims), indexing="ij")
    cheb = np.max(np.stack(grids), axis=0)
    nz = np.abs(V.table) > 1e-10
    return int(cheb[nz].max(initial=0))


def min_eigenvalue(V: CouplingMatrix) -> float:
    return float(np.linalg.eigvalsh(V.dense)[0])


def dump_coupling(V: CouplingMatrix, path, disp_label: str = "") -> None:
    """Write ``i j V_ij`` per nonzero entry, 0-based flat site indices."""
    i, j = np.nonzero(V.dense)
    g = V.geometry
    with open(Path(path), "w") as fh:
        fh.write(f"# d={g.dims} N={g.edge} dispersion={disp_label or '?'} nnz={len(i)}\n")
        for a, b in zip(i, j):
            fh.write(f"{a} {b} {V.dense[a, b]:.17g}\n")


def load_coupling_dump(path) -> tuple:
    """Read a dump back as ``(header, dense matrix)``."""
    with open(Path(path)) as fh:
        header = fh.readline().lstrip("#").strip()
    meta = dict(item.split("=", 1) for item in header.split())
    n = int(meta["N"]) ** int(meta["d"])
    data = np.loadtxt(path, comments="#", ndmin=2)
    M = np.zeros((n, n))
    if data.size:
        M[data[:, 0].astype(int), data[:, 1].astype(int)] = data[:, 2]
    return meta, M
