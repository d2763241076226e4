"""
Antiperiodic momentum grids and bosonic dispersions.

All lattices are hypercubic with ``N`` sites per axis and lattice constant 1.
Antiperiodic boundary conditions put the allowed momenta at
``k = (2n + 1) * pi / N`` so no grid point sits at ``k = 0``, which is where
every dispersion below has its zero modes.

Dispersions are plain value objects; ``omega(k)`` evaluates the frequency on an
array of momenta whose last axis has length ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import RegularizationError, ValidationError

KINDS = ("factorized", "closed_surface", "point_gapless", "gapped", "custom")

# frequencies at or below this count as zero modes
ZERO_MODE_TOL = 1e-10


@dataclass(frozen=True)
class LatticeGeometry:
    """``dims``-dimensional hypercubic lattice with ``edge`` sites per axis."""

    dims: int
    edge: int

    def __post_init__(self):
        if self.dims not in (1, 2, 3):
            raise ValidationError(f"dims must be 1, 2 or 3, got {self.dims}")
        if int(self.edge) != self.edge or self.edge < 2:
            raise ValidationError(f"edge must be an integer >= 2, got {self.edge}")

    @property
    def n_sites(self) -> int:
        return self.edge**self.dims

    @property
    def shape(self) -> tuple:
        return (self.edge,) * self.dims


def axis_momenta(N: int) -> np.ndarray:
    """The ``N`` antiperiodic momenta ``(2n+1)pi/N`` for ``n = 0..N-1``."""
    return (2 * np.arange(N) + 1) * np.pi / N


@dataclass(frozen=True, eq=False)
class KGrid:
    geometry: LatticeGeometry
    points: np.ndarray  # (N**d, d), lexicographic in (n_1, ..., n_d)

    def __len__(self):
        return len(self.points)

    def mesh(self) -> np.ndarray:
        """Grid points reshaped to ``(N,)*d + (d,)``."""
        g = self.geometry
        return self.points.reshape(g.shape + (g.dims,))


def make_kgrid(geom: LatticeGeometry) -> KGrid:
    k1 = axis_momenta(geom.edge)
    mesh = np.meshgrid(*([k1] * geom.dims), indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    points.setflags(write=False)
    return KGrid(geom, points)


def default_factor(k):
    """Nearest-neighbour factor ``2 sin(k/2)``, vanishing linearly at ``k = 0``."""
    return 2.0 * np.sin(np.asarray(k) / 2.0)


@dataclass(frozen=True, eq=False)
class Dispersion:
    """
    A non-negative frequency ``omega(k)`` on the Brillouin zone.

    Use the classmethod constructors rather than calling this directly.

    Attributes
    ----------
    kind : str
        One of ``KINDS``.
    factors : tuple of callables, optional
        Per-axis factors for ``factorized`` and ``gapped``. A single factor is
        reused on every axis. ``None`` means ``default_factor`` everywhere.
    alpha, beta : float
        Parameters of the closed-surface dispersion.
    mass : float
        Gap parameter of the ``gapped`` kind.
    table : ndarray, optional
        Tabulated frequencies for the ``custom`` kind, shape ``(N,)*d``.
    label : str
        Specification string this dispersion was parsed from, if any.
    """

    kind: str
    factors: Optional[tuple] = None
    alpha: float = 1.0
    beta: float = 0.0
    mass: float = 0.0
    table: Optional[np.ndarray] = field(default=None, repr=False)
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown dispersion kind {self.kind!r}")

    # -- constructors --------------------------------------------------------

    @classmethod
    def ebl(cls) -> "Dispersion":
        """Factorized dispersion with ``f_i(k) = 2 sin(k/2)`` on every axis."""
        return cls("factorized", label="ebl")

    @classmethod
    def factorized(cls, *factors: Callable, label: str = "") -> "Dispersion":
        return cls("factorized", factors=tuple(factors) or None, label=label)

    @classmethod
    def closed_surface(cls, alpha: float = 1.0, beta: float = 0.75) -> "Dispersion":
        if not (alpha > 0 and np.isfinite(alpha)):
            raise ValidationError(f"alpha must be positive, got {alpha}")
        if not np.isfinite(beta):
            raise ValidationError(f"beta must be finite, got {beta}")
        return cls(
            "closed_surface", alpha=float(alpha), beta=float(beta),
            label=f"closed:alpha={alpha:g},beta={beta:g}",
        )

    @classmethod
    def point_gapless(cls) -> "Dispersion":
        return cls("point_gapless", label="point")

    @classmethod
    def gapped(cls, m: float = 1.0) -> "Dispersion":
        if not (m > 0 and np.isfinite(m)):
            raise ValidationError(f"mass must be positive, got {m}")
        return cls("gapped", mass=float(m), label=f"gapped:m={m:g}")

    @classmethod
    def custom(cls, table, label: str = "custom") -> "Dispersion":
        table = np.array(table, dtype=float)
        if table.ndim not in (1, 2, 3) or len(set(table.shape)) != 1:
            raise ValidationError(f"custom table must be an (N,)*d array, got shape {table.shape}")
        if not np.all(np.isfinite(table)):
            raise ValidationError("custom table contains non-finite values")
        bad = np.argwhere(table <= ZERO_MODE_TOL)
        if len(bad):
            n = bad[0]
            k = (2 * n + 1) * np.pi / table.shape[0]
            raise RegularizationError(k, table[tuple(n)])
        table.setflags(write=False)
        return cls("custom", table=table, label=label)

    # -- evaluation ----------------------------------------------------------

    def _axis_factor(self, i: int) -> Callable:
        if not self.factors:
            return default_factor
        if len(self.factors) == 1:
            return self.factors[0]
        return self.factors[i]

    def _factor_product(self, k: np.ndarray) -> np.ndarray:
        d = k.shape[-1]
        if self.factors and len(self.factors) not in (1, d):
            raise ValidationError(f"{len(self.factors)} factors given for a {d}-dimensional momentum")
        out = np.ones(k.shape[:-1])
        for i in range(d):
            out = out * np.asarray(self._axis_factor(i)(k[..., i]), dtype=float)
        return out

    def omega(self, k) -> np.ndarray:
        """Frequency at momenta ``k`` (array with last axis of length ``d``)."""
        k = np.asarray(k, dtype=float)
        if k.ndim == 0:
            k = k[None]
        if np.isnan(k).any():
            raise ValidationError("momentum contains NaN")
        if self.kind == "factorized":
            return np.abs(self._factor_product(k))
        if self.kind == "gapped":
            return np.sqrt(self._factor_product(k) ** 2 + self.mass**2)
        if self.kind == "point_gapless":
            return np.sqrt(np.sum(4.0 * np.sin(k / 2.0) ** 2, axis=-1))
        if self.kind == "closed_surface":
            s = np.sum(np.sin(k / 2.0) ** 2, axis=-1)
            return self.alpha * np.abs(s - self.beta)
        return self._lookup(k)

    def _lookup(self, k: np.ndarray) -> np.ndarray:
        N = self.table.shape[0]
        d = self.table.ndim
        if k.shape[-1] != d:
            raise ValidationError(f"custom table is {d}-dimensional, got {k.shape[-1]}-component momentum")
        n = (np.mod(k, 2 * np.pi) * N / np.pi - 1.0) / 2.0
        idx = np.rint(n)
        if np.max(np.abs(n - idx), initial=0.0) > 1e-6:
            raise ValidationError("custom dispersion is only defined on the antiperiodic grid")
        idx = idx.astype(int) % N
        return self.table[tuple(idx[..., i] for i in range(d))]

    def grid_values(self, geom: LatticeGeometry) -> np.ndarray:
        """``omega`` on the antiperiodic grid of ``geom``, shape ``(N,)*d``."""
        if self.kind == "custom" and self.table.shape != geom.shape:
            raise ValidationError(f"custom table shape {self.table.shape} does not match lattice {geom.shape}")
        return self.omega(make_kgrid(geom).mesh())

    def scaled(self, c: float) -> "Dispersion":
        """``c * omega``; only closed-surface and custom kinds have a direct parameter for it."""
        if self.kind == "custom":
            return Dispersion.custom(c * self.table, label=f"{self.label}*{c:g}")
        if self.kind == "closed_surface":
            return Dispersion.closed_surface(self.alpha * c, self.beta)
        raise ValidationError(f"scaling not supported for kind {self.kind!r}; tabulate with as_custom()")

    def as_custom(self, geom: LatticeGeometry) -> "Dispersion":
        return Dispersion.custom(self.grid_values(geom), label=self.label or self.kind)

    def __str__(self):
        return self.label or self.kind


def eval_dispersion(disp: Dispersion, k) -> float:
    return float(disp.omega(np.asarray(k, dtype=float)).reshape(()))


def check_regularized(disp: Dispersion, geom: LatticeGeometry) -> np.ndarray:
    """Grid frequencies, raising ``RegularizationError`` at the first zero mode."""
    w = disp.grid_values(geom)
    bad = np.argwhere(~(w > ZERO_MODE_TOL))
    if len(bad):
        n = bad[0]
        raise RegularizationError((2 * n + 1) * np.pi / geom.edge, w[tuple(n)])
    return w


def min_grid_frequency(disp: Dispersion, grid: KGrid):
    """Grid point of lowest frequency (first in lexicographic order) and that frequency."""
    w = disp.omega(grid.points)
    i = int(np.argmin(w))
    return grid.points[i].copy(), float(w[i])


def critical_chain_count(disp: Dispersion, grid: KGrid, axis: int = 0) -> int:
    """
    Number of grid lines running along ``axis`` that cross the closed Bose surface.

    A line at fixed transverse momentum ``q`` crosses the surface when
    ``sin^2(k/2) = beta - sin^2(q/2)`` has a real solution, i.e. when
    ``0 <= beta - sin^2(q/2) <= 1``.
    """
    if disp.kind != "closed_surface":
        raise ValidationError(f"critical chains are defined for closed_surface dispersions, got {disp.kind!r}")
    if grid.geometry.dims != 2:
        raise ValidationError("critical_chain_count needs a 2D grid")
    if not 0 < disp.beta < 2:
        raise ValidationError(f"beta={disp.beta} gives no closed Bose surface (need 0 < beta < 2)")
    if axis not in (0, 1):
        raise ValidationError(f"axis must be 0 or 1, got {axis}")
    q = axis_momenta(grid.geometry.edge)
    r = disp.beta - np.sin(q / 2.0) ** 2
    return int(np.count_nonzero((r >= 0) & (r <= 1)))


def parse_dispersion(text: str) -> Dispersion:
    """
    Parse ``ebl``, ``closed:alpha=<f>,beta=<f>``, ``point``, ``gapped:m=<f>``
    or ``custom:<path>``.
    """
    text = text.strip()
    name, _, rest = text.partition(":")
    name = name.lower()
    if name == "ebl" and not rest:
        return Dispersion.ebl()
    if name == "point" and not rest:
        return Dispersion.point_gapless()
    if name == "custom":
        if not rest:
            raise ValidationError("custom dispersion needs a file path: custom:<path>")
        path = Path(rest)
        try:
            table = np.load(path) if path.suffix == ".npy" else np.loadtxt(path, ndmin=1)
        except OSError as exc:
            raise ValidationError(f"cannot read custom dispersion table {rest!r}: {exc}") from None
        return Dispersion.custom(table, label=text)
    if name in ("closed", "gapped"):
        params = _parse_params(rest, text)
        if name == "closed":
            if set(params) - {"alpha", "beta"} or "beta" not in params:
                raise ValidationError(f"closed dispersion takes alpha=,beta=; got {text!r}")
            return Dispersion.closed_surface(params.get("alpha", 1.0), params["beta"])
        if set(params) != {"m"}:
            raise ValidationError(f"gapped dispersion takes m=<f>; got {text!r}")
        return Dispersion.gapped(params["m"])
    raise ValidationError(f"unrecognized dispersion {text!r}")


def _parse_params(rest: str, text: str) -> dict:
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValidationError(f"malformed parameter {item!r} in {text!r}")
        try:
            params[key.strip().lower()] = float(val)
        except ValueError:
            raise ValidationError(f"parameter {key!r} in {text!r} is not a number") from None
    return params


def displacement_table(values: np.ndarray, power: float = 1.0) -> np.ndarray:
    """
    Plane-wave momentum sum over the antiperiodic grid, tabulated by displacement.

    Returns ``T[r + N - 1] = (1/N^d) sum_k values(k)**power * cos(k.r)`` for every
    displacement ``r`` with components in ``[-(N-1), N-1]``. ``values`` has shape
    ``(N,)*d``. The sum is carried out axis by axis with explicit phase matrices.

    Also returns the largest discarded imaginary part, which vanishes when
    ``values`` is even under ``k -> -k``. The real table is symmetrized under
    ``r -> -r`` so gathered matrices are exactly symmetric.
    """
    values = np.asarray(values, dtype=float)
    N, d = values.shape[0], values.ndim
    h = values**power if power != 1.0 else values
    r = np.arange(-(N - 1), N)
    # k*r = pi*m/N with integer m; reducing m mod 2N keeps the arguments small
    # and makes the sign flip under r -> r + N exact
    m = np.mod(np.outer(r, 2 * np.arange(N) + 1), 2 * N)
    base = np.exp(1j * np.pi * np.arange(N) / N)
    phase = np.where(m < N, base[m % N], -base[m % N])  # (2N-1, N)
    t = h.astype(complex)
    for ax in range(d):
        t = np.moveaxis(np.tensordot(phase, t, axes=([1], [ax])), 0, ax)
    t /= N**d
    # even part only; r and -r come from separate sums and can differ by an ulp
    real = 0.5 * (t.real + np.flip(t.real))
    return real, np.max(np.abs(t.imag), initial=0.0)

