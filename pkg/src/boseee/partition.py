"""
Lattice regions: belts, rectangles, disks, arbitrary masks, and set algebra.

A ``Region`` is an immutable boolean mask over the lattice. Canonical site
order is lexicographic in the coordinates, which is C order of the mask.
Offsets and translations wrap periodically.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import GeometryMismatchError, ValidationError
from .kspace import LatticeGeometry

AXIS_NAMES = {"x": 0, "y": 1, "z": 2}


def _axis_index(axis, dims: int) -> int:
    if isinstance(axis, str):
        if axis.lower() not in AXIS_NAMES:
            raise ValidationError(f"unknown axis {axis!r}")
        axis = AXIS_NAMES[axis.lower()]
    axis = int(axis)
    if not 0 <= axis < dims:
        raise ValidationError(f"axis {axis} out of range for d={dims}")
    return axis


class Region:
    """
    A set of lattice sites.

    Parameters
    ----------
    geometry : LatticeGeometry
    mask : array_like of bool, shape ``geometry.shape``
    tag : tuple, optional
        Provenance, e.g. ``("belt", axis, offset, width)`` or
        ``("union", tagA, tagB)``. Informational only; belt detection in
        the chain decomposition looks at the mask itself.
    """

    __slots__ = ("geometry", "mask", "tag")

    def __init__(self, geometry: LatticeGeometry, mask, tag: Optional[tuple] = None):
        mask = np.array(mask, dtype=bool)
        if mask.shape != geometry.shape:
            raise ValidationError(f"mask shape {mask.shape} does not match lattice {geometry.shape}")
        mask.setflags(write=False)
        object.__setattr__(self, "geometry", geometry)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "tag", tag or ("mask",))

    def __setattr__(self, name, value):
        raise AttributeError("Region is immutable")

    @property
    def sites(self) -> np.ndarray:
        """Site coordinates, shape ``(size, d)``, lexicographic."""
        return np.argwhere(self.mask)

    @property
    def flat_indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.mask))

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if not isinstance(other, Region):
            return NotImplemented
        return self.geometry == other.geometry and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash((self.geometry, self.mask.tobytes()))

    def __repr__(self):
        g = self.geometry
        return f"Region(d={g.dims}, N={g.edge}, size={self.size}, tag={self.tag!r})"

    def _check(self, other: "Region"):
        if self.geometry != other.geometry:
            raise GeometryMismatchError(f"regions on different lattices: {self.geometry} vs {other.geometry}")

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def __invert__(self):
        return complement(self)


def belt(geom: LatticeGeometry, axis=0, offset: int = 0, L: int = 1) -> Region:
    """Sites whose coordinate along ``axis`` lies in ``offset .. offset+L-1`` (mod N)."""
    a = _axis_index(axis, geom.dims)
    N = geom.edge
    if not 1 <= L <= N - 1:
        raise ValidationError(f"belt width L={L} must satisfy 1 <= L <= N-1={N - 1}")
    coord = np.indices(geom.shape)[a]
    mask = np.mod(coord - offset, N) < L
    return Region(geom, mask, ("belt", a, int(offset) % N, int(L)))


def rectangle(geom: LatticeGeometry, offset: Sequence[int], *widths: int) -> Region:
    """Axis-aligned box: the intersection of one belt per axis."""
    if len(widths) != geom.dims or len(offset) != geom.dims:
        raise ValidationError(f"rectangle on a d={geom.dims} lattice needs {geom.dims} offsets and widths")
    mask = np.ones(geom.shape, dtype=bool)
    for a, (o, w) in enumerate(zip(offset, widths)):
        mask &= belt(geom, a, o, w).mask
    N = geom.edge
    return Region(geom, mask, ("rectangle", tuple(int(o) % N for o in offset), tuple(int(w) for w in widths)))


def union(a: Region, b: Region) -> Region:
    a._check(b)
    return Region(a.geometry, a.mask | b.mask, ("union", a.tag, b.tag))


def intersect(a: Region, b: Region) -> Region:
    a._check(b)
    return Region(a.geometry, a.mask & b.mask, ("intersection", a.tag, b.tag))


def complement(a: Region) -> Region:
    return Region(a.geometry, ~a.mask, ("complement", a.tag))


def translate(a: Region, vector: Sequence[int]) -> Region:
    vector = tuple(int(v) for v in vector)
    if len(vector) != a.geometry.dims:
        raise ValidationError(f"translation needs {a.geometry.dims} components, got {len(vector)}")
    return Region(a.geometry, np.roll(a.mask, vector, axis=tuple(range(a.geometry.dims))), ("translate", a.tag, vector))


def mirror(a: Region, axis=0) -> Region:
    """Reflect ``x -> N-1-x`` along ``axis``."""
    ax = _axis_index(axis, a.geometry.dims)
    return Region(a.geometry, np.flip(a.mask, axis=ax), ("mirror", a.tag, ax))


def mask_from_predicate(geom: LatticeGeometry, predicate: Callable) -> Region:
    """
    Region of sites where ``predicate(*coords)`` is true.

    ``predicate`` receives one integer coordinate array per axis (broadcast
    over the whole lattice) and may return an array or a scalar.
    """
    coords = np.indices(geom.shape)
    m = np.broadcast_to(np.asarray(predicate(*coords), dtype=bool), geom.shape)
    return Region(geom, m, ("mask",))


def disk(geom: LatticeGeometry, center: Optional[Sequence[float]] = None, radius: float = 1.0) -> Region:
    """Sites within Euclidean ``radius`` of ``center`` (default: lattice centre), no wrap."""
    if center is None:
        center = ((geom.edge - 1) / 2.0,) * geom.dims
    if len(center) != geom.dims:
        raise ValidationError(f"disk centre needs {geom.dims} components")
    if radius < 0:
        raise ValidationError(f"disk radius must be non-negative, got {radius}")
    c = np.asarray(center, dtype=float)

    def inside(*xs):
        return sum((x - ci) ** 2 for x, ci in zip(xs, c)) <= radius**2 + 1e-12

    r = mask_from_predicate(geom, inside)
    return Region(geom, r.mask, ("disk", tuple(float(x) for x in c), float(radius)))


def boundary_bonds(a: Region) -> int:
    """Nearest-neighbour bonds (periodic) with exactly one end in the region."""
    n = 0
    for ax in range(a.geometry.dims):
        n += int(np.count_nonzero(a.mask ^ np.roll(a.mask, 1, axis=ax)))
    return n


def belt_params(a: Region) -> Optional[tuple]:
    """
    ``(axis, offset, width)`` if the region is a belt, else ``None``.

    Looks only at the mask: the region must be constant along every other
    axis and its projection on ``axis`` a single cyclic interval of width
    ``1 .. N-1``.
    """
    g = a.geometry
    N = g.edge
    for ax in range(g.dims):
        others = tuple(i for i in range(g.dims) if i != ax)
        proj = np.any(a.mask, axis=others) if others else a.mask
        full = np.all(a.mask, axis=others) if others else a.mask
        if not np.array_equal(proj, full):
            continue
        w = int(np.count_nonzero(proj))
        if not 1 <= w <= N - 1:
            continue
        starts = np.flatnonzero(proj & ~np.roll(proj, 1))
        if len(starts) == 1:
            return ax, int(starts[0]), w
    return None


def parse_region(text: str, geom: LatticeGeometry) -> Region:
    """
    Parse ``belt:<axis>,<offset>,<L>``, ``rect:<x0>,<y0>,<Lx>,<Ly>``,
    ``disk:<cx>,<cy>,<r>`` or ``mask:<path>``.
    """
    kind, sep, rest = text.strip().partition(":")
    kind = kind.lower()
    if not sep or not rest:
        raise ValidationError(f"malformed region literal {text!r}")
    if kind == "mask":
        try:
            grid = np.loadtxt(rest, ndmin=geom.dims)
        except OSError as exc:
            raise ValidationError(f"cannot read mask file {rest!r}: {exc}") from None
        if grid.shape != geom.shape:
            raise ValidationError(f"mask file {rest!r} has shape {grid.shape}, lattice is {geom.shape}")
        if not np.all(np.isin(grid, (0, 1))):
            raise ValidationError(f"mask file {rest!r} must contain only 0 and 1")
        return Region(geom, grid.astype(bool), ("mask", str(Path(rest))))
    parts = [p.strip() for p in rest.split(",")]
    try:
        if kind == "belt":
            if len(parts) != 3:
                raise ValidationError(f"belt literal needs axis,offset,L: {text!r}")
            return belt(geom, parts[0], int(parts[1]), int(parts[2]))
        if kind == "rect":
            d = geom.dims
            if len(parts) != 2 * d:
                raise ValidationError(f"rect literal needs {d} offsets and {d} widths: {text!r}")
            nums = [int(p) for p in parts]
            return rectangle(geom, nums[:d], *nums[d:])
        if kind == "disk":
            d = geom.dims
            if len(parts) != d + 1:
                raise ValidationError(f"disk literal needs {d} centre coordinates and a radius: {text!r}")
            nums = [float(p) for p in parts]
            return disk(geom, nums[:d], nums[d])
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"non-numeric field in region literal {text!r}") from None
    raise ValidationError(f"unknown region kind {kind!r} in {text!r}")
