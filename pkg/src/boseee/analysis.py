"""
Log-scaling fits, strong-subadditivity checks and rectangle entropy bounds.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .chains import belt_entropy, decompose_belt
from .errors import ValidationError
from .gaussian import entropy
from .kspace import Dispersion, LatticeGeometry, axis_momenta, critical_chain_count, make_kgrid
from .partition import Region, belt, intersect, union

SSA_TOL = 1e-8
# below this edge the leading-order rectangle bounds are informational only
ASYMPTOTIC_MIN_N = 32


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of ``y = c ln L + b``; ``y`` is ``S`` or ``S / N**(d-1)``."""

    points: tuple  # ((L, N, S), ...)
    model: str
    c: float
    b: float
    residual: float  # max |y - (c ln L + b)|

    def as_dict(self):
        return {"c": self.c, "b": self.b, "residual": self.residual, "model": self.model}


def fit_log_scaling(points: Iterable[Sequence[float]], model: str = "total", dims: int = 1) -> ScalingFit:
    """
    Fit entropy against ``ln L``.

    Parameters
    ----------
    points : iterable of (L, N, S)
    model : {"total", "per_transverse"}
        ``per_transverse`` divides each ``S`` by ``N**(dims-1)`` before fitting.
    dims : int
        Lattice dimension, used by ``per_transverse``.
    """
    pts = tuple((float(L), float(N), float(S)) for L, N, S in points)
    if len(pts) < 3:
        raise ValidationError(f"log fit needs at least 3 points, got {len(pts)}")
    if model not in ("total", "per_transverse"):
        raise ValidationError(f"unknown fit model {model!r}")
    L = np.array([p[0] for p in pts])
    if np.any(L <= 0):
        raise ValidationError("block sizes must be positive")
    x = np.log(L)
    if np.ptp(x) == 0:
        raise ValidationError("all points share the same L; slope undefined")
    y = np.array([p[2] for p in pts])
    if model == "per_transverse":
        y = y / np.array([p[1] for p in pts]) ** (dims - 1)
    A = np.stack([x, np.ones_like(x)], axis=1)
    (c, b), *_ = np.linalg.lstsq(A, y, rcond=None)
    res = float(np.max(np.abs(y - (c * x + b))))
    return ScalingFit(pts, model, float(c), float(b), res)


@dataclass(frozen=True)
class SSAReport:
    S_A: float
    S_B: float
    S_union: float
    S_intersection: float
    size_A: int
    size_B: int

    @property
    def slack(self) -> float:
        return self.S_A + self.S_B - self.S_union - self.S_intersection

    @property
    def holds(self) -> bool:
        return self.slack >= -SSA_TOL

    def as_dict(self):
        d = asdict(self)
        d.update(slack=self.slack, holds=self.holds)
        return d


def check_ssa(disp: Dispersion, geom: LatticeGeometry, A: Region, B: Region) -> SSAReport:
    """All four entropies of strong subadditivity, by the dense path."""
    U, I = union(A, B), intersect(A, B)
    s = [entropy(disp, geom, r).value for r in (A, B, U, I)]
    return SSAReport(*s, A.size, B.size)


@dataclass
class RectangleBounds:
    Lx: int
    Ly: int
    N: int
    S_rect: float
    S_A: float
    S_B: float
    S_union: float
    upper: float  # (N/3) ln(Lx Ly)
    lower: float  # max[(Lx/3) ln Ly, (Ly/3) ln Lx]
    exact_upper: float  # S_A + S_B - S_union
    ep_upper: Optional[float] = None  # (N/3) ln(N/2)
    ep_lower: Optional[float] = None  # (N/6) ln(N/2)
    checks: dict = field(default_factory=dict)
    asymptotic_regime: bool = False

    def as_dict(self):
        return asdict(self)


def rectangle_bounds(disp: Dispersion, geom: LatticeGeometry, Lx: int, Ly: int) -> RectangleBounds:
    """
    Dense rectangle entropy against the belt-derived bounds.

    ``exact_upper`` is rigorous at any size. ``upper``/``lower`` and the
    equal-partition pair are leading-order statements; ``checks`` records
    whether each holds, and ``asymptotic_regime`` marks sizes where a failure
    would be meaningful (``N >= 32``).
    """
    if geom.dims != 2:
        raise ValidationError("rectangle bounds are for 2D lattices")
    N = geom.edge
    A = belt(geom, 0, 0, Lx)
    B = belt(geom, 1, 0, Ly)
    R = intersect(A, B)
    U = union(A, B)
    s_a, s_b, s_u, s_r = (entropy(disp, geom, r).value for r in (A, B, U, R))
    rep = RectangleBounds(
        Lx, Ly, N, s_r, s_a, s_b, s_u,
        upper=N / 3 * math.log(Lx * Ly),
        lower=max(Lx / 3 * math.log(Ly), Ly / 3 * math.log(Lx)),
        exact_upper=s_a + s_b - s_u,
        asymptotic_regime=N >= ASYMPTOTIC_MIN_N,
    )
    rep.checks = {
        "exact_upper": rep.exact_upper >= s_r - SSA_TOL,
        "upper": rep.upper >= s_r,
        "lower": s_r >= rep.lower,
    }
    if 2 * Lx == N and 2 * Ly == N:
        rep.ep_upper, rep.ep_lower = equal_partition_bounds(N, 2)
        rep.checks["ep_upper"] = rep.ep_upper >= s_r
        rep.checks["ep_lower"] = s_r >= rep.ep_lower
    return rep


def equal_partition_bounds(N: int, d: int = 2) -> tuple:
    """
    ``(upper, lower)`` for one of the ``2**d`` equal-partition hypercubes.

    In 2D the union of the two half belts is the complement of their
    overlap, which halves the upper bound to ``(N/3) ln(N/2)``. For ``d > 2``
    the general form ``d N^(d-1)/3 ln(N/2)`` is used.
    """
    if d < 2:
        raise ValidationError(f"equal-partition bounds need d >= 2, got {d}")
    h = N / 2
    lower = h ** (d - 1) / 3 * math.log(h)
    if d == 2:
        return N / 3 * math.log(h), lower
    return d * N ** (d - 1) / 3 * math.log(h), lower


def belt_sweep(
    disp: Dispersion,
    dims: int,
    Ns: Sequence[int],
    ratio: Optional[float] = None,
    Ls: Optional[Sequence[int]] = None,
    method: str = "chains",
    axis: int = 0,
    threads: Optional[int] = None,
) -> List[tuple]:
    """
    Belt entropies as ``(L, N, S)``.

    Either ``ratio`` (``L = round(ratio*N)`` for each ``N``) or ``Ls`` (every
    ``L`` for each ``N``) must be given.
    """
    if (ratio is None) == (Ls is None):
        raise ValidationError("give exactly one of ratio or Ls")
    out = []
    for N in Ns:
        geom = LatticeGeometry(dims, int(N))
        widths = [int(round(ratio * N))] if ratio is not None else list(Ls)
        for L in widths:
            if method == "chains":
                S = belt_entropy(disp, geom, L, axis, threads=threads).value
            elif method == "dense":
                S = entropy(disp, geom, belt(geom, axis, 0, L)).value
            else:
                raise ValidationError(f"unknown method {method!r}")
            out.append((L, int(N), S))
    return out


@dataclass(frozen=True)
class GammaReport:
    fit: ScalingFit
    fitted: float  # slope of S/N against ln L
    predicted: float  # (2/3) * critical chains / N at the largest N
    critical_chains: int
    N: int

    @property
    def relative_error(self) -> float:
        return self.fitted / self.predicted - 1.0

    def as_dict(self):
        return {
            "fit": self.fit.as_dict(), "fitted": self.fitted, "predicted": self.predicted,
            "critical_chains": self.critical_chains, "N": self.N, "relative_error": self.relative_error,
        }


def closed_surface_gamma(
    disp: Dispersion,
    points: Sequence[tuple],
    threads: Optional[int] = None,
) -> GammaReport:
    """
    Fit ``S_belt / N = gamma ln L + b`` over ``(N, L)`` pairs and compare with
    two gapless points per critical chain, ``gamma = (2/3) * count / N``.

    Pairs may hold ``N`` fixed (pure ``L`` sweep) or keep ``L/N`` fixed; the
    prediction uses the chain count at the largest ``N``.
    """
    if disp.kind != "closed_surface":
        raise ValidationError("gamma analysis needs a closed_surface dispersion")
    if not 0 < disp.beta < 2:
        raise ValidationError(f"beta={disp.beta} gives no closed Bose surface (need 0 < beta < 2)")
    data = []
    for N, L in points:
        geom = LatticeGeometry(2, int(N))
        data.append((L, N, belt_entropy(disp, geom, L, 0, threads=threads).value))
    fit = fit_log_scaling(data, "per_transverse", dims=2)
    Nmax = max(int(N) for N, _ in points)
    count = critical_chain_count(disp, make_kgrid(LatticeGeometry(2, Nmax)), axis=0)
    return GammaReport(fit, fit.c, 2.0 / 3.0 * count / Nmax, count, Nmax)


def predicted_gamma(disp: Dispersion, N: int) -> float:
    count = critical_chain_count(disp, make_kgrid(LatticeGeometry(2, N)), axis=0)
    return 2.0 / 3.0 * count / N


def intersecting_lines(disp: Dispersion, N: int) -> np.ndarray:
    """Boolean mask over transverse momenta: does the line cross the Bose surface?"""
    r = disp.beta - np.sin(axis_momenta(N) / 2.0) ** 2
    return (r >= 0) & (r <= 1)


def profile_summary(disp: Dispersion, geom: LatticeGeometry, L: int, threads: Optional[int] = None) -> dict:
    """Mean chain entropy on lines that cross the Bose surface versus lines that miss it."""
    dec = decompose_belt(disp, geom, belt(geom, 0, 0, L), threads=threads)
    s = np.array([c.entropy for c in dec.per_chain])
    hit = intersecting_lines(disp, geom.edge)
    return {
        "mean_intersecting": float(s[hit].mean()) if hit.any() else float("nan"),
        "mean_missing": float(s[~hit].mean()) if (~hit).any() else float("nan"),
        "min_intersecting": float(s[hit].min()) if hit.any() else float("nan"),
        "max_missing": float(s[~hit].max()) if (~hit).any() else float("nan"),
        "argmax_intersects": bool(hit[int(np.argmax(s))]),
    }
