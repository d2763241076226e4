"""
Ground-state correlations and entanglement entropy of harmonic lattices.

For ``H = 1/2 sum p^2 + 1/2 q.V.q`` with ``V`` diagonal in antiperiodic plane
waves (eigenvalues ``omega(k)**2``), the ground state is Gaussian with

    X_rr' = <q_r q_r'> = 1/(2 N^d) sum_k cos(k.(r - r')) / omega(k)
    P_rr' = <p_r p_r'> = 1/(2 N^d) sum_k cos(k.(r - r')) * omega(k)

The entropy of a region follows from the symplectic eigenvalues ``nu`` of the
restricted pair, ``nu**2 = eig(X_A P_A)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import xlogy

from .errors import NumericalError, ValidationError
from .kspace import Dispersion, LatticeGeometry, check_regularized, displacement_table

# dense paths form matrices over at most this many lattice sites
MAX_DENSE_SITES = 4096
CLAMP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CorrelationPair:
    X: np.ndarray
    P: np.ndarray
    region: object  # partition.Region, or None for an explicit site list
    source: str = ""


@dataclass(frozen=True)
class EntropyResult:
    """Von Neumann entropy in nats, with diagnostics from the symplectic spectrum."""

    value: float
    region_size: int
    method: str = "dense"
    nu_min: float = float("nan")
    clamped_count: int = 0


def mode_entropy(nu):
    """Entropy ``(nu+1/2) ln(nu+1/2) - (nu-1/2) ln(nu-1/2)`` of one mode; zero at ``nu = 1/2``."""
    nu = np.asarray(nu, dtype=float)
    return xlogy(nu + 0.5, nu + 0.5) - xlogy(nu - 0.5, nu - 0.5)


def _region_sites(region) -> np.ndarray:
    sites = region.sites if hasattr(region, "sites") else region
    sites = np.asarray(sites, dtype=int)
    if sites.ndim == 1:
        sites = sites[:, None]
    return sites


def correlation_tables(omega_grid: np.ndarray):
    """Displacement tables of ``<qq>`` and ``<pp>`` for grid frequencies ``omega_grid``."""
    x, _ = displacement_table(omega_grid, power=-1.0)
    p, _ = displacement_table(omega_grid, power=1.0)
    return 0.5 * x, 0.5 * p


def gather(table: np.ndarray, sites: np.ndarray) -> np.ndarray:
    """Matrix ``M[a, b] = table[sites[a] - sites[b]]`` from a displacement table."""
    N = (table.shape[0] + 1) // 2
    diff = sites[:, None, :] - sites[None, :, :] + (N - 1)
    return table[tuple(diff[..., i] for i in range(sites.shape[1]))]


def correlations(disp: Dispersion, geom: LatticeGeometry, region) -> CorrelationPair:
    """Ground-state ``X`` and ``P`` restricted to ``region`` (canonical site order)."""
    if getattr(region, "geometry", geom) != geom:
        raise ValidationError("region lives on a different lattice")
    w = check_regularized(disp, geom)
    sites = _region_sites(region)
    if sites.size and (sites.min() < 0 or sites.max() >= geom.edge or sites.shape[1] != geom.dims):
        raise ValidationError("region sites fall outside the lattice")
    tx, tp = correlation_tables(w)
    return CorrelationPair(gather(tx, sites), gather(tp, sites), region, source=f"{disp} N={geom.edge} d={geom.dims}")


def correlations_from_coupling(V: np.ndarray, sites=None):
    """
    ``X = V^{-1/2}/2`` and ``P = V^{1/2}/2`` by dense eigendecomposition of ``V``.

    Independent of the momentum-sum path; ``sites`` are flat indices into ``V``.
    """
    w2, U = np.linalg.eigh(V)
    if w2.min() <= 0:
        raise NumericalError(f"coupling matrix is not positive definite (min eigenvalue {w2.min():.3e})")
    w = np.sqrt(w2)
    X = 0.5 * (U / w) @ U.T
    P = 0.5 * (U * w) @ U.T
    if sites is not None:
        idx = np.asarray(sites)
        X, P = X[np.ix_(idx, idx)], P[np.ix_(idx, idx)]
    return X, P


def symplectic_eigenvalues(X: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Unclamped ``nu`` in descending order, from ``sqrt(X) P sqrt(X)``."""
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(P))):
        raise NumericalError("correlation matrices contain non-finite entries")
    if X.shape[0] == 0:
        return np.zeros(0)
    try:
        xw, xu = np.linalg.eigh(X)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition of X failed: {exc}") from None
    if xw.min() <= 0:
        raise NumericalError(f"X is not positive definite (min eigenvalue {xw.min():.3e})")
    sx = (xu * np.sqrt(xw)) @ xu.T
    m = sx @ P @ sx
    m = 0.5 * (m + m.T)
    try:
        ev = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symplectic eigensolve failed: {exc}") from None
    return np.sqrt(np.clip(ev, 0.0, None))[::-1]


def entropy_from_nu(nu: np.ndarray, method: str = "dense") -> EntropyResult:
    nu = np.sort(np.asarray(nu, dtype=float))[::-1]
    if nu.size == 0:
        return EntropyResult(0.0, 0, method)
    clamped = int(np.count_nonzero(nu < 0.5 - CLAMP_TOL))
    s = mode_entropy(np.maximum(nu, 0.5))
    value = 0.0
    for term in s:  # descending nu; fixed order
        value += term
    return EntropyResult(float(value), int(nu.size), method, float(nu[-1]), clamped)


def entropy_from_correlations(corr: CorrelationPair, method: str = "dense") -> EntropyResult:
    return entropy_from_nu(symplectic_eigenvalues(corr.X, corr.P), method)


def entropy(disp: Dispersion, geom: LatticeGeometry, region) -> EntropyResult:
    """Entanglement entropy of ``region`` by the dense path."""
    if geom.n_sites > MAX_DENSE_SITES:
        raise ValidationError(
            f"dense entropy limited to {MAX_DENSE_SITES} lattice sites, got N^d={geom.n_sites}; "
            "use the chain decomposition for belts"
        )
    sites = _region_sites(region)
    if len(sites) == 0:
        return EntropyResult(0.0, 0, "dense")
    return entropy_from_correlations(correlations(disp, geom, region))


def block_entropy_1d(omega: np.ndarray, L: int, method: str = "dense") -> EntropyResult:
    """Entropy of ``L`` contiguous sites of a 1D chain with grid frequencies ``omega``."""
    omega = np.asarray(omega, dtype=float)
    N = omega.shape[0]
    if not 0 <= L <= N:
        raise ValidationError(f"block length {L} outside [0, {N}]")
    if L == 0:
        return EntropyResult(0.0, 0, method)
    tx, tp = correlation_tables(omega)
    sites = np.arange(L)[:, None]
    return entropy_from_nu(symplectic_eigenvalues(gather(tx, sites), gather(tp, sites)), method)


def heisenberg_violation(corr: CorrelationPair) -> Optional[float]:
    """Smallest ``nu`` if it drops below 1/2 beyond tolerance, else ``None``."""
    nu = symplectic_eigenvalues(corr.X, corr.P)
    if nu.size and nu[-1] < 0.5 - CLAMP_TOL:
        return float(nu[-1])
    return None
