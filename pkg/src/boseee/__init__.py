"""
Exact ground-state entanglement entropies of quadratic bosonic lattices
with Bose surfaces.

The main entry points are re-exported here::

    >>> from boseee import Dispersion, LatticeGeometry, belt, entropy, belt_entropy
    >>> g = LatticeGeometry(2, 12)
    >>> s_dense = entropy(Dispersion.ebl(), g, belt(g, 0, 0, 6)).value
    >>> s_chain = belt_entropy(Dispersion.ebl(), g, 6).value
    >>> abs(s_dense - s_chain) < 1e-8
    True
"""

__version__ = "0.1.0"

from .errors import GeometryMismatchError, NumericalError, RegularizationError, ValidationError
from .kspace import (
    Dispersion,
    KGrid,
    LatticeGeometry,
    critical_chain_count,
    eval_dispersion,
    make_kgrid,
    min_grid_frequency,
    parse_dispersion,
)
from .hamiltonian import CouplingMatrix, axis_chain_matrix, build_coupling, coupling_range
from .gaussian import (
    CorrelationPair,
    EntropyResult,
    block_entropy_1d,
    correlations,
    entropy,
    entropy_from_correlations,
    mode_entropy,
)
from .partition import (
    Region,
    belt,
    complement,
    disk,
    intersect,
    mask_from_predicate,
    mirror,
    parse_region,
    rectangle,
    translate,
    union,
)
from .chains import ChainDecomposition, belt_entropy, chain_entropy_profile, decompose_belt
from .analysis import (
    ScalingFit,
    SSAReport,
    check_ssa,
    closed_surface_gamma,
    fit_log_scaling,
    rectangle_bounds,
)
