import math

import numpy as np
import pytest

from boseee.analysis import (
    belt_sweep,
    check_ssa,
    closed_surface_gamma,
    equal_partition_bounds,
    fit_log_scaling,
    intersecting_lines,
    predicted_gamma,
    profile_summary,
    rectangle_bounds,
)
from boseee.errors import ValidationError
from boseee.gaussian import block_entropy_1d, entropy
from boseee.kspace import Dispersion, LatticeGeometry
from boseee.partition import belt, disk, intersect, rectangle, union


def test_fit_exact_line():
    pts = [(L, 16, 0.5 * math.log(L) + 2.0) for L in (2, 4, 8, 16)]
    fit = fit_log_scaling(pts)
    assert fit.c == pytest.approx(0.5, abs=1e-12)
    assert fit.b == pytest.approx(2.0, abs=1e-12)
    assert fit.residual < 1e-12


def test_fit_per_transverse_divides():
    pts = [(L, N, N * (0.25 * math.log(L) + 1)) for L, N in ((4, 8), (8, 16), (16, 32))]
    fit = fit_log_scaling(pts, "per_transverse", dims=2)
    assert fit.c == pytest.approx(0.25, abs=1e-12)


def test_fit_matches_normal_equations():
    rng = np.random.default_rng(1)
    L = np.array([3.0, 5.0, 9.0, 17.0, 33.0])
    S = 0.3 * np.log(L) + rng.normal(0, 0.01, L.size)
    fit = fit_log_scaling(zip(L, [64] * 5, S))
    x = np.log(L)
    c = ((x - x.mean()) * (S - S.mean())).sum() / ((x - x.mean()) ** 2).sum()
    assert fit.c == pytest.approx(c, rel=1e-10)


def test_fit_validation():
    with pytest.raises(ValidationError):
        fit_log_scaling([(1, 2, 3), (2, 2, 3)])
    with pytest.raises(ValidationError):
        fit_log_scaling([(4, 8, 1), (4, 16, 2), (4, 32, 3)])
    with pytest.raises(ValidationError):
        fit_log_scaling([(0, 8, 1), (2, 8, 1), (4, 8, 1)])
    with pytest.raises(ValidationError):
        fit_log_scaling([(2, 8, 1), (4, 8, 1), (8, 8, 1)], model="area")


def test_ssa_report_matches_dense():
    g = LatticeGeometry(2, 8)
    disp = Dispersion.closed_surface(1.0, 0.75)
    A, B = rectangle(g, (0, 0), 4, 5), disk(g, (4.0, 4.0), 2.5)
    rep = check_ssa(disp, g, A, B)
    ref = [entropy(disp, g, r).value for r in (A, B, union(A, B), intersect(A, B))]
    assert rep.slack == pytest.approx(ref[0] + ref[1] - ref[2] - ref[3], abs=1e-12)
    assert rep.holds
    assert rep.as_dict()["holds"] is True


def test_ssa_disjoint_is_subadditivity():
    g = LatticeGeometry(2, 8)
    rep = check_ssa(Dispersion.ebl(), g, rectangle(g, (0, 0), 2, 2), rectangle(g, (4, 4), 2, 2))
    assert rep.S_intersection == 0.0
    assert rep.slack >= 0


def test_rectangle_bounds_n32_frozen():
    g = LatticeGeometry(2, 32)
    rep = rectangle_bounds(Dispersion.ebl(), g, 16, 16)
    assert rep.S_rect == pytest.approx(29.196, abs=1e-3)
    assert rep.exact_upper == pytest.approx(30.338, abs=1e-3)
    assert rep.ep_upper == pytest.approx(32 / 3 * math.log(16))
    assert rep.ep_lower == pytest.approx(16 / 3 * math.log(16))
    assert rep.asymptotic_regime
    assert all(rep.checks.values())
    assert equal_partition_bounds(32) == pytest.approx((rep.ep_upper, rep.ep_lower))


def test_rectangle_bounds_small_lattice_is_informational():
    rep = rectangle_bounds(Dispersion.ebl(), LatticeGeometry(2, 8), 3, 5)
    assert not rep.asymptotic_regime
    assert rep.ep_upper is None
    assert rep.checks["exact_upper"]
    with pytest.raises(ValidationError):
        rectangle_bounds(Dispersion.ebl(), LatticeGeometry(1, 8), 3, 3)


def test_equal_partition_bounds_3d():
    up, lo = equal_partition_bounds(16, 3)
    assert up == pytest.approx(3 * 256 / 3 * math.log(8))
    assert lo == pytest.approx(64 / 3 * math.log(8))


def test_belt_identity_per_transverse():
    # S_belt / N^(d-1) equals the 1D block entropy on an N-site chain
    for d in (2, 3):
        pts = belt_sweep(Dispersion.ebl(), d, [8, 16], Ls=[2, 3, 5])
        for L, N, S in pts:
            S1 = block_entropy_1d(Dispersion.ebl().grid_values(LatticeGeometry(1, N)), L).value
            assert S / N ** (d - 1) == pytest.approx(S1, rel=1e-12)


def test_belt_sweep_dense_equals_chains():
    a = belt_sweep(Dispersion.closed_surface(1.0, 0.75), 2, [8, 10], ratio=0.5, method="dense")
    b = belt_sweep(Dispersion.closed_surface(1.0, 0.75), 2, [8, 10], ratio=0.5, method="chains")
    assert [p[:2] for p in a] == [(4, 8), (5, 10)]
    np.testing.assert_allclose([p[2] for p in a], [p[2] for p in b], rtol=1e-9)
    with pytest.raises(ValidationError):
        belt_sweep(Dispersion.ebl(), 2, [8], ratio=0.5, Ls=[2])
    with pytest.raises(ValidationError):
        belt_sweep(Dispersion.ebl(), 2, [8], Ls=[2], method="magic")


def test_predicted_gamma_and_lines():
    disp = Dispersion.closed_surface(1.0, 0.75)
    assert predicted_gamma(disp, 64) == pytest.approx(2 / 3 * 42 / 64)
    assert predicted_gamma(disp, 64) == pytest.approx(0.4375)
    assert int(intersecting_lines(disp, 64).sum()) == 42


def test_closed_surface_gamma_report():
    disp = Dispersion.closed_surface(1.0, 0.75)
    rep = closed_surface_gamma(disp, [(32, 4), (32, 8), (32, 16)])
    assert rep.N == 32
    assert rep.fitted > 0
    assert rep.relative_error == pytest.approx(rep.fitted / rep.predicted - 1)
    with pytest.raises(ValidationError):
        closed_surface_gamma(Dispersion.ebl(), [(8, 2), (8, 3), (8, 4)])


def test_profile_summary_keys():
    disp = Dispersion.closed_surface(1.0, 0.75)
    s = profile_summary(disp, LatticeGeometry(2, 32), 8)
    assert set(s) == {"mean_intersecting", "mean_missing", "min_intersecting", "max_missing", "argmax_intersects"}
    assert s["mean_intersecting"] > s["mean_missing"]
    assert s["argmax_intersects"]


def test_equal_partition_bounds_2d_sharpened():
    up, lo = equal_partition_bounds(32, 2)
    assert up == pytest.approx(29.574279703890998)
    assert lo == pytest.approx(14.787139851945499)
    with pytest.raises(ValidationError):
        equal_partition_bounds(8, 1)
