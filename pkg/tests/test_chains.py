import csv

import numpy as np
import pytest

from boseee.chains import belt_entropy, decompose_belt, write_profile_csv
from boseee.errors import ValidationError
from boseee.gaussian import block_entropy_1d, entropy
from boseee.kspace import Dispersion, LatticeGeometry
from boseee.partition import belt, rectangle

KINDS = [Dispersion.ebl(), Dispersion.closed_surface(1.0, 0.75), Dispersion.gapped(1.0), Dispersion.point_gapless()]


@pytest.mark.parametrize("disp", KINDS, ids=lambda d: d.kind)
@pytest.mark.parametrize("N, L", [(8, 3), (12, 5), (16, 8)])
def test_chains_match_dense(disp, N, L):
    g = LatticeGeometry(2, N)
    dense = entropy(disp, g, belt(g, 0, 0, L)).value
    chains = belt_entropy(disp, g, L).value
    assert chains == pytest.approx(dense, rel=1e-9, abs=1e-10)


def test_chains_match_dense_3d():
    g = LatticeGeometry(3, 8)
    disp = Dispersion.ebl()
    dense = entropy(disp, g, belt(g, 2, 1, 3)).value
    assert belt_entropy(disp, g, 3, axis=2).value == pytest.approx(dense, rel=1e-9)


def test_factorized_shortcut_equals_all_chains():
    g = LatticeGeometry(2, 32)
    fast = decompose_belt(Dispersion.ebl(), g, belt(g, 0, 0, 10))
    full = decompose_belt(Dispersion.ebl(), g, belt(g, 0, 0, 10), all_chains=True)
    assert fast.total.value == pytest.approx(full.total.value, rel=1e-10)
    # every chain is a rescaling of the same 1D chain, and entropy is scale-free
    S = [c.entropy for c in full.per_chain]
    assert max(S) - min(S) < 1e-10


def test_ebl_belt_is_n_copies_of_1d():
    N = 32
    g = LatticeGeometry(2, N)
    w1 = Dispersion.ebl().grid_values(LatticeGeometry(1, N))
    for L in (4, 16):
        assert belt_entropy(Dispersion.ebl(), g, L).value == pytest.approx(N * block_entropy_1d(w1, L).value, rel=1e-12)


def test_offset_and_axis_do_not_matter():
    g = LatticeGeometry(2, 16)
    disp = Dispersion.closed_surface(1.0, 0.75)
    ref = decompose_belt(disp, g, belt(g, 0, 0, 5)).total.value
    assert decompose_belt(disp, g, belt(g, 0, 9, 5)).total.value == pytest.approx(ref, rel=1e-12)
    assert decompose_belt(disp, g, belt(g, 1, 3, 5)).total.value == pytest.approx(ref, rel=1e-10)


def test_threads_bitwise_identical():
    g = LatticeGeometry(2, 32)
    disp = Dispersion.closed_surface(1.0, 0.75)
    a = decompose_belt(disp, g, belt(g, 0, 0, 8), threads=1)
    b = decompose_belt(disp, g, belt(g, 0, 0, 8), threads=8)
    assert a.total.value == b.total.value
    assert [c.entropy for c in a.per_chain] == [c.entropy for c in b.per_chain]


def test_point_gapless_profile_peaks_at_small_k():
    g = LatticeGeometry(2, 32)
    S = np.array([c.entropy for c in decompose_belt(Dispersion.point_gapless(), g, belt(g, 0, 0, 16)).per_chain])
    # k_perp = (2n+1)pi/N: largest near n = 0 and n = N-1, smallest near pi
    assert S[0] == pytest.approx(S[-1], rel=1e-10)
    assert np.all(np.diff(S[:16]) < 0)
    assert S[0] / S[15] > 10


def test_gapped_chains_saturate():
    g = LatticeGeometry(2, 32)
    disp = Dispersion.gapped(2.0)
    s4 = np.array([c.entropy for c in decompose_belt(disp, g, belt(g, 0, 0, 4)).per_chain])
    s16 = np.array([c.entropy for c in decompose_belt(disp, g, belt(g, 0, 0, 16)).per_chain])
    assert np.max(np.abs(s16 - s4)) < 1e-3
    assert s16.max() < 0.2


def test_rejects_non_belts():
    g = LatticeGeometry(2, 8)
    with pytest.raises(ValidationError):
        decompose_belt(Dispersion.ebl(), g, rectangle(g, (0, 0), 3, 3))
    with pytest.raises(ValidationError):
        decompose_belt(Dispersion.ebl(), LatticeGeometry(2, 10), belt(g, 0, 0, 3))


def test_rejects_odd_custom_dispersion():
    g = LatticeGeometry(1, 6)
    table = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    with pytest.raises(ValidationError):
        decompose_belt(Dispersion.custom(table), g, belt(g, 0, 0, 2))


def test_profile_csv(tmp_path):
    g = LatticeGeometry(2, 8)
    dec = decompose_belt(Dispersion.closed_surface(1.0, 0.75), g, belt(g, 0, 0, 4))
    p = tmp_path / "prof.csv"
    write_profile_csv(dec, p)
    rows = list(csv.reader(p.open()))
    assert rows[0] == ["k_perp_index", "k_perp_value", "S_chain"]
    assert len(rows) == 9
    assert float(rows[1][1]) == pytest.approx(np.pi / 8)
    assert sum(float(r[2]) for r in rows[1:]) == pytest.approx(dec.total.value, rel=1e-12)
