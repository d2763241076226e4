import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boseee.errors import GeometryMismatchError, ValidationError
from boseee.kspace import LatticeGeometry
from boseee.partition import (
    belt,
    belt_params,
    boundary_bonds,
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

G = LatticeGeometry(2, 8)


def test_belt_basic_and_wrap():
    b = belt(G, 0, 6, 3)
    assert b.size == 24
    assert sorted(set(b.sites[:, 0])) == [0, 6, 7]
    assert belt(G, "y", 0, 2).size == 16
    for L in (0, 8):
        with pytest.raises(ValidationError):
            belt(G, 0, 0, L)
    with pytest.raises(ValidationError):
        belt(G, 2, 0, 1)


def test_sites_are_lexicographic():
    s = rectangle(G, (2, 3), 2, 2).sites
    assert s.tolist() == [[2, 3], [2, 4], [3, 3], [3, 4]]


def test_rectangle_is_intersection_of_belts():
    r = rectangle(G, (1, 5), 3, 4)
    assert r == intersect(belt(G, 0, 1, 3), belt(G, 1, 5, 4))
    assert r.size == 12


def test_set_algebra():
    a = rectangle(G, (0, 0), 4, 4)
    b = rectangle(G, (2, 2), 4, 4)
    assert union(a, b) == a | b
    assert (a | b).size == 16 + 16 - 4
    assert (a & b).size == 4
    assert complement(a).size == 48
    assert ~~a == a
    assert hash(a) == hash(rectangle(G, (0, 0), 4, 4))
    with pytest.raises(GeometryMismatchError):
        a | rectangle(LatticeGeometry(2, 6), (0, 0), 2, 2)


def test_translate_and_mirror():
    a = rectangle(G, (0, 0), 2, 3)
    assert translate(a, (7, 0)) == rectangle(G, (7, 0), 2, 3)
    assert mirror(a, 0) == rectangle(G, (6, 0), 2, 3)
    with pytest.raises(ValidationError):
        translate(a, (1,))


def test_region_is_immutable():
    a = belt(G, 0, 0, 2)
    with pytest.raises((AttributeError, ValueError)):
        a.mask[0, 0] = False
    with pytest.raises(AttributeError):
        a.tag = ()


def test_disk_count():
    g = LatticeGeometry(2, 16)
    d = disk(g, radius=4)
    assert d.size == 52
    # lattice-point count close to the area
    assert abs(d.size - 16 * math.pi) / (16 * math.pi) < 0.05
    brute = sum((x - 7.5) ** 2 + (y - 7.5) ** 2 <= 16 for x in range(16) for y in range(16))
    assert d.size == brute


def test_boundary_bonds():
    assert boundary_bonds(belt(G, 0, 2, 3)) == 2 * 8
    assert boundary_bonds(rectangle(G, (1, 1), 3, 2)) == 2 * (3 + 2)
    assert boundary_bonds(complement(rectangle(G, (1, 1), 3, 2))) == 10


def test_belt_params_structural():
    assert belt_params(belt(G, 1, 6, 3)) == (1, 6, 3)
    m = np.zeros(G.shape, bool)
    m[2:5, :] = True
    assert belt_params(mask_from_predicate(G, lambda x, y: m[x, y])) == (0, 2, 3)
    assert belt_params(rectangle(G, (0, 0), 3, 3)) is None
    assert belt_params(belt(G, 0, 0, 2) | belt(G, 0, 4, 2)) is None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 1), st.integers(-20, 20), st.integers(1, 7))
def test_belt_params_roundtrip(axis, offset, L):
    assert belt_params(belt(G, axis, offset, L)) == (axis, offset % 8, L)


def test_parse_region(tmp_path):
    assert parse_region("belt:x,1,3", G) == belt(G, 0, 1, 3)
    assert parse_region("rect:1,2,3,4", G) == rectangle(G, (1, 2), 3, 4)
    assert parse_region("disk:3.5,3.5,2", G) == disk(G, (3.5, 3.5), 2)
    m = np.zeros(G.shape, int)
    m[0, :3] = 1
    p = tmp_path / "m.txt"
    np.savetxt(p, m, fmt="%d")
    assert parse_region(f"mask:{p}", G).size == 3
    for bad in ("belt:0,0", "rect:1,2", "blob:1", "belt", "belt:0,0,9", f"mask:{tmp_path}/none.txt"):
        with pytest.raises(ValidationError):
            parse_region(bad, G)
