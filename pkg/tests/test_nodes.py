import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lissphere.curve import CurveParams, eval_curve, sample_times
from lissphere.nodes import (build_index_set, cartesian_to_spherical, class_map, cover_points, curve_cover,
                             in_index_set, node_point, spherical_to_cartesian)

PAIRS = [(7, 6), (6, 6), (4, 4), (15, 16), (39, 40), (3, 2), (1, 2), (9, 6)]


@pytest.mark.parametrize("m", PAIRS)
def test_cardinalities(m):
    idx = build_index_set(m)
    m1, m2 = m
    assert len(idx) == m1 * m2
    assert int(idx.in_IS.sum()) == (m1 - 1) * m2 + 2
    assert len(idx.class0) + len(idx.class1) == len(idx)


@pytest.mark.parametrize("m", PAIRS)
def test_membership_matches_enumeration(m):
    idx = build_index_set(m)
    brute = {(a, b) for a in range(m[0] + 1) for b in range(2 * m[1]) if in_index_set(m, a, b)}
    assert brute == set(zip(idx.i1.tolist(), idx.i2.tolist()))


@pytest.mark.parametrize("m", PAIRS)
def test_reduced_points_are_distinct(m):
    idx = build_index_set(m)
    x = idx.points[idx.in_IS]
    d = np.linalg.norm(x[:, None] - x[None], axis=-1) + np.eye(len(x))
    assert d.min() > 1e-8
    # all pole duplicates collapse
    assert np.all(idx.points[idx.i1 == 0] == [0, 0, 1])
    assert np.all(idx.points[idx.i1 == m[0]] == [0, 0, -1])


def test_node_point():
    sp, x = node_point((7, 6), (7, 1))
    assert sp.theta == pytest.approx(np.pi)
    assert tuple(x) == (0.0, 0.0, -1.0)
    with pytest.raises(ValueError):
        node_point((7, 6), (1, 2))


@pytest.mark.parametrize("m", [(7, 6), (6, 6), (4, 4), (9, 6), (8, 4), (15, 16), (5, 10)])
def test_class_map_fibres(m):
    m1, m2 = m
    g = math.gcd(m1, m2)
    counts = {}
    for rho in range(g):
        for l in range(2 * m1 * m2 // g):
            d = class_map(m, l, rho)
            assert in_index_set(m, *d.i)
            # the defining congruences, checked by brute force over v
            assert (d.i.i1 - d.v * l) % (2 * m1) == 0
            assert (d.i.i2 - (l - 2 * rho * m2 // g - (1 - d.v) // 2 * m2)) % (2 * m2) == 0
            counts[tuple(d.i)] = counts.get(tuple(d.i), 0) + 1
    assert len(counts) == m1 * m2
    assert set(counts.values()) == {2}


def test_class_map_ranges():
    with pytest.raises(ValueError):
        class_map((7, 6), 84, 0)
    with pytest.raises(ValueError):
        class_map((6, 6), 0, 6)


@pytest.mark.parametrize("m", [(m1, m2) for m1 in range(1, 17) for m2 in range(2, 17, 2) if m1 * m2 <= 64])
def test_curve_cover_equals_node_set(m):
    # the union of the rotated curves sampled at t_l is exactly the node set
    idx = build_index_set(m)
    reduced = idx.points[idx.in_IS]
    d = np.linalg.norm(cover_points(m)[:, None] - reduced[None], axis=-1)
    assert d.min(axis=1).max() < 1e-9 and d.min(axis=0).max() < 1e-9
    x = cover_points(m)
    cover = curve_cover(m)
    pts = np.array([idx.points[idx.position(i)] for i in cover.values()])
    np.testing.assert_allclose(x, pts, atol=1e-12)
    assert {tuple(i) for i in cover.values()} == set(zip(idx.i1.tolist(), idx.i2.tolist()))


@settings(max_examples=100, deadline=None)
@given(st.floats(0, np.pi), st.floats(0, 2 * np.pi, exclude_max=True))
def test_spherical_round_trip(theta, phi):
    t, p = cartesian_to_spherical(spherical_to_cartesian(theta, phi))
    assert abs(t - theta) < 1e-7
    if 1e-6 < theta < np.pi - 1e-6:
        assert abs(np.angle(np.exp(1j * (p - phi)))) < 1e-7
