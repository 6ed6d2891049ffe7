"""Cartesian product and label arithmetic tests."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pstlab import (
    InvalidSizeError,
    OccupationLabel,
    ResourceCapError,
    cartesian_power,
    cartesian_product,
    eigh,
    hypercube,
    index_of_label,
    label_of_index,
    propagator_factorization_check,
    simple_path,
    weighted_path,
)


def test_label_index_examples():
    assert label_of_index(0, 4, 2).sites == (1, 1)
    assert label_of_index(1, 4, 2).sites == (1, 2)
    # first coordinate is the most significant digit
    assert label_of_index(4, 4, 2).sites == (2, 1)
    assert index_of_label(OccupationLabel((1, 2), 4)) == 1
    assert index_of_label(OccupationLabel((3, 1, 4), 4)) == 2 * 16 + 0 * 4 + 3


def test_label_round_trip():
    n, k = 3, 3
    for i in range(n**k):
        lab = label_of_index(i, n, k)
        assert lab.index == i
        assert index_of_label(lab) == i
    seen = {label_of_index(i, n, k).sites for i in range(n**k)}
    assert seen == set(itertools.product(range(1, n + 1), repeat=k))


def test_label_predicates():
    assert OccupationLabel((1, 3, 3), 4).has_repeat()
    assert not OccupationLabel((1, 2, 4), 4).has_repeat()
    assert OccupationLabel((1, 2, 4), 4).is_ascending()
    assert not OccupationLabel((2, 1), 4).is_ascending()
    assert OccupationLabel((2,), 5).k == 1


def test_label_validation():
    with pytest.raises(InvalidSizeError):
        OccupationLabel((0, 1), 3)
    with pytest.raises(InvalidSizeError):
        OccupationLabel((1, 4), 3)
    with pytest.raises(InvalidSizeError):
        OccupationLabel((), 3)
    with pytest.raises(InvalidSizeError):
        label_of_index(9, 3, 2)
    with pytest.raises(InvalidSizeError):
        label_of_index(-1, 3, 2)


def test_product_neighbor_weights():
    g = weighted_path(4)
    gg = cartesian_product(g, g)
    assert gg.n == 16
    # vertex (1,2) has index 1; neighbours (1,1),(1,3),(2,2)
    i = OccupationLabel((1, 2), 4).index
    row = gg.adjacency[i]
    nz = {j: row[j] for j in np.nonzero(row)[0]}
    expected = {
        OccupationLabel((1, 1), 4).index: math.sqrt(3.0),
        OccupationLabel((1, 3), 4).index: 2.0,
        OccupationLabel((2, 2), 4).index: math.sqrt(3.0),
    }
    assert set(nz) == set(expected)
    for j, w in expected.items():
        assert nz[j] == pytest.approx(w, abs=0.0)


def test_product_spectrum_is_pairwise_sums():
    g = weighted_path(3)
    h = weighted_path(4)
    vals = eigh(cartesian_product(g, h)).eigenvalues
    a = eigh(g).eigenvalues
    b = eigh(h).eigenvalues
    expected = np.sort(np.add.outer(a, b).ravel())
    assert np.abs(vals - expected).max() <= 1e-8


def test_power_of_edge_is_hypercube():
    p2 = simple_path(2)
    for k in (1, 2, 3, 4):
        assert np.array_equal(cartesian_power(p2, k).adjacency, hypercube(k).adjacency)


def test_power_one_is_copy():
    g = weighted_path(5)
    assert np.array_equal(cartesian_power(g, 1).adjacency, g.adjacency)


def test_power_matches_iterated_product():
    g = weighted_path(3)
    via_product = cartesian_product(cartesian_product(g, g), g)
    assert np.array_equal(cartesian_power(g, 3).adjacency, via_product.adjacency)


def test_summands_commute():
    g = weighted_path(3)
    h = weighted_path(4)
    left = np.kron(g.adjacency, np.eye(h.n))
    right = np.kron(np.eye(g.n), h.adjacency)
    assert np.abs(left @ right - right @ left).max() <= 1e-12
    assert np.abs(left + right - cartesian_product(g, h).adjacency).max() == 0.0


@pytest.mark.parametrize("n,k,t", [(3, 2, 0.7), (4, 2, math.pi / 2.0), (3, 3, 1.3)])
def test_propagator_factorization(n, k, t):
    assert propagator_factorization_check(weighted_path(n), k, t) <= 1e-10


def test_power_cap():
    with pytest.raises(ResourceCapError):
        cartesian_power(weighted_path(10), 5)
    with pytest.raises(ResourceCapError):
        cartesian_product(weighted_path(5), weighted_path(5), cap=24)
    assert cartesian_product(weighted_path(5), weighted_path(5), cap=25).n == 25


def test_power_k_validation():
    with pytest.raises(InvalidSizeError):
        cartesian_power(weighted_path(3), 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=4), st.integers(min_value=1, max_value=3))
def test_label_round_trip_property(n, k):
    for i in range(0, n**k, max(1, n**k // 7)):
        assert label_of_index(i, n, k).index == i
