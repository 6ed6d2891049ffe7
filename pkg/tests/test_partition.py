"""Weighted equitable partition machinery, exercised over the fixture zoo."""

import json
import math

import numpy as np
import pytest

from pstlab import (
    DegeneratePartitionError,
    FormatError,
    NotEquitableError,
    Partition,
    PreconditionError,
    WeightedGraph,
    check_equitable,
    eigh,
    hypercube,
    load_partition,
    max_eigenvalue_preservation,
    normalized_partition_matrix,
    orbit_partition,
    qqt_eigenvalue_check,
    quotient,
    quotient_spectrum_subset,
    reflection_permutation,
    save_partition,
    singleton_evolution_check,
    singleton_partition,
    verify_theorem_equivalences,
    vertex_weight,
    weighted_path,
)

from conftest import graph_from_edges, hamming_partition, mirror_path_partition


def test_vertex_weight_examples():
    g = weighted_path(4)
    assert vertex_weight(g, 1) == pytest.approx(math.sqrt(3.0), abs=1e-15)
    assert vertex_weight(g, 2) == pytest.approx(math.sqrt(7.0), abs=1e-15)
    isolated = graph_from_edges(3, [(1, 2, 1.0)])
    assert vertex_weight(isolated, 3) == 0.0


def test_partition_validation():
    with pytest.raises(PreconditionError):
        Partition(3, ((1, 2), (2, 3)))
    with pytest.raises(PreconditionError):
        Partition(3, ((1, 2),))
    with pytest.raises(PreconditionError):
        Partition(3, ((1, 2, 3), ()))
    with pytest.raises(PreconditionError):
        Partition(3, ((1, 2), (4,)))
    p = Partition(3, ((3, 1), (2,)))
    assert p.cells == ((1, 3), (2,))  # members sorted inside each cell
    assert p.m == 2
    assert list(p.cell_index) == [0, 1, 0]


def test_singleton_partition():
    p = singleton_partition(4)
    assert p.cells == ((1,), (2,), (3,), (4,))


def test_q_entries_hypercube_hamming():
    g = hypercube(3)
    pm = normalized_partition_matrix(g, hamming_partition(3))
    vals = sorted(set(round(float(x), 12) for x in pm.q.ravel() if x != 0.0))
    assert vals == [round(1.0 / math.sqrt(3.0), 12), 1.0]


def test_q_entries_mirror_path():
    g = weighted_path(4)
    pm = normalized_partition_matrix(g, mirror_path_partition(4))
    nz = pm.q[pm.q != 0.0]
    assert np.abs(nz - 1.0 / math.sqrt(2.0)).max() <= 1e-15


def test_q_orthonormal_columns_across_zoo(partition_zoo):
    for name, g, p, _ in partition_zoo:
        pm = normalized_partition_matrix(g, p)
        dev = np.abs(pm.q.T @ pm.q - np.eye(pm.m)).max()
        assert dev <= 1e-12, name


def test_degenerate_cell_rejected():
    g = graph_from_edges(3, [(1, 2, 1.0)])
    with pytest.raises(DegeneratePartitionError):
        normalized_partition_matrix(g, Partition(3, ((1, 2), (3,))))


def test_check_equitable_matches_zoo_expectations(partition_zoo):
    for name, g, p, expected in partition_zoo:
        report = check_equitable(g, p)
        assert report.equitable == expected, name
        if expected:
            assert report.max_spread <= 1e-10, name
        else:
            assert report.max_spread > 1e-10, name
            assert 1 <= report.worst_vertex <= g.n
            assert 1 <= report.worst_cell <= p.m
            assert 1 <= report.worst_target_cell <= p.m


def test_four_way_equivalence_across_zoo(partition_zoo):
    for name, g, p, expected in partition_zoo:
        rep = verify_theorem_equivalences(g, p)
        assert rep.agree, name
        assert rep.equitable == expected, name
        assert rep.column_space_invariant == expected, name
        assert rep.projector_commutes == expected, name
        assert rep.intertwiner_exists == expected, name


def test_qqt_projector_spectrum(partition_zoo):
    for name, g, p, _ in partition_zoo:
        pm = normalized_partition_matrix(g, p)
        assert qqt_eigenvalue_check(pm), name


def test_quotient_of_hypercube_is_weighted_path():
    for dim in (3, 4):
        g = hypercube(dim)
        pm = normalized_partition_matrix(g, hamming_partition(dim))
        b = quotient(g, pm)
        assert np.abs(b.adjacency - weighted_path(dim + 1).adjacency).max() <= 1e-12


def test_quotient_unweighted_geometric_mean():
    # For a regular unweighted graph the quotient entry is sqrt(d_ij * d_ji).
    g = hypercube(3)
    pm = normalized_partition_matrix(g, hamming_partition(3))
    b = quotient(g, pm)
    assert b.adjacency[0, 1] == pytest.approx(math.sqrt(3.0 * 1.0), abs=1e-12)
    assert b.adjacency[1, 2] == pytest.approx(math.sqrt(2.0 * 2.0), abs=1e-12)


def test_quotient_rejects_non_equitable():
    g = weighted_path(4)
    pm = normalized_partition_matrix(g, Partition(4, ((1, 2), (3, 4))))
    with pytest.raises(NotEquitableError) as err:
        quotient(g, pm)
    assert "cell" in str(err.value)


def test_quotient_spectrum_subset(partition_zoo):
    for name, g, p, expected in partition_zoo:
        if not expected:
            continue
        pm = normalized_partition_matrix(g, p)
        assert quotient_spectrum_subset(g, pm), name


def test_eigenvector_lift(partition_zoo):
    # Quotient eigenvectors lift through Q to eigenvectors of the parent.
    for name, g, p, expected in partition_zoo:
        if not expected:
            continue
        pm = normalized_partition_matrix(g, p)
        b = quotient(g, pm)
        vals, vecs = eigh(b).eigenvalues, eigh(b).eigenvectors
        lifted = pm.q @ vecs
        residual = np.abs(g.adjacency @ lifted - lifted * vals[None, :]).max()
        assert residual <= 1e-9, name


def test_max_eigenvalue_preservation():
    g = hypercube(3)
    pm = normalized_partition_matrix(g, hamming_partition(3))
    assert max_eigenvalue_preservation(g, pm)
    g4 = weighted_path(4)
    assert max_eigenvalue_preservation(g4, normalized_partition_matrix(g4, mirror_path_partition(4)))


def test_max_eigenvalue_preconditions():
    neg = graph_from_edges(2, [(1, 2, -1.0)])
    with pytest.raises(PreconditionError):
        max_eigenvalue_preservation(neg, normalized_partition_matrix(neg, singleton_partition(2)))
    disconnected = graph_from_edges(4, [(1, 2, 1.0), (3, 4, 1.0)])
    pm = normalized_partition_matrix(disconnected, singleton_partition(4))
    with pytest.raises(PreconditionError):
        max_eigenvalue_preservation(disconnected, pm)


def test_singleton_evolution_endpoints():
    g = hypercube(3)
    pm = normalized_partition_matrix(g, hamming_partition(3))
    for t in (0.3, math.pi / 2.0, 1.7):
        assert singleton_evolution_check(g, pm, 1, 8, t) <= 1e-10


def test_singleton_evolution_requires_singletons():
    g = hypercube(3)
    pm = normalized_partition_matrix(g, hamming_partition(3))
    with pytest.raises(PreconditionError):
        singleton_evolution_check(g, pm, 1, 2, 0.5)


def test_orbit_partition_reflection():
    g = weighted_path(4)
    p = orbit_partition(g, reflection_permutation(4))
    assert p.cells == ((1, 4), (2, 3))
    p5 = orbit_partition(weighted_path(5), reflection_permutation(5))
    assert p5.cells == ((1, 5), (2, 4), (3,))


def test_orbit_partition_identity():
    g = weighted_path(3)
    assert orbit_partition(g, np.arange(3)).cells == ((1,), (2,), (3,))


def test_orbit_partition_rejects_non_automorphism():
    g = weighted_path(3)  # weights sqrt(2), sqrt(2): swapping 1,2 breaks it
    perm = np.array([1, 0, 2])
    g_asym = graph_from_edges(3, [(1, 2, 1.0), (2, 3, 2.0)])
    with pytest.raises(PreconditionError):
        orbit_partition(g_asym, perm)
    with pytest.raises(PreconditionError):
        orbit_partition(g, np.array([0, 0, 1]))
    with pytest.raises(PreconditionError):
        orbit_partition(g, np.array([0, 1]))


def test_partition_round_trip():
    p = Partition(5, ((1, 5), (2, 4), (3,)))
    text = save_partition(p)
    assert load_partition(text) == p
    doc = json.loads(text)
    assert set(doc) == {"n", "cells"}


def test_load_partition_rejects_malformed():
    bad_docs = [
        '{"n": 3}',
        '{"cells": [[1, 2, 3]]}',
        '{"n": 3, "cells": [[1, 2], [2, 3]]}',
        '{"n": 3, "cells": [[1, 2]]}',
        '{"n": 3, "cells": [[1, 2], [3]], "extra": 1}',
        '{"n": 3, "cells": [[1, 2], [3.5]]}',
        '{"n": 3, "cells": "nope"}',
        '{"n": true, "cells": [[1]]}',
        "not json at all",
    ]
    for doc in bad_docs:
        with pytest.raises(FormatError):
            load_partition(doc)


def test_report_b_shape_and_values():
    # report.b holds the directed cell means; the symmetric quotient comes
    # from quotient(). For the hypercube the means are the neighbour counts.
    g = hypercube(3)
    report = check_equitable(g, hamming_partition(3))
    assert report.b.shape == (4, 4)
    counts = np.array(
        [
            [0.0, 3.0, 0.0, 0.0],
            [1.0, 0.0, 2.0, 0.0],
            [0.0, 2.0, 0.0, 1.0],
            [0.0, 0.0, 3.0, 0.0],
        ]
    )
    assert np.abs(report.b - counts).max() <= 1e-12
