"""Shared fixtures: ad-hoc graph construction and the partition fixture zoo."""

from __future__ import annotations

import numpy as np
import pytest

from pstlab import (
    Partition,
    WeightedGraph,
    hypercube,
    orbit_partition,
    reflection_permutation,
    simple_path,
    symmetric_power,
    weighted_path,
    deletion_mask,
    indistinguishability_partition,
    mirror_partition,
)


def graph_from_edges(n: int, edges: list[tuple[int, int, float]]) -> WeightedGraph:
    a = np.zeros((n, n))
    for u, v, w in edges:
        a[u - 1, v - 1] = w
        a[v - 1, u - 1] = w
    return WeightedGraph(n, a)


def cycle_graph(n: int) -> WeightedGraph:
    edges = [(v, v + 1, 1.0) for v in range(1, n)] + [(1, n, 1.0)]
    return graph_from_edges(n, edges)


def hamming_partition(dim: int) -> Partition:
    """Cells of a hypercube's vertices grouped by binary weight."""
    cells = tuple(
        tuple(v + 1 for v in range(2**dim) if bin(v).count("1") == w)
        for w in range(dim + 1)
    )
    return Partition(2**dim, cells)


def mirror_path_partition(n: int) -> Partition:
    g = weighted_path(n)
    return orbit_partition(g, reflection_permutation(n))


def _zoo() -> list[tuple[str, WeightedGraph, Partition, bool]]:
    fixtures: list[tuple[str, WeightedGraph, Partition, bool]] = []

    fixtures.append(("q3-hamming", hypercube(3), hamming_partition(3), True))
    fixtures.append(("q4-hamming", hypercube(4), hamming_partition(4), True))
    for n in range(4, 9):
        fixtures.append((f"p{n}-mirror", weighted_path(n), mirror_path_partition(n), True))
    g5 = weighted_path(5)
    fixtures.append(
        ("p5-singletons", g5, Partition(5, tuple((v,) for v in range(1, 6))), True)
    )
    fixtures.append(("q3-one-cell", hypercube(3), Partition(8, (tuple(range(1, 9)),)), True))
    fixtures.append(("c4-one-cell", cycle_graph(4), Partition(4, ((1, 2, 3, 4),)), True))
    for n, k in ((4, 2), (5, 2), (6, 2)):
        ident = symmetric_power(weighted_path(n), k)
        fixtures.append((f"sp{n}{k}-mirror", ident, mirror_partition(ident, n, k), True))
    sp42 = symmetric_power(weighted_path(4), 2)
    fixtures.append(
        ("sp42-collapse", sp42, Partition(6, ((1,), (2,), (3, 4), (5,), (6,))), True)
    )
    from pstlab import apply_deletion, cartesian_power

    for n, k in ((4, 2), (5, 2)):
        mask = deletion_mask(n, k)
        kept = apply_deletion(cartesian_power(weighted_path(n), k), mask)
        fixtures.append(
            (f"kept{n}{k}-multiset", kept, indistinguishability_partition(mask, n, k), True)
        )

    fixtures.append(("p3-lopsided", simple_path(3), Partition(3, ((1, 2), (3,))), False))
    fixtures.append(("p4-halves", weighted_path(4), Partition(4, ((1, 2), (3, 4))), False))
    fixtures.append(
        ("p5-unbalanced", weighted_path(5), Partition(5, ((1, 2), (3, 4, 5))), False)
    )
    fixtures.append(
        ("q3-split", hypercube(3), Partition(8, ((1, 2, 3), (4, 5, 6, 7, 8))), False)
    )
    fixtures.append(
        ("p6-parity", weighted_path(6), Partition(6, ((1, 3, 5), (2, 4, 6))), False)
    )
    skew = graph_from_edges(4, [(1, 2, 1.0), (2, 3, 2.0), (3, 4, 3.0)])
    fixtures.append(("skew-mirror", skew, Partition(4, ((1, 4), (2, 3))), False))

    return fixtures


@pytest.fixture(scope="session")
def partition_zoo() -> list[tuple[str, WeightedGraph, Partition, bool]]:
    return _zoo()
