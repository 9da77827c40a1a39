import random
from fractions import Fraction

import pytest

from srrham import codes, recovery
from srrham import hypergraph as hg


def test_edge_and_graph_validation():
    with pytest.raises(ValueError):
        hg.Edge((), 1)
    with pytest.raises(ValueError):
        hg.Edge((2, 1), 1)
    with pytest.raises(ValueError):
        hg.Edge((1, 2), 0)
    e = hg.Edge((1, 2), 1)
    with pytest.raises(ValueError):
        hg.Hypergraph(1, (e,))
    with pytest.raises(ValueError):
        hg.Hypergraph(3, (e, e))


def test_from_recovery_system_edge_counts(classic32_graph, nonsys_graph):
    assert classic32_graph.vertex_count == 7
    assert len(classic32_graph.edges) == 20
    assert nonsys_graph.vertex_count == 7
    assert len(nonsys_graph.edges) == 24


def test_empty_system_gives_edgeless_graph(classic32):
    empty = recovery.RecoverySystem(classic32, ((), (), (), ()), None)
    graph = hg.from_recovery_system(empty)
    assert graph.vertex_count == 7
    assert graph.edges == ()


def test_partial_hypergraph_filtering(classic32_graph):
    assert partial_edges(classic32_graph, [1, 2, 3, 4]) == 20
    assert partial_edges(classic32_graph, []) == 0
    assert partial_edges(classic32_graph, [1, 2]) == 10


def partial_edges(graph, labels):
    return len(hg.partial_hypergraph(graph, labels).edges)


def test_matching_number_worked_values(classic32_graph, nonsys_graph):
    nu, witness = hg.matching_number(classic32_graph)
    assert nu == 5
    assert hg.validate_matching(classic32_graph, witness)
    nu, witness = hg.matching_number(nonsys_graph)
    assert nu == 3
    assert hg.validate_matching(nonsys_graph, witness)


def test_matching_single_edge():
    graph = hg.Hypergraph(3, (hg.Edge((1, 2), 1),))
    assert hg.matching_number(graph)[0] == 1


def test_transversal_worked_values(classic32_graph, nonsys_graph, sys42_graph):
    tau, witness = hg.transversal_number(nonsys_graph)
    assert tau == 3
    assert hg.validate_transversal(nonsys_graph, witness)
    assert hg.validate_transversal(nonsys_graph, (3, 4, 7))
    tau, witness = hg.transversal_number(classic32_graph)
    assert tau == 5
    assert hg.validate_transversal(classic32_graph, witness)
    tau, witness = hg.transversal_number(sys42_graph)
    assert tau == 11
    assert hg.validate_transversal(sys42_graph, witness)


def test_fractional_matching_worked_values(classic32_graph, nonsys_graph):
    value, weights = hg.fractional_matching_number(classic32_graph)
    assert value == 5
    assert hg.validate_fractional(classic32_graph, weights)
    part = hg.partial_hypergraph(nonsys_graph, [2])
    value, weights = hg.fractional_matching_number(part)
    assert value == Fraction(7, 3)
    nonzero = {e: w for e, w in weights.items() if w}
    assert len(nonzero) == 7
    assert set(nonzero.values()) == {Fraction(1, 3)}


def test_fractional_matching_edgeless():
    graph = hg.Hypergraph(4, ())
    value, weights = hg.fractional_matching_number(graph)
    assert value == 0 and weights == {}


def test_full_graph_equalities(classic32_graph, sys42_graph, sys52_graph):
    for graph, expected in (
        (classic32_graph, 5),
        (sys42_graph, 11),
        (sys52_graph, 26),
    ):
        stats = hg.compute_stats(graph)
        assert (stats.nu, stats.tau) == (expected, expected)
        assert stats.mu_f == expected


def test_strict_sandwich_on_partial_graph(sys42_graph):
    # One symbol's edges: singleton + eight 7-sets that pairwise intersect.
    part = hg.partial_hypergraph(sys42_graph, [1])
    stats = hg.compute_stats(part)
    assert stats.nu == 2
    assert stats.mu_f == 3
    assert stats.tau >= 3
    assert stats.nu <= stats.mu_f <= stats.tau


def test_matching_at_least_systematic_columns(classic32_graph, nonsys_graph):
    # Both worked codes: 4 and 2 systematic columns respectively.
    assert hg.matching_number(classic32_graph)[0] >= 4
    assert hg.matching_number(nonsys_graph)[0] >= 2


def test_sandwich_on_random_partials(classic32_graph, sys42_graph):
    rng = random.Random(11)
    for graph, k in ((classic32_graph, 4), (sys42_graph, 11)):
        for _ in range(12):
            size = rng.randrange(0, k + 1)
            labels = rng.sample(range(1, k + 1), size)
            stats = hg.compute_stats(hg.partial_hypergraph(graph, labels))
            assert stats.nu <= stats.mu_f <= stats.tau


def test_uniformized_bound_small_subsets_r4(sys42_graph):
    from itertools import combinations

    for size in (0, 1, 2, 3):
        for subset in combinations(range(1, 12), size):
            part = hg.partial_hypergraph(sys42_graph, subset)
            value, _ = hg.fractional_matching_number(part)
            bound = size + 2 - Fraction(size - 1, 2 ** 3 - 1)
            assert value <= bound


def test_stats_deterministic_and_json(nonsys_graph):
    first = hg.compute_stats(nonsys_graph)
    second = hg.compute_stats(nonsys_graph)
    assert first.to_json_dict() == second.to_json_dict()
    data = first.to_json_dict()
    assert data["nu"] == 3 and data["tau"] == 3 and data["mu_f"] == "3"
    assert all(isinstance(v, int) for v in data["witness_transversal"])
