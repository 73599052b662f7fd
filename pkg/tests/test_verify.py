from dataclasses import replace
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from ctl.core.budget import TimeBudget
from ctl.core.errors import BudgetExceededError
from ctl.core.graph import Graph, from_networkx, to_networkx
from ctl.models import ClassTag, Coloring, ForestWitness, ThresholdReport
from ctl.services.catalog import named_graph
from ctl.services.classify import chromatic_threshold
from ctl.services.verify import (
    check_min_degree,
    check_threshold_witness,
    common_neighbors,
    contains_subgraph,
    embed_forest,
    odd_cycle_oracle,
    scan_triangles,
)


def assert_embedding(host: Graph, pattern: Graph, embedding) -> None:
    mapping = embedding.mapping
    assert len(mapping) == pattern.n
    assert len(set(mapping)) == pattern.n
    for u, v in pattern.edges():
        assert host.has_edge(mapping[u], mapping[v])


def random_forest(rng: np.random.Generator, m: int) -> Graph:
    edges = []
    for v in range(1, m):
        if rng.random() < 0.8:
            edges.append((int(rng.integers(0, v)), v))
    return Graph.from_edges(m, edges)


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return Graph.from_edges(n, [(int(u), int(v)) for u, v in zip(*np.nonzero(upper))])


class TestStructuralQueries:
    def test_scan_triangles(self):
        assert scan_triangles(named_graph("K4")) == 4
        assert scan_triangles(named_graph("K5")) == 10
        assert scan_triangles(named_graph("petersen")) == 0
        assert scan_triangles(named_graph("W5")) == 5

    def test_scan_triangles_matches_networkx(self):
        g = named_graph("icosahedron")
        assert scan_triangles(g) == sum(nx.triangles(to_networkx(g)).values()) // 3

    def test_common_neighbors(self):
        g = named_graph("C5")
        assert common_neighbors(g, [0, 2]) == frozenset({1})
        assert common_neighbors(g, [0, 1]) == frozenset()
        assert common_neighbors(g, []) == frozenset(range(5))

    def test_check_min_degree(self):
        g = named_graph("K222")
        assert check_min_degree(g, Fraction(2, 3))
        assert not check_min_degree(g, Fraction(2, 3) + Fraction(1, 100))


class TestContainsSubgraph:
    """Tests for the exact subgraph search."""

    def test_examples(self):
        assert contains_subgraph(named_graph("petersen"), named_graph("C5")) is not None
        assert contains_subgraph(named_graph("petersen"), named_graph("C4")) is None
        assert contains_subgraph(named_graph("K4"), named_graph("K3")) is not None
        assert contains_subgraph(named_graph("C6"), named_graph("K3")) is None

    def test_embedding_is_valid(self):
        host = named_graph("icosahedron")
        pattern = named_graph("W5")
        embedding = contains_subgraph(host, pattern)
        assert embedding is not None
        assert_embedding(host, pattern, embedding)

    def test_empty_pattern(self):
        assert contains_subgraph(named_graph("K3"), Graph.empty(0)).mapping == ()

    def test_pattern_larger_than_host(self):
        assert contains_subgraph(named_graph("K3"), named_graph("P4")) is None

    def test_budget_exhaustion_names_stage(self):
        with pytest.raises(BudgetExceededError) as info:
            contains_subgraph(named_graph("K222"), named_graph("K4"), TimeBudget(-1, check_every=1))
        assert info.value.stage == "subgraph_search"

    @pytest.mark.slow
    def test_matches_networkx_on_small_hosts(self):
        """Hosts up to 7 vertices against a monomorphism oracle."""
        patterns = [named_graph(name) for name in ("K3", "C4", "P4", "C5", "K4")]
        for G in nx.graph_atlas_g()[1::3]:
            host = from_networkx(G)
            for pattern in patterns:
                found = contains_subgraph(host, pattern)
                expected = GraphMatcher(G, to_networkx(pattern)).subgraph_is_monomorphic()
                assert (found is not None) == expected
                if found is not None:
                    assert_embedding(host, pattern, found)


class TestEmbedForest:
    def test_rejects_cycle(self):
        with pytest.raises(ValueError):
            embed_forest(named_graph("K5"), named_graph("C3"))

    def test_path_in_clique(self):
        host = named_graph("K5")
        pattern = named_graph("P4")
        assert_embedding(host, pattern, embed_forest(host, pattern))

    def test_falls_back_without_core(self):
        host = named_graph("P5")
        pattern = named_graph("P3")
        assert_embedding(host, pattern, embed_forest(host, pattern))

    def test_dense_hosts(self):
        """Every host with ``e >= |f| * n`` receives the forest."""
        checked = 0
        for seed in range(500):
            rng = np.random.default_rng(seed)
            m = int(rng.integers(1, 6))
            n = int(rng.integers(2 * m + 2, 30))
            host = random_graph(rng, n, 0.6)
            if host.num_edges < m * n:
                continue
            forest = random_forest(rng, m)
            embedding = embed_forest(host, forest)
            assert embedding is not None
            assert_embedding(host, forest, embedding)
            checked += 1
        assert checked > 200


class TestOddCycleOracle:
    def test_c5_two_vertices_of_s(self):
        assert odd_cycle_oracle(named_graph("C5"), [0, 2], 5) == []

    def test_c5_single_vertex(self):
        assert odd_cycle_oracle(named_graph("C5"), [0], 5) == [(0, 1, 2, 3, 4)]

    def test_k4_triangles(self):
        cycles = odd_cycle_oracle(named_graph("K4"), [], 4)
        assert sorted(cycles) == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]

    def test_length_limit(self):
        assert odd_cycle_oracle(named_graph("C7"), [], 5) == []
        with pytest.raises(ValueError):
            odd_cycle_oracle(named_graph("C5"), [], 6)

    def test_petersen_counts(self):
        # Petersen has 12 five-cycles and 0 triangles
        assert len(odd_cycle_oracle(named_graph("petersen"), [], 5)) == 12


class TestCheckThresholdWitness:
    """Mutating a valid report must make the checker fail."""

    @pytest.fixture
    def c5_report(self):
        return chromatic_threshold(named_graph("C5"))

    def test_valid(self, c5_report):
        assert check_threshold_witness(named_graph("C5"), c5_report).passed

    def test_wrong_threshold(self, c5_report):
        check = check_threshold_witness(named_graph("C5"), replace(c5_report, threshold=Fraction(1, 3)))
        assert not check
        assert any(v.startswith("threshold") for v in check.violations)

    def test_wrong_chi(self, c5_report):
        check = check_threshold_witness(named_graph("C5"), replace(c5_report, chi=4))
        assert any(v.startswith("chi") for v in check.violations)

    def test_missing_witness(self, c5_report):
        check = check_threshold_witness(named_graph("C5"), replace(c5_report, near_acyclic_witness=None))
        assert "near_acyclic_witness: missing" in check.violations

    def test_s_set_not_independent(self, c5_report):
        witness = c5_report.near_acyclic_witness
        (v,) = sorted(witness.s_set)[:1]
        bad = replace(witness, s_set=witness.s_set | {(v + 1) % 5})
        check = check_threshold_witness(named_graph("C5"), replace(c5_report, near_acyclic_witness=bad))
        assert not check.passed

    def test_forest_pair_indices(self):
        h = named_graph("C5")
        coloring = Coloring((frozenset({0, 2}), frozenset({1, 3}), frozenset({4})))
        report = ThresholdReport(
            chi=3, class_tag=ClassTag.LAMBDA, threshold=Fraction(1, 3), forest_witness=ForestWitness(coloring, (0, 1))
        )
        # P4 is a forest, so this is a valid LAMBDA-shaped witness
        assert check_threshold_witness(h, report).passed
        bad = ForestWitness(coloring, (0, 0))
        assert not check_threshold_witness(h, replace(report, forest_witness=bad)).passed

    def test_improper_coloring(self):
        h = named_graph("K3")
        coloring = Coloring((frozenset({0, 1}), frozenset({2})))
        report = ThresholdReport(
            chi=3, class_tag=ClassTag.LAMBDA, threshold=Fraction(1, 3), forest_witness=ForestWitness(coloring, (0, 1))
        )
        check = check_threshold_witness(h, report)
        assert any("not independent" in v for v in check.violations)

    def test_pi_report_with_witness(self):
        h = named_graph("K222")
        report = chromatic_threshold(h)
        bogus = ForestWitness(Coloring((frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5}))), (0, 1))
        check = check_threshold_witness(h, replace(report, forest_witness=bogus))
        assert "witnesses: PI reports carry no witnesses" in check.violations

    def test_deep_check_catches_false_pi(self):
        h = named_graph("C5")
        report = ThresholdReport(chi=3, class_tag=ClassTag.PI, threshold=Fraction(1, 2))
        assert check_threshold_witness(h, report).passed
        deep = check_threshold_witness(h, report, deep=True)
        assert not deep.passed
        assert any(v.startswith("deep.") for v in deep.violations)

    def test_deep_check_accepts_true_pi(self):
        h = named_graph("K222")
        assert check_threshold_witness(h, chromatic_threshold(h), deep=True).passed

    def test_deep_check_accepts_lambda(self):
        h = named_graph("K3")
        assert check_threshold_witness(h, chromatic_threshold(h), deep=True).passed
