import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctl.core.errors import SizingError
from ctl.core.graph import (
    Graph,
    blow_up,
    complete_multipartite,
    connected_components,
    degeneracy,
    forest_decomposition,
    from_networkx,
    girth,
    is_bipartite,
    iter_bits,
    join,
    min_degree,
    min_degree_fraction,
    odd_girth,
    shortest_cycle,
    to_dot,
    to_networkx,
)
from ctl.services.catalog import named_graph


@st.composite
def small_graphs(draw, max_n: int = 9):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, chosen) if keep])


class TestGraph:
    """Tests for the Graph value type."""

    def test_rejects_asymmetric_adjacency(self):
        """Test that a one-sided edge is refused."""
        with pytest.raises(ValueError, match="not symmetric"):
            Graph(2, [0b10, 0b00])

    def test_rejects_loop(self):
        with pytest.raises(ValueError, match="loop"):
            Graph.from_edges(2, [(1, 1)])

    def test_rejects_label_length_mismatch(self):
        with pytest.raises(ValueError, match="labels"):
            Graph.from_edges(2, [(0, 1)], labels=["a"])

    def test_vertex_cap(self):
        """Test that the 4096-vertex cap raises SizingError."""
        with pytest.raises(SizingError):
            Graph.empty(4097)

    def test_counts_and_neighbours(self):
        g = named_graph("K4")
        assert g.n == 4
        assert g.num_edges == 6
        assert g.neighbors(0) == (1, 2, 3)
        assert g.degrees() == [3, 3, 3, 3]
        assert list(g.edges()) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def test_independence(self):
        c5 = named_graph("C5")
        assert c5.is_independent([0, 2])
        assert not c5.is_independent([0, 1])
        assert c5.is_independent(0)

    def test_induced_subgraph_keeps_labels(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)], labels=["a", "b", "c", "d"])
        sub = g.induced_subgraph([1, 3, 2])
        assert sub.n == 3
        assert sub.labels == ("b", "c", "d")
        assert list(sub.edges()) == [(0, 1), (1, 2)]

    def test_delete_vertices(self):
        g = named_graph("C5").delete_vertices([0])
        assert g.n == 4
        assert g.num_edges == 3

    def test_equality_and_hash(self):
        a = Graph.from_edges(3, [(0, 1)])
        b = Graph.from_edges(3, [(1, 0)])
        assert a == b
        assert hash(a) == hash(b)
        assert a != a.with_labels(["x", "y", "z"])
        assert repr(a) == "Graph(n=3, e=1)"


def test_iter_bits():
    assert list(iter_bits(0b101001)) == [0, 3, 5]
    assert list(iter_bits(0)) == []


def test_min_degree_fraction_is_exact():
    assert min_degree_fraction(named_graph("K222")) == Fraction(2, 3)
    assert min_degree_fraction(named_graph("P3")) == Fraction(1, 3)
    assert min_degree(Graph.empty(0)) == 0
    with pytest.raises(ValueError):
        min_degree_fraction(Graph.empty(0))


class TestCycles:
    """Tests for girth, odd girth and shortest cycles."""

    def test_petersen(self):
        g = named_graph("petersen")
        assert girth(g) == 5
        assert odd_girth(g) == 5

    def test_even_cycle_has_no_odd_cycle(self):
        g = named_graph("C6")
        assert girth(g) == 6
        assert odd_girth(g) == math.inf

    def test_forest(self):
        assert girth(named_graph("P5")) == math.inf
        assert shortest_cycle(named_graph("P5")) is None

    def test_shortest_cycle_is_a_cycle(self):
        g = named_graph("grotzsch")
        cycle = shortest_cycle(g)
        assert len(cycle) == girth(g) == 4
        for i, v in enumerate(cycle):
            assert g.has_edge(v, cycle[(i + 1) % len(cycle)])

    @settings(max_examples=150, deadline=None)
    @given(small_graphs())
    def test_girth_matches_networkx(self, g):
        assert girth(g) == nx.girth(to_networkx(g))

    @settings(max_examples=150, deadline=None)
    @given(small_graphs())
    def test_bipartite_iff_no_odd_cycle(self, g):
        assert is_bipartite(g) == (odd_girth(g) == math.inf)
        assert is_bipartite(g) == nx.is_bipartite(to_networkx(g))


class TestForests:
    def test_decomposition_of_forest(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4)])
        forest = forest_decomposition(g)
        assert forest is not None
        assert [sorted(t.vertices) for t in forest.trees] == [[0, 1, 2], [3, 4], [5]]
        first = forest.trees[0]
        assert first.side_a == frozenset({0, 2})
        assert first.side_b == frozenset({1})
        assert forest.trees[2].side_b == frozenset()

    def test_cycle_is_not_a_forest(self):
        assert forest_decomposition(named_graph("C4")) is None

    def test_within_keeps_original_indices(self):
        g = named_graph("C5")
        forest = forest_decomposition(g, within=0b01110)
        assert forest.vertices == frozenset({1, 2, 3})
        tree = forest.trees[0].as_graph()
        assert tree.n == 3 and tree.num_edges == 2

    def test_components(self):
        g = Graph.from_edges(5, [(0, 3), (1, 2)])
        assert connected_components(g) == [0b01001, 0b00110, 0b10000]


def test_degeneracy():
    assert degeneracy(named_graph("K5"))[0] == 4
    assert degeneracy(named_graph("P5"))[0] == 1
    value, order = degeneracy(named_graph("petersen"))
    assert value == 3
    assert sorted(order) == list(range(10))


class TestBuilders:
    def test_blow_up(self):
        g = blow_up(named_graph("K2"), [2, 3])
        assert g.n == 5
        assert g.num_edges == 6
        assert g.labels == ("0", "0", "1", "1", "1")

    def test_blow_up_zero_deletes(self):
        g = blow_up(named_graph("P3"), [1, 0, 1])
        assert g.n == 2 and g.num_edges == 0

    def test_join(self):
        g = join(named_graph("K2"), Graph.empty(3))
        assert g.n == 5
        assert g.num_edges == 1 + 6

    def test_complete_multipartite(self):
        g = complete_multipartite([2, 2, 2])
        assert g == named_graph("K222").with_labels(["P0", "P0", "P1", "P1", "P2", "P2"])


class TestInterop:
    def test_networkx_round_trip(self):
        g = named_graph("petersen").with_labels([f"v{i}" for i in range(10)])
        assert from_networkx(to_networkx(g)) == g

    def test_to_dot(self):
        dot = to_dot(Graph.from_edges(2, [(0, 1)], labels=["a", "b"]))
        assert dot.startswith("graph G {")
        assert '0 [label="0:a"];' in dot
        assert "0 -- 1;" in dot
