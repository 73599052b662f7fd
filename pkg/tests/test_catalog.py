import math

import pytest

from ctl.core.errors import ConstructionError
from ctl.core.graph import girth
from ctl.services.catalog import catalog_candidates, certified_entry, lookup, mycielski, named_graph
from ctl.services.chromatic import chromatic_number


class TestNamedGraphs:
    """Tests for catalog name resolution."""

    @pytest.mark.parametrize(
        "name, n, e",
        [
            ("K5", 5, 10),
            ("C7", 7, 7),
            ("P4", 4, 3),
            ("W5", 6, 10),
            ("K222", 6, 12),
            ("K123", 6, 11),
            ("petersen", 10, 15),
            ("Petersen", 10, 15),
            ("icosahedron", 12, 30),
            ("dodecahedron", 20, 30),
            ("grotzsch", 11, 20),
        ],
    )
    def test_sizes(self, name, n, e):
        g = named_graph(name)
        assert (g.n, g.num_edges) == (n, e)

    def test_wheel_hub_is_vertex_zero(self):
        assert named_graph("W5").degree(0) == 5

    def test_unknown(self):
        with pytest.raises(KeyError):
            named_graph("tesseract")
        with pytest.raises(KeyError):
            named_graph("C2")


def test_mycielski():
    assert mycielski(2) == named_graph("K2")
    assert (mycielski(3).n, mycielski(3).num_edges) == (5, 5)
    assert chromatic_number(mycielski(3)) == 3
    assert girth(mycielski(5)) == 4
    with pytest.raises(ValueError):
        mycielski(1)


class TestErdosCatalog:
    def test_candidates_smallest_first(self):
        assert catalog_candidates(3, 5) == ["C5", "petersen", "dodecahedron", "kneser-7-3"]
        assert catalog_candidates(5, 4) == ["mycielski-5"]
        assert catalog_candidates(5, 5) == []

    def test_odd_cycle_entry(self):
        entry = certified_entry("C9")
        assert (entry.chi, entry.girth, entry.graph.n) == (3, 9, 9)

    def test_even_cycle_entry_rejected(self):
        with pytest.raises(ConstructionError):
            certified_entry("C8")

    def test_unknown_entry(self):
        with pytest.raises(KeyError):
            certified_entry("heawood")

    @pytest.mark.parametrize("name", ["petersen", "grotzsch", "chvatal", "dodecahedron", "mycielski-5"])
    def test_fixed_entries_certify(self, name):
        entry = certified_entry(name)
        assert chromatic_number(entry.graph) == entry.chi

    @pytest.mark.slow
    def test_kneser_entry_certifies(self):
        entry = certified_entry("kneser-7-3")
        assert (entry.chi, entry.girth) == (3, 6)

    def test_lookup(self):
        assert lookup(3, 6).name == "C7"
        assert lookup(4, 4).name == "grotzsch"
        assert lookup(2, 10).girth == math.inf
        assert lookup(5, 5) is None
