"""Named graphs and the certified catalog of (k, l)-Erdős graphs.

Named graphs come from networkx generators. Every Erdős catalog entry is
certified on first use by computing its chromatic number and girth exactly;
an entry whose certificate disagrees with its declared values is a hard error.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import networkx as nx

from ctl.core.errors import ConstructionError
from ctl.core.graph import Graph, Length, from_networkx, girth, join
from ctl.services.chromatic import chromatic_number

logger = logging.getLogger(__name__)

__all__ = ["named_graph", "NAMED_GRAPHS", "mycielski", "ErdosEntry", "certified_entry", "catalog_candidates", "lookup"]


def _from_nx(G: nx.Graph) -> Graph:
    return from_networkx(nx.convert_node_labels_to_integers(G, ordering="sorted"))


def mycielski(k: int) -> Graph:
    """Mycielski iterate ``M_k``: chromatic number ``k``, triangle-free for ``k >= 2``."""
    if k < 2:
        raise ValueError(f"Mycielski iterate needs k >= 2, got {k}")
    return _from_nx(nx.mycielski_graph(k))


NAMED_GRAPHS: Dict[str, Callable[[], Graph]] = {
    "petersen": lambda: _from_nx(nx.petersen_graph()),
    "dodecahedron": lambda: _from_nx(nx.dodecahedral_graph()),
    "icosahedron": lambda: _from_nx(nx.icosahedral_graph()),
    "octahedron": lambda: _from_nx(nx.octahedral_graph()),
    "grotzsch": lambda: mycielski(4),
    "chvatal": lambda: _from_nx(nx.chvatal_graph()),
}

_PATTERN = re.compile(r"^(K|C|P|W)(\d+)$|^K(\d)(\d)(\d)$")


def named_graph(name: str) -> Graph:
    """Resolve ``K5``, ``C7``, ``P4``, ``W5`` (wheel on a 5-cycle), ``K222`` or a catalog name."""
    key = name.strip()
    if key.lower() in NAMED_GRAPHS:
        return NAMED_GRAPHS[key.lower()]()
    match = _PATTERN.match(key)
    if match is None:
        raise KeyError(f"unknown graph name {name!r}")
    if match.group(1) is None:
        sizes = [int(match.group(i)) for i in (3, 4, 5)]
        return _from_nx(nx.complete_multipartite_graph(*sizes))
    kind, n = match.group(1), int(match.group(2))
    if kind == "K":
        return _from_nx(nx.complete_graph(n))
    if kind == "C":
        if n < 3:
            raise KeyError(f"cycles need at least 3 vertices, got {name!r}")
        return _from_nx(nx.cycle_graph(n))
    if kind == "P":
        return _from_nx(nx.path_graph(n))
    return join(Graph.empty(1), _from_nx(nx.cycle_graph(n)))


# ---------------------------------------------------------------------------
# Erdős graph catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ErdosEntry:
    """Catalog graph with its exactly computed chromatic number and girth."""

    name: str
    graph: Graph
    chi: int
    girth: Length


# name, builder, vertex count, chromatic number, girth
_FIXED_ENTRIES: List[Tuple[str, Callable[[], Graph], int, int, Length]] = [
    ("P2", lambda: _from_nx(nx.path_graph(2)), 2, 2, math.inf),
    ("petersen", lambda: _from_nx(nx.petersen_graph()), 10, 3, 5),
    ("grotzsch", lambda: mycielski(4), 11, 4, 4),
    ("chvatal", lambda: _from_nx(nx.chvatal_graph()), 12, 4, 4),
    ("dodecahedron", lambda: _from_nx(nx.dodecahedral_graph()), 20, 3, 5),
    ("mycielski-5", lambda: mycielski(5), 23, 5, 4),
    ("kneser-7-3", lambda: _from_nx(nx.kneser_graph(7, 3)), 35, 3, 6),
]


@lru_cache(maxsize=64)
def certified_entry(name: str) -> ErdosEntry:
    """Build and certify one catalog entry (``C<L>`` for odd cycles or a fixed name)."""
    if name.startswith("C") and name[1:].isdigit():
        length = int(name[1:])
        if length < 3 or length % 2 == 0:
            raise ConstructionError(f"odd cycle entry needs odd length >= 3, got {name}")
        graph = _from_nx(nx.cycle_graph(length))
        declared_chi, declared_girth = 3, length
    else:
        table = {entry[0]: entry for entry in _FIXED_ENTRIES}
        if name not in table:
            raise KeyError(f"no catalog entry named {name!r}")
        _, build, _, declared_chi, declared_girth = table[name]
        graph = build()
    chi = chromatic_number(graph)
    g = girth(graph)
    if chi != declared_chi or g != declared_girth:
        raise ConstructionError(
            f"catalog entry {name} failed certification: chi {chi} (declared {declared_chi}), "
            f"girth {g} (declared {declared_girth})"
        )
    logger.info(f"Certified catalog entry {name}: chi={chi}, girth={g}, n={graph.n}")
    return ErdosEntry(name, graph, chi, g)


def catalog_candidates(k: int, l: int) -> List[str]:
    """Entry names whose declared values satisfy ``chi >= k`` and ``girth >= l``, smallest first."""
    sized: List[Tuple[int, str]] = []
    if k <= 3:
        length = max(l, 3) + (1 - max(l, 3) % 2)
        sized.append((length, f"C{length}"))
    for name, _, n, chi, g in _FIXED_ENTRIES:
        if chi >= k and g >= l:
            sized.append((n, name))
    return [name for _, name in sorted(sized)]


def lookup(k: int, l: int) -> Optional[ErdosEntry]:
    """Smallest certified catalog graph with ``chi >= k`` and ``girth >= l``."""
    for name in catalog_candidates(k, l):
        entry = certified_entry(name)
        if entry.chi >= k and entry.girth >= l:
            return entry
    return None
