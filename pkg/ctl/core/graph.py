"""Canonical graph representation and the elementary structural queries.

Graphs are simple, undirected and immutable. Vertex ``v`` is the integer ``v``
in ``0..n-1`` and its neighbourhood is stored as an ``int`` bitset, so common
neighbourhoods and independence tests are single ``&`` operations.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from ctl.core.config import settings
from ctl.core.errors import SizingError

logger = logging.getLogger(__name__)

Rational = Fraction
Length = Union[int, float]  # ``math.inf`` for "no cycle"

__all__ = [
    "Graph",
    "ForestTree",
    "ForestDecomposition",
    "Rational",
    "iter_bits",
    "mask_of",
    "check_size",
    "min_degree",
    "min_degree_fraction",
    "girth",
    "odd_girth",
    "shortest_cycle",
    "is_bipartite",
    "connected_components",
    "two_colouring",
    "count_edges",
    "forest_decomposition",
    "degeneracy",
    "blow_up",
    "join",
    "complete_multipartite",
    "to_dot",
    "to_networkx",
    "from_networkx",
]


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def check_size(n: int, what: str = "graph") -> None:
    """Fail fast when ``n`` vertices would exceed the vertex cap."""
    if n > settings.VERTEX_CAP:
        raise SizingError(f"{what} needs {n} vertices, above the cap of {settings.VERTEX_CAP}")


class Graph:
    """Immutable simple graph on vertices ``0..n-1`` with bitset adjacency.

    ``labels`` are optional opaque per-vertex tags; generators use them to
    record provenance (for example which blown-up set a vertex came from).
    """

    __slots__ = ("n", "adj", "labels", "_neighbors", "_hash")

    def __init__(self, n: int, adj: Sequence[int], labels: Optional[Sequence[str]] = None):
        check_size(n)
        if len(adj) != n:
            raise ValueError(f"adjacency has {len(adj)} rows for {n} vertices")
        full = (1 << n) - 1
        for v, row in enumerate(adj):
            if row & ~full:
                raise ValueError(f"vertex {v} has a neighbour outside 0..{n - 1}")
            if (row >> v) & 1:
                raise ValueError(f"vertex {v} has a loop")
            for u in iter_bits(row):
                if not (adj[u] >> v) & 1:
                    raise ValueError(f"adjacency is not symmetric on {{{u}, {v}}}")
        if labels is not None and len(labels) != n:
            raise ValueError(f"{len(labels)} labels for {n} vertices")
        self.n = n
        self.adj: Tuple[int, ...] = tuple(adj)
        self.labels: Optional[Tuple[str, ...]] = tuple(labels) if labels is not None else None
        self._neighbors: Optional[Tuple[Tuple[int, ...], ...]] = None
        self._hash: Optional[int] = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[Tuple[int, int]], labels: Optional[Sequence[str]] = None
    ) -> "Graph":
        check_size(n)
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {{{u}, {v}}} is outside 0..{n - 1}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj, labels)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n)

    def with_labels(self, labels: Optional[Sequence[str]]) -> "Graph":
        return Graph(self.n, self.adj, labels)

    # -- queries ------------------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> List[int]:
        return [row.bit_count() for row in self.adj]

    def neighbors(self, v: int) -> Tuple[int, ...]:
        if self._neighbors is None:
            self._neighbors = tuple(tuple(iter_bits(row)) for row in self.adj)
        return self._neighbors[v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Yield every edge once as ``(u, v)`` with ``u < v``, sorted."""
        for u, row in enumerate(self.adj):
            for v in iter_bits(row >> (u + 1)):
                yield u, u + 1 + v

    def is_independent(self, vertices: Union[int, Iterable[int]]) -> bool:
        mask = vertices if isinstance(vertices, int) else mask_of(vertices)
        return all(not (self.adj[v] & mask) for v in iter_bits(mask))

    def induced_subgraph(self, vertices: Union[int, Iterable[int]]) -> "Graph":
        """Return ``G[vertices]`` relabelled to ``0..k-1`` in increasing vertex order."""
        mask = vertices if isinstance(vertices, int) else mask_of(vertices)
        kept = list(iter_bits(mask))
        index = {v: i for i, v in enumerate(kept)}
        adj = []
        for v in kept:
            row = 0
            for u in iter_bits(self.adj[v] & mask):
                row |= 1 << index[u]
            adj.append(row)
        labels = [self.labels[v] for v in kept] if self.labels is not None else None
        return Graph(len(kept), adj, labels)

    def delete_vertices(self, vertices: Union[int, Iterable[int]]) -> "Graph":
        mask = vertices if isinstance(vertices, int) else mask_of(vertices)
        return self.induced_subgraph(self.full_mask & ~mask)

    # -- dunder -------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj and self.labels == other.labels

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.adj, self.labels))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.num_edges})"


@dataclass(frozen=True)
class ForestTree:
    """One tree of a forest with its proper 2-colouring ``(side_a, side_b)``.

    ``side_a`` holds the smallest vertex of the tree; a one-vertex tree has an
    empty ``side_b``.
    """

    vertices: frozenset
    side_a: frozenset
    side_b: frozenset
    edges: Tuple[Tuple[int, int], ...]

    def as_graph(self, g: Optional[Graph] = None) -> Graph:
        """Return the tree relabelled to ``0..k-1`` in increasing vertex order."""
        kept = sorted(self.vertices)
        index = {v: i for i, v in enumerate(kept)}
        labels = None
        if g is not None and g.labels is not None:
            labels = [g.labels[v] for v in kept]
        return Graph.from_edges(len(kept), [(index[u], index[v]) for u, v in self.edges], labels)


@dataclass(frozen=True)
class ForestDecomposition:
    trees: Tuple[ForestTree, ...]

    @property
    def vertices(self) -> frozenset:
        return frozenset().union(*(t.vertices for t in self.trees)) if self.trees else frozenset()


# ---------------------------------------------------------------------------
# Degrees
# ---------------------------------------------------------------------------


def min_degree(g: Graph) -> int:
    return min(g.degrees(), default=0)


def min_degree_fraction(g: Graph) -> Fraction:
    """Return ``delta(G) / n`` in lowest terms."""
    if g.n == 0:
        raise ValueError("minimum degree fraction is undefined on the empty graph")
    return Fraction(min_degree(g), g.n)


# ---------------------------------------------------------------------------
# Cycles
# ---------------------------------------------------------------------------


def _bfs_shortest_cycle(g: Graph, root: int, bound: Length, odd_only: bool) -> Optional[Tuple[int, int, int, List[int]]]:
    """Shortest closed walk through ``root`` closed by a non-tree edge.

    Returns ``(length, u, w, parent)`` for the best non-tree edge ``uw`` found
    below ``bound``, or ``None``.
    """
    dist = [-1] * g.n
    parent = [-1] * g.n
    dist[root] = 0
    queue = deque([root])
    best: Optional[Tuple[int, int, int, List[int]]] = None
    while queue:
        u = queue.popleft()
        if 2 * dist[u] + 1 >= bound:
            break
        for w in g.neighbors(u):
            if dist[w] == -1:
                dist[w] = dist[u] + 1
                parent[w] = u
                queue.append(w)
            elif w != parent[u]:
                if odd_only and dist[w] != dist[u]:
                    continue
                length = dist[u] + dist[w] + 1
                if length < bound:
                    bound = length
                    best = (length, u, w, parent)
    return best


def _shortest(g: Graph, odd_only: bool) -> Tuple[Length, Optional[List[int]]]:
    bound: Length = math.inf
    cycle: Optional[List[int]] = None
    for root in range(g.n):
        found = _bfs_shortest_cycle(g, root, bound, odd_only)
        if found is None:
            continue
        bound, u, w, parent = found
        path_u = [u]
        while path_u[-1] != root:
            path_u.append(parent[path_u[-1]])
        path_w = [w]
        while path_w[-1] != root:
            path_w.append(parent[path_w[-1]])
        cycle = path_u[::-1] + path_w[:-1]
    return bound, cycle


def girth(g: Graph) -> Length:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    return _shortest(g, odd_only=False)[0]


def odd_girth(g: Graph) -> Length:
    """Length of a shortest odd cycle, ``math.inf`` for bipartite graphs."""
    return _shortest(g, odd_only=True)[0]


def shortest_cycle(g: Graph) -> Optional[List[int]]:
    """Vertices of a shortest cycle in cyclic order, or ``None`` for forests."""
    return _shortest(g, odd_only=False)[1]


def connected_components(g: Graph, within: Optional[int] = None) -> List[int]:
    """Component vertex masks of ``G[within]`` ordered by smallest vertex."""
    allowed = g.full_mask if within is None else within
    components = []
    unseen = allowed
    while unseen:
        frontier = unseen & -unseen
        component = 0
        while frontier:
            component |= frontier
            grown = 0
            for v in iter_bits(frontier):
                grown |= g.adj[v]
            frontier = grown & allowed & ~component
        components.append(component)
        unseen &= ~component
    return components


def two_colouring(g: Graph, within: Optional[int] = None) -> Optional[List[int]]:
    """BFS 2-colouring of ``G[within]``, ``None`` if it is not bipartite.

    Each component's smallest vertex gets colour 0; vertices outside ``within``
    keep colour -1.
    """
    allowed = g.full_mask if within is None else within
    colour = [-1] * g.n
    for root in iter_bits(allowed):
        if colour[root] != -1:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in iter_bits(g.adj[u] & allowed):
                if colour[w] == -1:
                    colour[w] = 1 - colour[u]
                    queue.append(w)
                elif colour[w] == colour[u]:
                    return None
    return colour


def is_bipartite(g: Graph, within: Optional[int] = None) -> bool:
    return two_colouring(g, within) is not None


def count_edges(g: Graph, within: Optional[int] = None) -> int:
    if within is None:
        return g.num_edges
    return sum((g.adj[v] & within).bit_count() for v in iter_bits(within)) // 2


def forest_decomposition(g: Graph, within: Optional[int] = None) -> Optional[ForestDecomposition]:
    """Split an acyclic graph into its trees with their unique bipartitions.

    With ``within`` the induced subgraph ``G[within]`` is decomposed and the
    original vertex indices are kept.
    """
    allowed = g.full_mask if within is None else within
    components = connected_components(g, allowed)
    if count_edges(g, allowed) != allowed.bit_count() - len(components):
        return None
    colour = two_colouring(g, allowed)
    assert colour is not None  # forests are bipartite
    trees = []
    for component in components:
        members = list(iter_bits(component))
        side_a = frozenset(v for v in members if colour[v] == 0)
        side_b = frozenset(v for v in members if colour[v] == 1)
        tree_edges = tuple((u, w) for u in members for w in iter_bits(g.adj[u] & component) if u < w)
        trees.append(ForestTree(frozenset(members), side_a, side_b, tree_edges))
    return ForestDecomposition(tuple(trees))


def degeneracy(g: Graph) -> Tuple[int, List[int]]:
    """Smallest ``C`` with ``g`` C-degenerate, plus a witnessing ordering.

    Vertices are peeled by repeatedly removing one of minimum degree; the
    ordering lists them in reverse peel order, so each vertex has at most ``C``
    neighbours before it.
    """
    alive = g.full_mask
    degree = g.degrees()
    peeled = []
    worst = 0
    for _ in range(g.n):
        v = min(iter_bits(alive), key=lambda x: (degree[x], x))
        worst = max(worst, degree[v])
        peeled.append(v)
        alive &= ~(1 << v)
        for u in iter_bits(g.adj[v] & alive):
            degree[u] -= 1
    return worst, peeled[::-1]


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def _labels_or_indices(g: Graph) -> List[str]:
    return list(g.labels) if g.labels is not None else [str(v) for v in range(g.n)]


def blow_up(g: Graph, sizes: Sequence[int]) -> Graph:
    """Replace each vertex ``v`` by an independent set of ``sizes[v]`` copies.

    Edges become complete bipartite graphs; a size of 0 deletes the vertex.
    Each copy inherits the label of its origin (or the origin's index).
    """
    if len(sizes) != g.n:
        raise ValueError(f"{len(sizes)} sizes for {g.n} vertices")
    if any(s < 0 for s in sizes):
        raise ValueError("blow-up sizes must be non-negative")
    total = sum(sizes)
    check_size(total, "blow-up")
    offsets = []
    block = []
    start = 0
    for s in sizes:
        offsets.append(start)
        block.append(((1 << s) - 1) << start)
        start += s
    origin_labels = _labels_or_indices(g)
    adj = []
    labels = []
    for v in range(g.n):
        row = 0
        for u in g.neighbors(v):
            row |= block[u]
        adj.extend([row] * sizes[v])
        labels.extend([origin_labels[v]] * sizes[v])
    return Graph(total, adj, labels)


def join(g: Graph, h: Graph) -> Graph:
    """Disjoint union of ``g`` and ``h`` plus every edge between them."""
    n = g.n + h.n
    check_size(n, "join")
    g_block = g.full_mask
    h_block = h.full_mask << g.n
    adj = [row | h_block for row in g.adj] + [(row << g.n) | g_block for row in h.adj]
    labels = None
    if g.labels is not None or h.labels is not None:
        labels = _labels_or_indices(g) + _labels_or_indices(h)
    return Graph(n, adj, labels)


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    """Complete multipartite graph with the given part sizes (labels ``P0``, ``P1``...)."""
    if not sizes:
        raise ValueError("complete_multipartite needs at least one part")
    n = sum(sizes)
    check_size(n, "complete multipartite graph")
    full = (1 << n) - 1
    adj = []
    labels = []
    start = 0
    for i, s in enumerate(sizes):
        part = ((1 << s) - 1) << start
        adj.extend([full & ~part] * s)
        labels.extend([f"P{i}"] * s)
        start += s
    return Graph(n, adj, labels)


# ---------------------------------------------------------------------------
# Interop
# ---------------------------------------------------------------------------


def to_dot(g: Graph, name: str = "G") -> str:
    """Best-effort DOT rendering for visual inspection."""
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        if g.labels is not None:
            label = g.labels[v].replace('"', '\\"')
            lines.append(f'  {v} [label="{v}:{label}"];')
        else:
            lines.append(f"  {v};")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_networkx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    for v in range(g.n):
        if g.labels is not None:
            G.add_node(v, label=g.labels[v])
        else:
            G.add_node(v)
    G.add_edges_from(g.edges())
    return G


def from_networkx(G: nx.Graph) -> Graph:
    """Convert a networkx graph, ordering vertices by sorted node key when possible."""
    if G.is_directed() or G.is_multigraph():
        raise ValueError("only simple undirected graphs are supported")
    nodes = list(G.nodes())
    try:
        nodes = sorted(nodes)
    except TypeError:
        pass
    index = {node: i for i, node in enumerate(nodes)}
    edges = [(index[a], index[b]) for a, b in G.edges()]
    labels = None
    if nodes and all("label" in G.nodes[node] for node in nodes):
        labels = [str(G.nodes[node]["label"]) for node in nodes]
    return Graph.from_edges(len(nodes), edges, labels)
