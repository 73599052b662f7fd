"""Independent checkers: subgraph search, forest embedding, witness validation and oracles.

Nothing here calls into :mod:`ctl.services.classify`. Witnesses are re-checked
against the definitions with this module's own traversals so a bug in the
classification search cannot vouch for itself.
"""

from __future__ import annotations

import logging
from collections import deque
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from ctl.core.budget import TimeBudget
from ctl.core.graph import Graph, iter_bits, mask_of
from ctl.models import ClassTag, Coloring, Embedding, ForestWitness, NearAcyclicWitness, ThresholdReport, WitnessCheck
from ctl.services.chromatic import is_k_colorable

logger = logging.getLogger(__name__)

__all__ = [
    "contains_subgraph",
    "embed_forest",
    "check_threshold_witness",
    "odd_cycle_oracle",
    "scan_triangles",
    "common_neighbors",
    "check_min_degree",
    "DEEP_CHECK_MAX_VERTICES",
]

DEEP_CHECK_MAX_VERTICES = 9


# ---------------------------------------------------------------------------
# Small structural queries
# ---------------------------------------------------------------------------


def scan_triangles(g: Graph) -> int:
    """Exact number of triangles, each counted once at its largest edge endpoint pair."""
    count = 0
    for u, v in g.edges():
        count += ((g.adj[u] & g.adj[v]) >> (v + 1)).bit_count()
    return count


def common_neighbors(g: Graph, vertices: Iterable[int]) -> frozenset:
    """``N(X)``: vertices adjacent to every vertex of ``X`` (all vertices for empty ``X``)."""
    mask = g.full_mask
    for v in vertices:
        mask &= g.adj[v]
    return frozenset(iter_bits(mask))


def _traverse(g: Graph, mask: int) -> List[Tuple[int, int, int, bool]]:
    """BFS over ``G[mask]``: per component ``(members, even side, odd side, has odd cycle)``."""
    seen = 0
    out = []
    for root in iter_bits(mask):
        if (seen >> root) & 1:
            continue
        sides = [1 << root, 0]
        parity = {root: 0}
        odd = False
        queue = deque([root])
        seen |= 1 << root
        while queue:
            u = queue.popleft()
            for w in iter_bits(g.adj[u] & mask):
                if w not in parity:
                    parity[w] = 1 - parity[u]
                    sides[parity[w]] |= 1 << w
                    seen |= 1 << w
                    queue.append(w)
                elif parity[w] == parity[u]:
                    odd = True
        out.append((sides[0] | sides[1], sides[0], sides[1], odd))
    return out


def _edges_within(g: Graph, mask: int) -> int:
    return sum((g.adj[v] & mask).bit_count() for v in iter_bits(mask)) // 2


def _is_acyclic(g: Graph, mask: int) -> bool:
    return _edges_within(g, mask) == mask.bit_count() - len(_traverse(g, mask))


def _is_bipartite(g: Graph, mask: int) -> bool:
    return not any(odd for *_, odd in _traverse(g, mask))


def _independent(g: Graph, mask: int) -> bool:
    return all(not g.adj[v] & mask for v in iter_bits(mask))


# ---------------------------------------------------------------------------
# Subgraph search
# ---------------------------------------------------------------------------


def _ball2_sizes(g: Graph) -> List[int]:
    sizes = []
    for v in range(g.n):
        ball = g.adj[v]
        for u in iter_bits(g.adj[v]):
            ball |= g.adj[u]
        sizes.append((ball & ~(1 << v)).bit_count())
    return sizes


def _pattern_order(pattern: Graph) -> List[int]:
    """Descending degree, preferring vertices attached to the already ordered prefix."""
    degree = pattern.degrees()
    placed = 0
    order = []
    for _ in range(pattern.n):
        v = max(
            (x for x in range(pattern.n) if not (placed >> x) & 1),
            key=lambda x: ((pattern.adj[x] & placed).bit_count(), degree[x], -x),
        )
        order.append(v)
        placed |= 1 << v
    return order


def contains_subgraph(host: Graph, pattern: Graph, budget: Optional[TimeBudget] = None) -> Optional[Embedding]:
    """Find a (not necessarily induced) copy of ``pattern`` in ``host``.

    Returns:
        An :class:`Embedding` ``pattern vertex -> host vertex`` or ``None``.

    Raises:
        BudgetExceededError: the search did not finish within the budget.
    """
    k = pattern.n
    if k == 0:
        return Embedding(())
    if k > host.n or pattern.num_edges > host.num_edges:
        return None
    budget = TimeBudget.ensure(budget)

    order = _pattern_order(pattern)
    position = {v: i for i, v in enumerate(order)}
    back = [[position[u] for u in pattern.neighbors(v) if position[u] < i] for i, v in enumerate(order)]

    host_degree = host.degrees()
    host_ball = _ball2_sizes(host)
    pattern_degree = pattern.degrees()
    pattern_ball = _ball2_sizes(pattern)
    allowed = []
    for v in order:
        mask = 0
        for x in range(host.n):
            if host_degree[x] >= pattern_degree[v] and host_ball[x] >= pattern_ball[v]:
                mask |= 1 << x
        if not mask:
            return None
        allowed.append(mask)

    image = [-1] * k
    candidates = [0] * k
    used = 0

    def candidates_for(i: int) -> int:
        mask = allowed[i] & ~used
        for j in back[i]:
            mask &= host.adj[image[j]]
        return mask

    with budget.stage("subgraph_search"):
        i = 0
        candidates[0] = candidates_for(0)
        while i >= 0:
            budget.tick()
            if image[i] != -1:
                used &= ~(1 << image[i])
                image[i] = -1
            if not candidates[i]:
                i -= 1
                continue
            low = candidates[i] & -candidates[i]
            candidates[i] ^= low
            image[i] = low.bit_length() - 1
            used |= low
            if i == k - 1:
                mapping = [0] * k
                for pos, v in enumerate(order):
                    mapping[v] = image[pos]
                return Embedding(tuple(mapping))
            i += 1
            candidates[i] = candidates_for(i)
    return None


def embed_forest(host: Graph, f: Graph, budget: Optional[TimeBudget] = None) -> Optional[Embedding]:
    """Embed the forest ``f`` greedily inside the ``|f|``-core of ``host``.

    Every graph with ``e(host) >= |f| * v(host)`` has a non-empty core of
    minimum degree at least ``|f|``, where each vertex placed next to its
    parent always has an unused neighbour left. An empty core falls back to
    the exact search.

    Raises:
        ValueError: ``f`` contains a cycle.
    """
    if not _is_acyclic(f, f.full_mask):
        raise ValueError("embed_forest needs an acyclic pattern")
    m = f.n
    if m == 0:
        return Embedding(())

    alive = host.full_mask
    changed = True
    while changed:
        changed = False
        for v in iter_bits(alive):
            if (host.adj[v] & alive).bit_count() < m:
                alive &= ~(1 << v)
                changed = True
    if not alive:
        logger.debug(f"No {m}-core in {host!r}; falling back to exact search")
        return contains_subgraph(host, f, budget)

    mapping = [-1] * m
    used = 0
    for root in range(m):
        if mapping[root] != -1:
            continue
        start = (alive & ~used) & -(alive & ~used)
        mapping[root] = start.bit_length() - 1
        used |= start
        queue = deque([root])
        while queue:
            p = queue.popleft()
            for child in f.neighbors(p):
                if mapping[child] != -1:
                    continue
                free = host.adj[mapping[p]] & alive & ~used
                low = free & -free
                mapping[child] = low.bit_length() - 1
                used |= low
                queue.append(child)
    return Embedding(tuple(mapping))


# ---------------------------------------------------------------------------
# Odd-cycle oracle
# ---------------------------------------------------------------------------


def odd_cycle_oracle(
    h: Graph, s: Iterable[int], max_len: int, budget: Optional[TimeBudget] = None
) -> List[Tuple[int, ...]]:
    """Every odd cycle of length ``<= max_len`` meeting ``s`` in at most one vertex.

    Cycles are listed once each, rotated to start at their smallest vertex and
    oriented so the second vertex is smaller than the last.
    """
    if max_len > h.n:
        raise ValueError(f"max_len {max_len} exceeds the vertex count {h.n}")
    budget = TimeBudget.ensure(budget)
    s_mask = mask_of(s)
    found: List[Tuple[int, ...]] = []

    def extend(path: List[int], on_path: int, hits: int) -> None:
        budget.tick()
        last = path[-1]
        start = path[0]
        if len(path) >= 3 and len(path) % 2 == 1 and (h.adj[last] >> start) & 1 and path[1] < last:
            found.append(tuple(path))
        if len(path) == max_len:
            return
        for w in iter_bits(h.adj[last] >> (start + 1)):
            w += start + 1
            if (on_path >> w) & 1:
                continue
            w_hits = hits + ((s_mask >> w) & 1)
            if w_hits > 1:
                continue
            path.append(w)
            extend(path, on_path | (1 << w), w_hits)
            path.pop()

    with budget.stage("odd_cycle_oracle"):
        for start in range(h.n):
            extend([start], 1 << start, (s_mask >> start) & 1)
    return found


# ---------------------------------------------------------------------------
# Witness validation
# ---------------------------------------------------------------------------


def _expected_threshold(tag: ClassTag, r: int) -> Optional[Fraction]:
    if tag is ClassTag.BIPARTITE:
        return Fraction(0)
    if r < 3:
        return None
    return {
        ClassTag.THETA: Fraction(r - 3, r - 2),
        ClassTag.LAMBDA: Fraction(2 * r - 5, 2 * r - 3),
        ClassTag.PI: Fraction(r - 2, r - 1),
    }[tag]


def _check_coloring(h: Graph, coloring: Coloring, k: int, name: str) -> List[str]:
    problems = []
    if coloring.k != k:
        problems.append(f"{name}.classes: expected {k} classes, got {coloring.k}")
    seen = 0
    for i, members in enumerate(coloring.classes):
        mask = mask_of(members)
        if not mask:
            problems.append(f"{name}.classes[{i}]: empty class")
        if any(v >= h.n or v < 0 for v in members):
            problems.append(f"{name}.classes[{i}]: vertex outside the graph")
            continue
        if seen & mask:
            problems.append(f"{name}.classes[{i}]: overlaps an earlier class")
        if not _independent(h, mask):
            problems.append(f"{name}.classes[{i}]: not independent")
        seen |= mask
    if seen != h.full_mask:
        problems.append(f"{name}.classes: do not cover every vertex")
    return problems


def _check_forest_witness(h: Graph, witness: ForestWitness, r: int) -> List[str]:
    problems = _check_coloring(h, witness.coloring, r, "forest_witness")
    i, j = witness.pair
    if not (0 <= i < witness.coloring.k and 0 <= j < witness.coloring.k) or i == j:
        return problems + ["forest_witness.pair: invalid class indices"]
    mask = mask_of(witness.coloring.classes[i]) | mask_of(witness.coloring.classes[j])
    if mask & ~h.full_mask:
        return problems
    if not _is_acyclic(h, mask):
        problems.append("forest_witness.pair: class pair does not induce a forest")
    return problems


def _check_near_acyclic(h: Graph, witness: NearAcyclicWitness, r: int) -> List[str]:
    problems = []
    if len(witness.removed_sets) != r - 3:
        problems.append(f"near_acyclic.removed_sets: expected {r - 3} sets, got {len(witness.removed_sets)}")
    named = [(f"near_acyclic.removed_sets[{i}]", mask_of(u)) for i, u in enumerate(witness.removed_sets)]
    named.append(("near_acyclic.s_set", mask_of(witness.s_set)))
    seen = 0
    for name, mask in named:
        if mask & ~h.full_mask:
            problems.append(f"{name}: vertex outside the graph")
            return problems
        if not _independent(h, mask):
            problems.append(f"{name}: not independent")
        if seen & mask:
            problems.append(f"{name}: not disjoint from the other sets")
        seen |= mask
    removed = 0
    for _, mask in named[:-1]:
        removed |= mask
    s_mask = named[-1][1]

    rest = h.full_mask & ~seen
    forest_vertices = 0
    for tree in witness.forest.trees:
        forest_vertices |= mask_of(tree.vertices)
    if forest_vertices != rest:
        problems.append("near_acyclic.forest: trees do not cover exactly the remaining vertices")
        return problems
    if not _is_acyclic(h, rest):
        problems.append("near_acyclic.forest: remaining graph contains a cycle")
        return problems

    components = {members: (even, odd_side) for members, even, odd_side, _ in _traverse(h, rest)}
    for index, tree in enumerate(witness.forest.trees):
        members = mask_of(tree.vertices)
        side_a, side_b = mask_of(tree.side_a), mask_of(tree.side_b)
        if members not in components:
            problems.append(f"near_acyclic.forest.trees[{index}]: not a component of the remaining graph")
            continue
        if {side_a, side_b} != set(components[members]):
            problems.append(f"near_acyclic.forest.trees[{index}]: sides are not the tree's bipartition")
            continue
        for v in iter_bits(s_mask):
            if h.adj[v] & side_a and h.adj[v] & side_b:
                problems.append(f"near_acyclic.tree_class: vertex {v} of S sees both sides of tree {index}")

    if _is_bipartite(h, h.full_mask & ~removed):
        problems.append("near_acyclic.remainder: graph minus the removed sets is not 3-chromatic")
    return problems


def _brute_force_near_acyclic(h: Graph, r: int, budget: TimeBudget) -> bool:
    """Whether any role assignment makes ``h`` r-near-acyclic (odd-cycle form of the definition)."""
    n = h.n
    k = r - 3
    masks = [0] * (k + 2)  # U_0..U_{k-1}, S, F

    def leaf() -> bool:
        removed = 0
        for i in range(k):
            removed |= masks[i]
        rest = h.full_mask & ~removed
        if not _is_acyclic(h, masks[k + 1]) or _is_bipartite(h, rest):
            return False
        sub = h.induced_subgraph(rest)
        index = {v: i for i, v in enumerate(iter_bits(rest))}
        s_sub = [index[v] for v in iter_bits(masks[k])]
        return not odd_cycle_oracle(sub, s_sub, sub.n, budget)

    def place(v: int, opened: int) -> bool:
        budget.tick()
        if v == n:
            return leaf()
        bit = 1 << v
        for role in range(k + 2):
            if role < k and role > opened:
                continue
            if role <= k and h.adj[v] & masks[role]:
                continue
            masks[role] |= bit
            if place(v + 1, max(opened, role + 1) if role < k else opened):
                return True
            masks[role] &= ~bit
        return False

    return place(0, 0)


def _brute_force_forest_in_family(h: Graph, r: int, budget: TimeBudget) -> bool:
    """Whether some proper r-colouring has two classes inducing a forest."""
    n = h.n
    classes = [0] * r

    def place(v: int, opened: int) -> bool:
        budget.tick()
        if v == n:
            if opened < r:
                return False
            return any(_is_acyclic(h, classes[i] | classes[j]) for i in range(r) for j in range(i + 1, r))
        for c in range(min(opened + 1, r)):
            if h.adj[v] & classes[c]:
                continue
            classes[c] |= 1 << v
            if place(v + 1, max(opened, c + 1)):
                return True
            classes[c] &= ~(1 << v)
        return False

    return place(0, 0)


def check_threshold_witness(
    h: Graph, report: ThresholdReport, deep: bool = False, budget: Optional[TimeBudget] = None
) -> WitnessCheck:
    """Re-validate every claim of ``report`` against ``h`` from scratch.

    With ``deep`` the negative claims (not r-near-acyclic, no forest in the
    decomposition family) are also brute-forced on graphs with at most
    ``DEEP_CHECK_MAX_VERTICES`` vertices.
    """
    budget = TimeBudget.ensure(budget)
    problems: List[str] = []
    r = report.chi

    with budget.stage("witness_check"):
        if r < 0 or is_k_colorable(h, r, budget) is None or (r > 0 and is_k_colorable(h, r - 1, budget) is not None):
            problems.append(f"chi: {r} is not the chromatic number")

    if (report.class_tag is ClassTag.BIPARTITE) != (r <= 2):
        problems.append(f"class_tag: {report.class_tag.value} is inconsistent with chi = {r}")
    expected = _expected_threshold(report.class_tag, r)
    if expected is None or report.threshold != expected:
        problems.append(f"threshold: {report.threshold} does not match class {report.class_tag.value} with r = {r}")

    tag = report.class_tag
    if tag is ClassTag.BIPARTITE:
        if report.forest_witness is not None or report.near_acyclic_witness is not None:
            problems.append("witnesses: bipartite reports carry no witnesses")
    elif tag is ClassTag.THETA:
        if report.near_acyclic_witness is None:
            problems.append("near_acyclic_witness: missing")
        else:
            problems.extend(_check_near_acyclic(h, report.near_acyclic_witness, r))
        if report.forest_witness is None:
            problems.append("forest_witness: missing")
        else:
            problems.extend(_check_forest_witness(h, report.forest_witness, r))
    elif tag is ClassTag.LAMBDA:
        if report.near_acyclic_witness is not None:
            problems.append("near_acyclic_witness: present on a LAMBDA report")
        if report.forest_witness is None:
            problems.append("forest_witness: missing")
        else:
            problems.extend(_check_forest_witness(h, report.forest_witness, r))
    elif tag is ClassTag.PI:
        if report.forest_witness is not None or report.near_acyclic_witness is not None:
            problems.append("witnesses: PI reports carry no witnesses")

    if deep and not problems and h.n <= DEEP_CHECK_MAX_VERTICES and r >= 3:
        with budget.stage("witness_deep_check"):
            if tag in (ClassTag.LAMBDA, ClassTag.PI) and _brute_force_near_acyclic(h, r, budget):
                problems.append(f"deep.near_acyclic: graph is {r}-near-acyclic")
            if tag is ClassTag.PI and _brute_force_forest_in_family(h, r, budget):
                problems.append("deep.forest: decomposition family contains a forest")

    if problems:
        logger.info(f"Witness check failed for {h!r}: {problems}")
    return WitnessCheck(passed=not problems, violations=tuple(problems))


def check_min_degree(g: Graph, fraction: Fraction) -> bool:
    """``delta(g) >= fraction * v(g)`` with exact arithmetic."""
    return min(g.degrees(), default=0) >= fraction * g.n
