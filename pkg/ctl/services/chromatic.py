"""Exact chromatic numbers, k-colourability and colour-class partition enumeration.

The exact search is DSATUR branch-and-bound: a greedy DSATUR colouring gives
the upper bound, a capped maximum-clique search the lower bound, and each
``k`` in between is decided by a backtracking DSATUR search that pre-colours
the clique. The searches keep an explicit stack so vertex counts are not
limited by the interpreter's recursion depth.
"""

from __future__ import annotations

import logging
from typing import Iterator, List, Optional, Sequence

from ctl.core.budget import TimeBudget
from ctl.core.config import settings
from ctl.core.graph import Graph, iter_bits
from ctl.models import Coloring

logger = logging.getLogger(__name__)

__all__ = [
    "greedy_coloring",
    "clique_lower_bound",
    "is_k_colorable",
    "optimal_coloring",
    "chromatic_number",
    "color_class_partitions",
]


def _saturation(g: Graph, v: int, classes: Sequence[int], used: int) -> int:
    row = g.adj[v]
    return sum(1 for c in range(used) if row & classes[c])


def greedy_coloring(g: Graph) -> Coloring:
    """DSATUR greedy colouring (an upper bound on the chromatic number)."""
    classes: List[int] = []
    uncoloured = g.full_mask
    degree = g.degrees()
    while uncoloured:
        v = max(iter_bits(uncoloured), key=lambda x: (_saturation(g, x, classes, len(classes)), degree[x], -x))
        for c, members in enumerate(classes):
            if not g.adj[v] & members:
                classes[c] |= 1 << v
                break
        else:
            classes.append(1 << v)
        uncoloured &= ~(1 << v)
    return Coloring.from_masks(classes)


def clique_lower_bound(g: Graph, node_cap: Optional[int] = None) -> List[int]:
    """Vertices of a large clique from a pivoting Bron-Kerbosch search.

    The search is exact when it finishes within ``node_cap`` nodes; otherwise the
    best clique found so far is returned, which is still a valid lower bound.
    """
    cap = settings.CLIQUE_NODE_CAP if node_cap is None else node_cap
    if g.n == 0:
        return []
    best = 0
    nodes = 0

    # greedy seed
    candidates = g.full_mask
    seed = 0
    while candidates:
        v = max(iter_bits(candidates), key=lambda x: (g.adj[x] & candidates).bit_count())
        seed |= 1 << v
        candidates &= g.adj[v]
    best = seed

    stack = [(0, g.full_mask, 0)]
    while stack and nodes < cap:
        nodes += 1
        clique, pool, excluded = stack.pop()
        if not pool:
            if not excluded and clique.bit_count() > best.bit_count():
                best = clique
            continue
        if clique.bit_count() + pool.bit_count() <= best.bit_count():
            continue
        pivot = max(iter_bits(pool | excluded), key=lambda u: (pool & g.adj[u]).bit_count())
        for v in iter_bits(pool & ~g.adj[pivot]):
            bit = 1 << v
            stack.append((clique | bit, pool & g.adj[v], excluded & g.adj[v]))
            pool &= ~bit
            excluded |= bit
    if stack:
        logger.info(f"Clique search stopped at the node cap of {cap}; lower bound {best.bit_count()}")
    return list(iter_bits(best))


def is_k_colorable(
    g: Graph,
    k: int,
    budget: Optional[TimeBudget] = None,
    clique: Optional[Sequence[int]] = None,
) -> Optional[Coloring]:
    """Return a proper colouring with at most ``k`` nonempty classes, or ``None``.

    Args:
        g: graph to colour.
        k: number of colours available.
        budget: shared time budget; a fresh default one is used when omitted.
        clique: optional clique to pre-colour with ``0..len(clique)-1``.

    Raises:
        BudgetExceededError: the search did not finish within the budget.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if g.n == 0:
        return Coloring(())
    if k == 0:
        return None
    budget = TimeBudget.ensure(budget)
    clique = list(clique) if clique is not None else clique_lower_bound(g)
    if len(clique) > k:
        return None

    colour = [-1] * g.n
    classes = [0] * k
    uncoloured = g.full_mask
    for c, v in enumerate(clique):
        colour[v] = c
        classes[c] |= 1 << v
        uncoloured &= ~(1 << v)
    used = len(clique)
    degree = g.degrees()

    def options(v: int) -> List[int]:
        row = g.adj[v]
        return [c for c in range(min(used + 1, k)) if not row & classes[c]]

    def pick() -> int:
        return max(iter_bits(uncoloured), key=lambda x: (_saturation(g, x, classes, used), degree[x], -x))

    if not uncoloured:
        return Coloring.from_masks(classes[:used])
    first = pick()
    frames = [[first, options(first), 0, used]]
    while frames:
        budget.tick()
        frame = frames[-1]
        v, opts, pos, prev_used = frame
        if colour[v] != -1:
            classes[colour[v]] &= ~(1 << v)
            colour[v] = -1
            uncoloured |= 1 << v
            used = prev_used
        if pos == len(opts):
            frames.pop()
            continue
        c = opts[pos]
        frame[2] = pos + 1
        colour[v] = c
        classes[c] |= 1 << v
        uncoloured &= ~(1 << v)
        used = max(used, c + 1)
        if not uncoloured:
            return Coloring.from_masks(classes[:used])
        w = pick()
        next_opts = options(w)
        if next_opts:
            frames.append([w, next_opts, 0, used])
    return None


def optimal_coloring(g: Graph, budget: Optional[TimeBudget] = None) -> Coloring:
    """A colouring with exactly ``chi(g)`` classes."""
    budget = TimeBudget.ensure(budget)
    best = greedy_coloring(g)
    if g.n == 0:
        return best
    clique = clique_lower_bound(g)
    for k in range(len(clique), best.k):
        found = is_k_colorable(g, k, budget, clique=clique)
        if found is not None:
            return found
    return best


def chromatic_number(g: Graph, budget: Optional[TimeBudget] = None) -> int:
    """Exact chromatic number; 0 for the graph without vertices."""
    with TimeBudget.ensure(budget).stage("chromatic_number") as b:
        chi = optimal_coloring(g, b).k
    logger.debug(f"chi = {chi} for {g!r}")
    return chi


def color_class_partitions(g: Graph, k: int, budget: Optional[TimeBudget] = None) -> Iterator[Coloring]:
    """Lazily yield every partition of ``V(g)`` into exactly ``k`` nonempty independent sets.

    Partitions are enumerated as restricted growth strings over vertices
    ``0..n-1``: a vertex either joins an existing class or opens the next one,
    so class order is fixed by smallest member and no partition repeats.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    n = g.n
    if n == 0:
        if k == 0:
            yield Coloring(())
        return
    if k == 0:
        return
    budget = TimeBudget.ensure(budget)

    classes = [0] * k
    choice = [-1] * n
    used_at = [0] * (n + 1)  # classes open before vertex v is placed
    v = 0
    while v >= 0:
        budget.tick()
        if choice[v] != -1:
            classes[choice[v]] &= ~(1 << v)
        used = used_at[v]
        row = g.adj[v]
        c = choice[v] + 1
        limit = min(used + 1, k)
        while c < limit and row & classes[c]:
            c += 1
        if c >= limit:
            choice[v] = -1
            v -= 1
            continue
        choice[v] = c
        classes[c] |= 1 << v
        opened = max(used, c + 1)
        if n - v - 1 < k - opened:
            continue
        if v == n - 1:
            yield Coloring.from_masks(classes)
            continue
        used_at[v + 1] = opened
        v += 1
