"""Exact chromatic-threshold classification.

The decision procedure for a graph ``H`` with chromatic number ``r``:

* ``r <= 2``: bipartite, threshold 0;
* ``H`` is r-near-acyclic: threshold ``(r-3)/(r-2)``;
* some ``r``-colouring has two classes inducing a forest: ``(2r-5)/(2r-3)``;
* otherwise: ``(r-2)/(r-1)``.

r-near-acyclicity is decided by one backtracking search that gives every vertex
a role: forest (``F``), the independent set ``S`` or one of the ``r-3`` removed
independent sets ``U_i``. The search always branches on the vertex with the
fewest feasible roles, so forced assignments propagate before any real choice.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from ctl.core.budget import TimeBudget
from ctl.core.errors import ClassificationError
from ctl.core.graph import ForestDecomposition, Graph, forest_decomposition, is_bipartite, iter_bits, to_networkx
from ctl.models import ClassTag, Coloring, ForestWitness, NearAcyclicWitness, ThresholdReport
from ctl.services.chromatic import chromatic_number, color_class_partitions

logger = logging.getLogger(__name__)

__all__ = [
    "threshold_for",
    "tree_class_violations",
    "decomposition_family",
    "has_forest_in_decomposition",
    "is_near_acyclic",
    "is_r_near_acyclic",
    "forest_witness_from_near_acyclic",
    "chromatic_threshold",
]

_F = 0
_S = 1
_U = 2  # U_i is role _U + i


def threshold_for(tag: ClassTag, r: int) -> Fraction:
    """Threshold value of each class for chromatic number ``r``."""
    if tag is ClassTag.BIPARTITE:
        return Fraction(0)
    if r < 3:
        raise ValueError(f"class {tag.value} needs chromatic number at least 3, got {r}")
    if tag is ClassTag.THETA:
        return Fraction(r - 3, r - 2)
    if tag is ClassTag.LAMBDA:
        return Fraction(2 * r - 5, 2 * r - 3)
    return Fraction(r - 2, r - 1)


def tree_class_violations(h: Graph, s: Sequence[int], forest: ForestDecomposition) -> List[Tuple[int, int]]:
    """Pairs ``(s_vertex, tree_index)`` where the vertex sees both sides of the tree."""
    violations = []
    for v in sorted(s):
        row = h.adj[v]
        for i, tree in enumerate(forest.trees):
            if any((row >> a) & 1 for a in tree.side_a) and any((row >> b) & 1 for b in tree.side_b):
                violations.append((v, i))
    return violations


# ---------------------------------------------------------------------------
# Decomposition family
# ---------------------------------------------------------------------------


def _class_pairs(coloring: Coloring) -> Iterator[Tuple[int, int]]:
    for i in range(coloring.k):
        for j in range(i + 1, coloring.k):
            yield i, j


def decomposition_family(
    h: Graph, budget: Optional[TimeBudget] = None, chi: Optional[int] = None
) -> Tuple[Graph, ...]:
    """Class-pair subgraphs over all ``chi(h)``-colourings, up to isomorphism.

    Members are bucketed by Weisfeiler-Lehman hash and confirmed with an exact
    isomorphism test. Labels are dropped.
    """
    budget = TimeBudget.ensure(budget)
    r = chi if chi is not None else chromatic_number(h, budget)
    if r < 3:
        raise ValueError(f"decomposition family needs chromatic number at least 3, got {r}")
    h = h.with_labels(None)
    buckets: dict = {}
    members: List[Graph] = []
    with budget.stage("decomposition_family"):
        for coloring in color_class_partitions(h, r, budget):
            masks = coloring.masks()
            for i, j in _class_pairs(coloring):
                member = h.induced_subgraph(masks[i] | masks[j])
                G = to_networkx(member)
                key = nx.weisfeiler_lehman_graph_hash(G)
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(G, other) for other in bucket):
                    continue
                bucket.append(G)
                members.append(member)
    logger.info(f"Decomposition family of {h!r} has {len(members)} members")
    return tuple(members)


def has_forest_in_decomposition(
    h: Graph, budget: Optional[TimeBudget] = None, chi: Optional[int] = None
) -> Optional[ForestWitness]:
    """First ``r``-colouring (in enumeration order) with a class pair inducing a forest."""
    budget = TimeBudget.ensure(budget)
    r = chi if chi is not None else chromatic_number(h, budget)
    if r < 3:
        raise ValueError(f"decomposition family needs chromatic number at least 3, got {r}")
    with budget.stage("forest_in_decomposition"):
        for coloring in color_class_partitions(h, r, budget):
            masks = coloring.masks()
            for i, j in _class_pairs(coloring):
                if forest_decomposition(h, masks[i] | masks[j]) is not None:
                    return ForestWitness(coloring, (i, j))
    return None


# ---------------------------------------------------------------------------
# Near-acyclic search
# ---------------------------------------------------------------------------


class _RoleSearch:
    """Backtracking assignment of vertices to ``F``, ``S`` and ``U_0..U_{u-1}``.

    Search state per level is immutable: the ``F`` components are kept as a
    tuple of ``(side_a, side_b)`` masks, so undoing a choice is just popping
    the stack.
    """

    def __init__(self, h: Graph, removed: int, budget: TimeBudget):
        self.h = h
        self.removed = removed
        self.budget = budget
        self.degree = h.degrees()

    def _merged(self, v: int, comps: Tuple[Tuple[int, int], ...]):
        """Components after adding ``v`` to ``F``, or ``None`` if that closes a cycle."""
        row = self.h.adj[v]
        same = 1 << v
        other = 0
        rest = []
        for a, b in comps:
            hits = row & (a | b)
            if not hits:
                rest.append((a, b))
                continue
            if hits & (hits - 1):
                return None
            if hits & a:
                same |= b
                other |= a
            else:
                same |= a
                other |= b
        return (same, other), tuple(rest)

    def _options(self, v: int, state) -> List[Tuple[int, object]]:
        f_mask, s_mask, u_masks, comps = state
        h = self.h
        row = h.adj[v]
        options: List[Tuple[int, object]] = []

        merged = self._merged(v, comps)
        if merged is not None:
            (same, other), _ = merged
            ok = True
            for s in iter_bits(s_mask):
                srow = h.adj[s]
                if srow & same and srow & other:
                    ok = False
                    break
            if ok:
                options.append((_F, merged))

        if not row & s_mask and not any(row & a and row & b for a, b in comps):
            options.append((_S, None))

        for i, mask in enumerate(u_masks):
            if not row & mask:
                options.append((_U + i, None))
            if not mask:
                break
        return options

    def _apply(self, v: int, role: int, payload, state):
        f_mask, s_mask, u_masks, comps = state
        bit = 1 << v
        if role == _F:
            new_comp, rest = payload
            return f_mask | bit, s_mask, u_masks, rest + (new_comp,)
        if role == _S:
            return f_mask, s_mask | bit, u_masks, comps
        i = role - _U
        return f_mask, s_mask, u_masks[:i] + (u_masks[i] | bit,) + u_masks[i + 1 :], comps

    def _pick(self, unassigned: int, state):
        """Most constrained vertex: fewest options, then highest degree, then lowest index."""
        best = None
        best_key = None
        for v in iter_bits(unassigned):
            options = self._options(v, state)
            key = (len(options), -self.degree[v], v)
            if best_key is None or key < best_key:
                best, best_key = (v, options), key
                if not options:
                    break
        return best

    def run(self):
        h = self.h
        state = (0, 0, (0,) * self.removed, ())
        if h.n == 0:
            return state
        unassigned = h.full_mask
        v, options = self._pick(unassigned, state)
        frames = [(v, options, 0, state, unassigned)]
        while frames:
            self.budget.tick()
            v, options, pos, state, unassigned = frames[-1]
            if pos == len(options):
                frames.pop()
                continue
            frames[-1] = (v, options, pos + 1, state, unassigned)
            role, payload = options[pos]
            child = self._apply(v, role, payload, state)
            remaining = unassigned & ~(1 << v)
            if not remaining:
                return child
            w, child_options = self._pick(remaining, child)
            if child_options:
                frames.append((w, child_options, 0, child, remaining))
        return None


def _witness_from_state(h: Graph, state) -> NearAcyclicWitness:
    f_mask, s_mask, u_masks, comps = state
    forest = forest_decomposition(h, f_mask)
    if forest is None:
        raise ClassificationError("role search produced a forest part with a cycle")
    removed = 0
    for mask in u_masks:
        removed |= mask
    if is_bipartite(h, h.full_mask & ~removed):
        raise ClassificationError("graph left after removing the independent sets is not 3-chromatic")
    return NearAcyclicWitness(
        removed_sets=tuple(frozenset(iter_bits(mask)) for mask in u_masks),
        s_set=frozenset(iter_bits(s_mask)),
        forest=forest,
    )


def is_r_near_acyclic(
    h: Graph, budget: Optional[TimeBudget] = None, chi: Optional[int] = None
) -> Optional[NearAcyclicWitness]:
    """Witness that ``h`` is r-near-acyclic for ``r = chi(h)``, or ``None``.

    Raises:
        ValueError: ``chi(h) < 3``.
        ClassificationError: a found assignment leaves a bipartite remainder,
            which contradicts ``chi(h) = r``.
    """
    budget = TimeBudget.ensure(budget)
    r = chi if chi is not None else chromatic_number(h, budget)
    if r < 3:
        raise ValueError(f"r-near-acyclicity needs chromatic number at least 3, got {r}")
    with budget.stage("near_acyclic"):
        state = _RoleSearch(h, r - 3, budget).run()
    if state is None:
        logger.info(f"{h!r} is not {r}-near-acyclic")
        return None
    witness = _witness_from_state(h, state)
    logger.info(f"{h!r} is {r}-near-acyclic with |S| = {len(witness.s_set)}, {len(witness.forest.trees)} trees")
    return witness


def is_near_acyclic(h: Graph, budget: Optional[TimeBudget] = None) -> Optional[NearAcyclicWitness]:
    """Near-acyclic witness for 3-chromatic ``h``; ``None`` when ``chi(h) != 3``."""
    budget = TimeBudget.ensure(budget)
    if chromatic_number(h, budget) != 3:
        return None
    return is_r_near_acyclic(h, budget, chi=3)


def forest_witness_from_near_acyclic(h: Graph, witness: NearAcyclicWitness) -> ForestWitness:
    """The r-colouring ``U_1..U_{r-3}, S, V_1, V_2`` whose last two classes induce the forest.

    ``V_1`` and ``V_2`` collect the first and second sides of every tree.
    """
    side_a = frozenset().union(*(t.side_a for t in witness.forest.trees))
    side_b = frozenset().union(*(t.side_b for t in witness.forest.trees))
    coloring = Coloring(tuple(witness.removed_sets) + (witness.s_set, side_a, side_b))
    if not coloring.is_proper(h):
        raise ClassificationError("colouring derived from the near-acyclic witness is not proper")
    pair = tuple(sorted((coloring.classes.index(side_a), coloring.classes.index(side_b))))
    return ForestWitness(coloring, pair)


def chromatic_threshold(h: Graph, budget: Optional[TimeBudget] = None) -> ThresholdReport:
    """Classify ``h`` and return its exact chromatic threshold with witnesses.

    Raises:
        ValueError: ``h`` has no vertices.
        BudgetExceededError: a sub-test ran out of time; ``stage`` names it.
    """
    if h.n == 0:
        raise ValueError("chromatic threshold is undefined for the graph without vertices")
    budget = TimeBudget.ensure(budget)
    chi = chromatic_number(h, budget)
    if chi <= 2:
        logger.info(f"{h!r} is bipartite (chi = {chi})")
        return ThresholdReport(chi=chi, class_tag=ClassTag.BIPARTITE, threshold=Fraction(0))

    near = is_r_near_acyclic(h, budget, chi=chi)
    if near is not None:
        return ThresholdReport(
            chi=chi,
            class_tag=ClassTag.THETA,
            threshold=threshold_for(ClassTag.THETA, chi),
            forest_witness=forest_witness_from_near_acyclic(h, near),
            near_acyclic_witness=near,
        )

    forest = has_forest_in_decomposition(h, budget, chi=chi)
    tag = ClassTag.LAMBDA if forest is not None else ClassTag.PI
    logger.info(f"{h!r} classified {tag.value} with chi = {chi}")
    return ThresholdReport(chi=chi, class_tag=tag, threshold=threshold_for(tag, chi), forest_witness=forest)
