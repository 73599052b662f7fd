"""Generators for the extremal graph families and the lower-bound witnesses.

Every generator is a pure function of its parameters and seed. Randomized
generators draw from :func:`ctl.core.rng.make_rng` streams, so the same recipe
always yields the same graph6 bytes.

Service-level entry point is :func:`build`, which turns a
:class:`~ctl.models.recipe.ConstructionRecipe` into a
:class:`~ctl.models.ConstructionResult` with the properties that were verified
exactly kept apart from those that are only reported.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from ctl.core.budget import TimeBudget
from ctl.core.errors import ConstructionError, SearchExhaustedError
from ctl.core.graph import (
    Graph,
    check_size,
    complete_multipartite,
    forest_decomposition,
    girth,
    iter_bits,
    join,
    mask_of,
    min_degree,
    min_degree_fraction,
    odd_girth,
    shortest_cycle,
)
from ctl.core.graph6 import parse_graph6
from ctl.core.rng import check_seed, make_rng
from ctl.models import ConstructionResult, SpherePoint
from ctl.models.recipe import ConstructionRecipe, Family
from ctl.services.catalog import lookup, mycielski
from ctl.services.chromatic import chromatic_number, is_k_colorable
from ctl.services.classify import has_forest_in_decomposition, is_r_near_acyclic
from ctl.services.sphere import (
    borsuk_graph,
    borsuk_sample,
    check_angle,
    cos_units,
    delta_for_cap,
    sample_points,
    sin_units,
)
from ctl.services.verify import odd_cycle_oracle, scan_triangles

logger = logging.getLogger(__name__)

__all__ = [
    "zykov",
    "kneser",
    "hajnal",
    "borsuk_sample",
    "borsuk_graph",
    "borsuk_hajnal",
    "borsuk_hajnal_r",
    "erdos_graph",
    "pi_witness",
    "theta_witness",
    "lambda_witness",
    "random_construction",
    "blowup_witness",
    "mycielski",
    "build",
]


class _Rejected(Exception):
    """One randomized attempt did not meet its acceptance test."""


def _connect(adj: List[int], v: int, mask: int) -> None:
    """Add every edge from ``v`` to ``mask`` in both directions."""
    adj[v] |= mask
    for u in iter_bits(mask):
        adj[u] |= 1 << v


def _block(start: int, size: int) -> int:
    return ((1 << size) - 1) << start


def _set_label(members: Sequence[int]) -> str:
    return "{" + ",".join(str(i + 1) for i in members) + "}"


# ---------------------------------------------------------------------------
# Zykov, Kneser and Hajnal graphs
# ---------------------------------------------------------------------------


def zykov(trees: Sequence[Graph], r: int, t: int = 1) -> Graph:
    """Zykov graph on the trees ``T_1..T_l`` with ``r - 3`` joined sets, apexes blown up to ``t``.

    Vertex order: the trees (in order), then ``t`` copies of ``u_I`` for each
    ``I`` in bitmask order (labelled ``S{I}``), then ``t`` copies of each ``w_j``
    (labelled ``S'j``). ``u_I`` sees the
    ``A`` side of tree ``j`` for ``j`` in ``I`` and the ``B`` side otherwise;
    every ``w_j`` copy sees everything outside its own copy class.

    Raises:
        ConstructionError: no trees, a tree that is not a tree, ``r < 3`` or ``t < 1``.
        SizingError: the vertex count would exceed the cap.
    """
    if not trees:
        raise ConstructionError("Zykov graph needs at least one tree")
    if r < 3 or t < 1:
        raise ConstructionError(f"Zykov graph needs r >= 3 and t >= 1, got r={r}, t={t}")
    ell = len(trees)
    tree_total = sum(tree.n for tree in trees)
    n = tree_total + ((1 << ell) + r - 3) * t
    check_size(n, f"Zykov graph (l={ell}, r={r}, t={t})")

    sides: List[Tuple[int, int]] = []
    labels: List[str] = []
    edges: List[Tuple[int, int]] = []
    offset = 0
    for j, tree in enumerate(trees, start=1):
        decomposition = forest_decomposition(tree)
        if tree.n == 0 or decomposition is None or len(decomposition.trees) != 1:
            raise ConstructionError(f"tree {j} is not a tree")
        (component,) = decomposition.trees
        sides.append((mask_of(v + offset for v in component.side_a), mask_of(v + offset for v in component.side_b)))
        for v in range(tree.n):
            labels.append(f"T{j}:{'A' if v in component.side_a else 'B'}:{v}")
        edges.extend((u + offset, v + offset) for u, v in tree.edges())
        offset += tree.n

    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    u_start = tree_total
    w_start = u_start + (1 << ell) * t
    for subset in range(1 << ell):
        seen = 0
        for j, (side_a, side_b) in enumerate(sides):
            seen |= side_a if (subset >> j) & 1 else side_b
        for copy in range(t):
            _connect(adj, u_start + subset * t + copy, seen)
        labels.extend([f"S{_set_label([j for j in range(ell) if (subset >> j) & 1])}"] * t)

    everything = (1 << n) - 1
    for j in range(r - 3):
        own = _block(w_start + j * t, t)
        for copy in range(t):
            _connect(adj, w_start + j * t + copy, everything & ~own)
        labels.extend([f"S'{j + 1}"] * t)

    graph = Graph(n, adj, labels)
    logger.info(f"Zykov graph l={ell} r={r} t={t}: {graph!r}")
    return graph


def kneser(n: int, k: int) -> Graph:
    """Kneser graph ``Kn(n, k)``: ``k``-subsets of ``[n]`` in colex order, edges between disjoint sets.

    Labels are the subsets with 1-based elements, e.g. ``{1,3}``.
    """
    if not n >= 2 * k >= 2:
        raise ConstructionError(f"Kneser graph needs n >= 2k >= 2, got n={n}, k={k}")
    check_size(math.comb(n, k), f"Kneser graph Kn({n},{k})")
    subsets = sorted(combinations(range(n), k), key=lambda s: s[::-1])
    index = {s: i for i, s in enumerate(subsets)}
    adj = []
    for s in subsets:
        rest = sorted(set(range(n)) - set(s))
        adj.append(mask_of(index[c] for c in combinations(rest, k)))
    graph = Graph(len(subsets), adj, [_set_label(s) for s in subsets])
    logger.info(f"Kneser graph Kn({n},{k}): {graph!r}")
    return graph


def hajnal(k: int, l: int, m: int) -> Graph:  # noqa: E741
    """Hajnal graph ``H(k, l, m)``.

    ``Kn(2m+k, m)`` first, then ``A`` (``2l`` vertices in ``2m+k`` equal parts
    labelled ``A1, A2, ...``) and ``B`` (``l`` vertices). ``A`` and ``B`` are
    completely joined and a Kneser vertex ``S`` sees the part ``A_j`` for every
    ``j`` in ``S``. Triangle-free exactly when ``m > k``.
    """
    if k < 1 or l < 1 or m < 1:
        raise ConstructionError(f"Hajnal graph needs k, l, m >= 1, got k={k}, l={l}, m={m}")
    ground = 2 * m + k
    if l % ground:
        raise ConstructionError(f"Hajnal graph needs 2m + k = {ground} to divide l = {l}")
    base = math.comb(ground, m)
    n = base + 3 * l
    check_size(n, f"Hajnal graph H({k},{l},{m})")
    if m <= k:
        logger.warning(f"Hajnal graph H({k},{l},{m}) has m <= k; its Kneser part contains triangles")

    kn = kneser(ground, m)
    part = 2 * l // ground
    a_parts = [_block(base + j * part, part) for j in range(ground)]
    a_mask = _block(base, 2 * l)
    b_mask = _block(base + 2 * l, l)

    adj = list(kn.adj) + [0] * (3 * l)
    subsets = sorted(combinations(range(ground), m), key=lambda s: s[::-1])
    for v, s in enumerate(subsets):
        _connect(adj, v, _union(a_parts[j] for j in s))
    for v in iter_bits(a_mask):
        _connect(adj, v, b_mask)

    labels = [f"KN:{label}" for label in kn.labels] + [f"A{j + 1}" for j in range(ground) for _ in range(part)]
    labels += ["B"] * l
    graph = Graph(n, adj, labels)
    logger.info(f"Hajnal graph H({k},{l},{m}): {graph!r}")
    return graph


def _union(masks) -> int:
    total = 0
    for mask in masks:
        total |= mask
    return total


# ---------------------------------------------------------------------------
# Borsuk-Hajnal graphs
# ---------------------------------------------------------------------------


def _borsuk_hajnal_parts(
    k: int,
    eps: Fraction,
    delta: Fraction,
    w_size: int,
    u_points: int,
    seed: int,
    base_points: Optional[Sequence[SpherePoint]] = None,
    b_prime: Optional[Graph] = None,
    phi: Optional[Sequence[int]] = None,
    w_points: Optional[Sequence[SpherePoint]] = None,
) -> Tuple[Graph, List[Tuple[int, SpherePoint]]]:
    eps = check_angle(eps, "eps")
    delta = check_angle(delta, "delta")
    check_seed(seed)
    if w_size < 0 or w_size % 2:
        raise ConstructionError(f"w_size must be a non-negative even number, got {w_size}")
    if base_points is None:
        base_points = sample_points(k, u_points, make_rng(seed, 0))
    base_points = list(base_points)
    if w_points is None:
        w_points = sample_points(k, w_size, make_rng(seed, 1, 0))
    w_points = list(w_points)
    if len(w_points) != w_size:
        raise ConstructionError(f"{len(w_points)} W points for w_size {w_size}")

    if b_prime is None:
        b_prime = borsuk_graph(base_points, eps)
    if phi is None:
        if b_prime.n != len(base_points):
            raise ConstructionError("a custom B' without phi must have one vertex per base point")
        phi = list(range(b_prime.n))
    phi = list(phi)
    if len(phi) != b_prime.n or any(not 0 <= x < len(base_points) for x in phi):
        raise ConstructionError("phi must map every vertex of B' to a base point")
    bound = -cos_units(eps)
    for u, v in b_prime.edges():
        if base_points[phi[u]].dot_units(base_points[phi[v]]) > bound:
            raise ConstructionError(f"phi is not a homomorphism: edge {{{u}, {v}}} maps to a non-edge")

    u_count = b_prime.n
    n = u_count + w_size + w_size // 2
    check_size(n, "Borsuk-Hajnal graph")
    w_start = u_count
    x_mask = _block(u_count + w_size, w_size // 2)
    adj = list(b_prime.adj) + [0] * (n - u_count)
    threshold = sin_units(delta)
    for i, w in enumerate(w_points):
        seen = mask_of(u for u in range(u_count) if base_points[phi[u]].dot_units(w) > threshold)
        _connect(adj, w_start + i, seen | x_mask)

    labels = [f"U{phi[u]}" for u in range(u_count)] + [f"W{i}" for i in range(w_size)]
    labels += [f"X{i}" for i in range(w_size // 2)]
    points = [(u, base_points[phi[u]]) for u in range(u_count)]
    points += [(w_start + i, p) for i, p in enumerate(w_points)]
    return Graph(n, adj, labels), points


def borsuk_hajnal(
    k: int,
    eps: Fraction,
    delta: Fraction,
    w_size: int,
    u_points: int,
    seed: int,
    base_points: Optional[Sequence[SpherePoint]] = None,
    b_prime: Optional[Graph] = None,
    phi: Optional[Sequence[int]] = None,
    w_points: Optional[Sequence[SpherePoint]] = None,
) -> Graph:
    """Borsuk-Hajnal graph ``BH`` on ``U' + W + X``.

    ``U'`` defaults to the Borsuk graph of ``u_points`` sampled points with the
    identity map; a caller-supplied ``(b_prime, phi)`` pair is accepted when
    ``phi`` is a homomorphism into the Borsuk graph of ``base_points``. ``W``
    is ``w_size`` sampled points, ``X`` has ``w_size / 2`` vertices and
    ``K[W, X]`` is complete. ``u`` and ``w`` are adjacent iff the angle between
    ``phi(u)`` and ``w`` is below ``pi/2 - delta``.
    """
    graph, _ = _borsuk_hajnal_parts(k, eps, delta, w_size, u_points, seed, base_points, b_prime, phi, w_points)
    logger.info(f"Borsuk-Hajnal graph k={k} eps={eps} delta={delta}: {graph!r}")
    return graph


def _add_joined_sets(bh: Graph, r: int, size: int) -> Graph:
    if r == 3:
        return bh
    shell = complete_multipartite([size] * (r - 3))
    shell = shell.with_labels([f"Y{int(label[1:]) + 1}" for label in shell.labels])
    return join(bh, shell)


def borsuk_hajnal_r(
    r: int,
    k: int,
    eps: Fraction,
    delta: Fraction,
    w_size: int,
    u_points: int,
    seed: int,
    **kwargs,
) -> Graph:
    """``BH`` joined to ``r - 3`` independent sets ``Y_i`` of size ``w_size`` (complete between them)."""
    if r < 3:
        raise ConstructionError(f"BH_r needs r >= 3, got {r}")
    bh, _ = _borsuk_hajnal_parts(k, eps, delta, w_size, u_points, seed, **kwargs)
    return _add_joined_sets(bh, r, w_size)


# ---------------------------------------------------------------------------
# Erdős graphs
# ---------------------------------------------------------------------------


def _delete_short_cycles(g: Graph, l: int) -> Graph:  # noqa: E741
    while True:
        cycle = shortest_cycle(g)
        if cycle is None or len(cycle) >= l:
            return g
        victim = max(cycle, key=lambda v: (g.degree(v), -v))
        g = g.delete_vertices([victim])


def _sample_gnp(n: int, p: float, rng: np.random.Generator) -> List[int]:
    upper = np.triu(rng.random((n, n)) < p, k=1)
    adj = [0] * n
    for u, v in zip(*np.nonzero(upper)):
        adj[int(u)] |= 1 << int(v)
        adj[int(v)] |= 1 << int(u)
    return adj


def erdos_graph(
    k: int,
    l: int,  # noqa: E741
    seed: int,
    attempts: int = 50,
    n_vertices: Optional[int] = None,
    budget: Optional[TimeBudget] = None,
) -> Graph:
    """A graph with chromatic number at least ``k`` and girth at least ``l``.

    The certified catalog is tried first. Otherwise up to ``attempts`` random
    graphs ``G(n, n^(1/l - 1))`` are sampled, one vertex of every cycle shorter
    than ``l`` is deleted, and the result is accepted only once ``chi >= k`` is
    confirmed by an exact colouring search.

    Raises:
        ConstructionError: ``k < 2`` or ``l < 3``.
        SearchExhaustedError: no attempt produced a verified graph.
    """
    if k < 2 or l < 3:
        raise ConstructionError(f"Erdős graph needs k >= 2 and l >= 3, got k={k}, l={l}")
    check_seed(seed)
    entry = lookup(k, l)
    if entry is not None:
        logger.info(f"Erdős graph ({k},{l}) from catalog entry {entry.name}")
        return entry.graph

    budget = TimeBudget.ensure(budget)
    n = n_vertices if n_vertices is not None else max(40, 8 * k * l)
    check_size(n, "Erdős graph search")
    p = n ** (1 / l - 1)
    graph: Optional[Graph] = None
    try:
        for attempt in Retrying(stop=stop_after_attempt(attempts), retry=retry_if_exception_type(_Rejected)):
            with attempt:
                number = attempt.retry_state.attempt_number
                rng = make_rng(seed, 2, number - 1)
                candidate = _delete_short_cycles(Graph(n, _sample_gnp(n, p, rng)), l)
                if is_k_colorable(candidate, k - 1, budget) is not None:
                    logger.info(f"Erdős attempt {number}: {candidate!r} is {k - 1}-colourable")
                    raise _Rejected(number)
                graph = candidate
    except RetryError as exc:
        raise SearchExhaustedError(f"no verified ({k},{l})-Erdős graph after {attempts} attempts") from exc
    assert graph is not None
    if girth(graph) < l:
        raise ConstructionError(f"Erdős candidate failed its girth check ({girth(graph)} < {l})")
    logger.info(f"Erdős graph ({k},{l}) found by random search: {graph!r}")
    return graph


# ---------------------------------------------------------------------------
# Lower-bound witnesses
# ---------------------------------------------------------------------------


def _chi_at_least_three(h: Graph, budget: TimeBudget) -> int:
    r = chromatic_number(h, budget)
    if r < 3:
        raise ConstructionError(f"witness constructions need chi(h) >= 3, got {r}")
    return r


def _shell_join(inner: Graph, parts: int) -> Graph:
    """``inner`` joined to a complete ``parts``-partite graph with classes of size ``v(inner)``."""
    inner = inner.with_labels(["G0"] * inner.n)
    if parts == 0:
        return inner
    shell = complete_multipartite([inner.n] * parts)
    shell = shell.with_labels([f"G{int(label[1:]) + 1}" for label in shell.labels])
    return join(inner, shell)


def pi_witness(h: Graph, c: int, seed: int, attempts: int = 50, budget: Optional[TimeBudget] = None) -> Graph:
    """Balanced complete ``(r-1)``-partite graph with one class replaced by a ``(c, |h|+1)``-Erdős graph.

    Minimum degree is exactly ``(r-2)/(r-1)`` of the vertex count.

    Raises:
        ConstructionError: ``chi(h) < 3`` or the decomposition family of ``h``
            contains a forest.
    """
    budget = TimeBudget.ensure(budget)
    r = _chi_at_least_three(h, budget)
    if has_forest_in_decomposition(h, budget, chi=r) is not None:
        raise ConstructionError("pi witness needs a decomposition family without forests")
    inner = erdos_graph(c, h.n + 1, seed, attempts=attempts, budget=budget)
    graph = _shell_join(inner, r - 2)
    logger.info(f"pi witness for {h!r} (r={r}, c={c}): {graph!r}")
    return graph


def theta_witness(h: Graph, c: int, seed: int, attempts: int = 50, budget: Optional[TimeBudget] = None) -> Graph:
    """Balanced complete ``(r-2)``-partite graph with one class replaced by a ``(c, |h|+1)``-Erdős graph.

    For ``r = 3`` the output is the Erdős graph itself.
    """
    budget = TimeBudget.ensure(budget)
    r = _chi_at_least_three(h, budget)
    inner = erdos_graph(c, h.n + 1, seed, attempts=attempts, budget=budget)
    graph = _shell_join(inner, r - 3)
    logger.info(f"theta witness for {h!r} (r={r}, c={c}): {graph!r}")
    return graph


def blowup_witness(
    h: Graph, c: int, t: int, seed: int, attempts: int = 50, budget: Optional[TimeBudget] = None
) -> Graph:
    """Every vertex of a ``(c, |h|+1)``-Erdős graph blown up to ``t`` copies.

    Each ``|h|``-vertex subgraph sits inside the blow-up of a forest, so it is
    bipartite and the output is ``h``-free.
    """
    if t < 1:
        raise ConstructionError(f"blow-up size must be at least 1, got {t}")
    budget = TimeBudget.ensure(budget)
    _chi_at_least_three(h, budget)
    inner = erdos_graph(c, h.n + 1, seed, attempts=attempts, budget=budget)
    check_size(inner.n * t, "blow-up witness")
    adj = []
    for v in range(inner.n):
        row = _union(_block(u * t, t) for u in inner.neighbors(v))
        adj.extend([row] * t)
    graph = Graph(inner.n * t, adj, [f"B{v}" for v in range(inner.n) for _ in range(t)])
    logger.info(f"blow-up witness for {h!r} (c={c}, t={t}): {graph!r}")
    return graph


def lambda_witness(
    h: Graph,
    k: int = 2,
    nu: Fraction = Fraction(1, 5),
    u_points: int = 12,
    seed: int = 0,
    max_attempts: int = 200,
    budget: Optional[TimeBudget] = None,
) -> ConstructionResult:
    """``BH_r`` parameterised for an ``h`` that is not ``r``-near-acyclic, with its property report.

    ``delta`` is the largest value whose caps cover ``(1 - nu) / 2`` of the
    sphere, ``eps = delta / (2k)`` and ``|W|`` is the least even size meeting
    the degree inequality. ``W`` is re-sampled until every ``U'`` vertex has at
    least ``(1/2 - nu)|W|`` neighbours in ``W``.

    Raises:
        ConstructionError: ``chi(h) < 3``, ``h`` is ``r``-near-acyclic or ``nu``
            is out of range.
        SearchExhaustedError: ``max_attempts`` samples of ``W`` all fell short.
    """
    budget = TimeBudget.ensure(budget)
    r = _chi_at_least_three(h, budget)
    if is_r_near_acyclic(h, budget, chi=r) is not None:
        raise ConstructionError(f"lambda witness needs h not {r}-near-acyclic")
    nu = Fraction(nu)
    target = Fraction(2 * r - 5, 2 * r - 3) - nu
    if not 0 < nu < Fraction(1, 2) or target <= 0:
        raise ConstructionError(f"nu must lie in (0, {Fraction(2 * r - 5, 2 * r - 3)}), got {nu}")

    delta = delta_for_cap(k, float((1 - nu) / 2))
    eps = delta / (2 * k)
    w_size = math.ceil(2 * target * u_points / (nu * (2 * r - 5)))
    w_size = max(2, w_size + w_size % 2)
    base_points = sample_points(k, u_points, make_rng(seed, 0))
    threshold = sin_units(delta)
    needed = (Fraction(1, 2) - nu) * w_size

    w_points: List[SpherePoint] = []
    attempts_used = 0
    try:
        for attempt in Retrying(stop=stop_after_attempt(max_attempts), retry=retry_if_exception_type(_Rejected)):
            with attempt:
                attempts_used = attempt.retry_state.attempt_number
                sample = sample_points(k, w_size, make_rng(seed, 1, attempts_used - 1))
                for u in base_points:
                    if sum(1 for w in sample if u.dot_units(w) > threshold) < needed:
                        raise _Rejected(attempts_used)
                w_points = sample
    except RetryError as exc:
        raise SearchExhaustedError(f"no W sample met the degree condition in {max_attempts} attempts") from exc
    if attempts_used > 1:
        logger.warning(f"lambda witness re-sampled W {attempts_used - 1} times")

    bh, points = _borsuk_hajnal_parts(k, eps, delta, w_size, u_points, seed, base_points=base_points, w_points=w_points)
    graph = _add_joined_sets(bh, r, w_size)
    u_count = u_points
    w_mask = _block(u_count, w_size)
    x_mask = _block(u_count + w_size, w_size // 2)
    fraction = min_degree_fraction(graph)
    verified: Dict[str, object] = {
        "n": graph.n,
        "edges": graph.num_edges,
        "min_degree_fraction": fraction,
        "min_degree_target_met": fraction >= target,
        "w_independent": graph.is_independent(w_mask),
        "x_independent": graph.is_independent(x_mask),
        "wx_complete": all((graph.adj[w] & x_mask) == x_mask for w in iter_bits(w_mask)),
        "ux_edges": sum((graph.adj[u] & x_mask).bit_count() for u in range(u_count)),
        "y_independent": [graph.is_independent(_block(bh.n + i * w_size, w_size)) for i in range(r - 3)],
    }
    short = odd_cycle_oracle(bh, iter_bits(w_mask), min(9, bh.n), budget)
    verified["short_odd_cycles_meeting_w_once"] = len(short)
    reported: Dict[str, object] = {
        "r": r,
        "nu": nu,
        "target_min_degree_fraction": target,
        "delta": delta,
        "eps": eps,
        "w_size": w_size,
        "w_attempts": attempts_used,
    }
    logger.info(f"lambda witness for {h!r} (r={r}): {graph!r}, min degree fraction {fraction}")
    return ConstructionResult(graph, verified, reported, points)


def random_construction(r: int, n: int, p: float, f: Graph, seed: int) -> Graph:
    """``G(n, p)`` cut into ``r - 1`` balanced parts with ``f`` planted in the first.

    Intra-part edges are removed except those of the planted ``f`` (on the
    first ``v(f)`` vertices). For every pair of ``f``-vertices the edges to
    their common neighbours outside the first part are removed, with common
    neighbourhoods taken before any such removal.
    """
    if r < 3:
        raise ConstructionError(f"random construction needs r >= 3, got {r}")
    if not 0 < p < 1:
        raise ConstructionError(f"p must lie in (0, 1), got {p}")
    check_size(n, "random construction")
    sizes = [n // (r - 1) + (1 if i < n % (r - 1) else 0) for i in range(r - 1)]
    if f.n > sizes[0]:
        raise ConstructionError(f"f has {f.n} vertices but the first part only {sizes[0]}")

    adj = _sample_gnp(n, p, make_rng(seed, 0))
    parts = []
    start = 0
    for size in sizes:
        parts.append(_block(start, size))
        start += size
    for part in parts:
        for v in iter_bits(part):
            adj[v] &= ~part
    for u, v in f.edges():
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    outside = ((1 << n) - 1) & ~parts[0]
    before = list(adj)
    for u, v in combinations(range(f.n), 2):
        for x in iter_bits(before[u] & before[v] & outside):
            adj[u] &= ~(1 << x)
            adj[v] &= ~(1 << x)
            adj[x] &= ~((1 << u) | (1 << v))

    labels = []
    for i, size in enumerate(sizes):
        labels.extend([f"V{i + 1}"] * size)
    for i in range(f.n):
        labels[i] = f"V1:F{i}"
    graph = Graph(n, adj, labels)
    logger.info(f"random construction r={r} n={n} p={p} f={f!r}: {graph!r}")
    return graph


# ---------------------------------------------------------------------------
# Recipe dispatch
# ---------------------------------------------------------------------------


def _length(value) -> object:
    return "inf" if value == math.inf else value


def _basic(graph: Graph) -> Dict[str, object]:
    props: Dict[str, object] = {"n": graph.n, "edges": graph.num_edges, "min_degree": min_degree(graph)}
    if graph.n:
        props["min_degree_fraction"] = min_degree_fraction(graph)
    return props


def build(recipe: ConstructionRecipe, budget: Optional[TimeBudget] = None) -> ConstructionResult:
    """Run the generator a recipe names and attach its property report."""
    params = recipe.typed_params()
    family = recipe.family
    seed = recipe.seed
    reported: Dict[str, object] = {}
    points = None

    if family is Family.ZYKOV:
        trees = [parse_graph6(t) for t in params.trees]
        graph = zykov(trees, params.r, params.t)
        verified = _basic(graph)
        verified["vertex_count_formula"] = graph.n == sum(t.n for t in trees) + ((1 << len(trees)) + params.r - 3) * params.t
        reported["chi"] = params.r
    elif family is Family.KNESER:
        graph = kneser(params.n, params.k)
        verified = _basic(graph)
        verified["regular"] = len(set(graph.degrees())) == 1
        reported["chi"] = params.n - 2 * params.k + 2
    elif family is Family.HAJNAL:
        graph = hajnal(params.k, params.l, params.m)
        verified = _basic(graph)
        triangles = scan_triangles(graph)
        verified["triangles"] = triangles
        verified["triangle_free"] = triangles == 0
        reported["chi_lower_bound"] = params.k + 2
    elif family is Family.BORSUK:
        graph, sampled = borsuk_sample(params.k, params.eps, params.n_points, seed)
        points = list(enumerate(sampled))
        verified = _basic(graph)
        verified["odd_girth"] = _length(odd_girth(graph))
        reported["eps"] = params.eps
    elif family in (Family.BORSUK_HAJNAL, Family.BORSUK_HAJNAL_R):
        bh, points = _borsuk_hajnal_parts(params.k, params.eps, params.delta, params.w_size, params.u_points, seed)
        r = params.r if family is Family.BORSUK_HAJNAL_R else 3
        graph = _add_joined_sets(bh, r, params.w_size)
        u_count = params.u_points
        w_mask = _block(u_count, params.w_size)
        x_mask = _block(u_count + params.w_size, params.w_size // 2)
        verified = _basic(graph)
        verified["w_independent"] = graph.is_independent(w_mask)
        verified["x_independent"] = graph.is_independent(x_mask)
        verified["wx_complete"] = all((graph.adj[w] & x_mask) == x_mask for w in iter_bits(w_mask))
        verified["ux_edges"] = sum((graph.adj[u] & x_mask).bit_count() for u in range(u_count))
        reported.update({"eps": params.eps, "delta": params.delta, "r": r})
    elif family is Family.ERDOS:
        graph = erdos_graph(params.k, params.l, seed, params.attempts, params.n_vertices, budget)
        verified = _basic(graph)
        verified["chi_at_least"] = params.k
        verified["girth"] = _length(girth(graph))
    elif family in (Family.PI_WITNESS, Family.THETA_WITNESS):
        h = parse_graph6(params.h)
        maker = pi_witness if family is Family.PI_WITNESS else theta_witness
        graph = maker(h, params.c, seed, params.attempts, budget)
        verified = _basic(graph)
        verified["chi_at_least"] = params.c
    elif family is Family.LAMBDA_WITNESS:
        h = parse_graph6(params.h)
        result = lambda_witness(h, params.k, params.nu, params.u_points, seed, params.max_attempts, budget)
        result.verified.update(_basic(result.graph))
        return result
    elif family is Family.RANDOM_CONSTRUCTION:
        f = parse_graph6(params.f)
        graph = random_construction(params.r, params.n, params.p, f, seed)
        verified = _basic(graph)
        verified["planted_f_present"] = all(graph.has_edge(u, v) for u, v in f.edges())
        verified["triangles"] = scan_triangles(graph)
    elif family is Family.BLOWUP_WITNESS:
        h = parse_graph6(params.h)
        graph = blowup_witness(h, params.c, params.t, seed, params.attempts, budget)
        verified = _basic(graph)
        verified["chi_at_least"] = params.c
    else:  # pragma: no cover - Family is closed
        raise ConstructionError(f"unknown family {family}")
    return ConstructionResult(graph, verified, reported, points)
