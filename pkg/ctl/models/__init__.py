"""Immutable result records passed between the services and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ctl.core.graph import ForestDecomposition, Graph, iter_bits, mask_of

__all__ = [
    "ClassTag",
    "Coloring",
    "ForestWitness",
    "NearAcyclicWitness",
    "ThresholdReport",
    "Embedding",
    "WitnessCheck",
    "SpherePoint",
    "ConstructionResult",
]


class ClassTag(str, Enum):
    BIPARTITE = "BIPARTITE"
    THETA = "THETA"
    LAMBDA = "LAMBDA"
    PI = "PI"


@dataclass(frozen=True)
class Coloring:
    """A partition of the vertices into colour classes.

    Classes are kept sorted by their smallest member, so two colourings that
    differ only by a permutation of colours compare equal.
    """

    classes: Tuple[frozenset, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted((frozenset(c) for c in self.classes), key=lambda c: min(c) if c else -1))
        object.__setattr__(self, "classes", ordered)

    @classmethod
    def from_colours(cls, colours: Sequence[int]) -> "Coloring":
        """Build from a per-vertex colour list (any colour names)."""
        groups: Dict[int, set] = {}
        for v, c in enumerate(colours):
            groups.setdefault(c, set()).add(v)
        return cls(tuple(frozenset(members) for members in groups.values()))

    @classmethod
    def from_masks(cls, masks: Iterable[int]) -> "Coloring":
        return cls(tuple(frozenset(iter_bits(mask)) for mask in masks))

    @property
    def k(self) -> int:
        return len(self.classes)

    def masks(self) -> Tuple[int, ...]:
        return tuple(mask_of(c) for c in self.classes)

    def colour_of(self, n: int) -> List[int]:
        colours = [-1] * n
        for i, members in enumerate(self.classes):
            for v in members:
                colours[v] = i
        return colours

    def is_proper(self, g: Graph) -> bool:
        """Classes are nonempty, partition ``V(g)`` and are independent in ``g``."""
        seen = 0
        for mask in self.masks():
            if not mask or seen & mask or not g.is_independent(mask):
                return False
            seen |= mask
        return seen == g.full_mask


@dataclass(frozen=True)
class ForestWitness:
    """An ``r``-colouring and the pair of classes whose union induces a forest."""

    coloring: Coloring
    pair: Tuple[int, int]

    @property
    def vertices(self) -> frozenset:
        i, j = self.pair
        return self.coloring.classes[i] | self.coloring.classes[j]


@dataclass(frozen=True)
class NearAcyclicWitness:
    removed_sets: Tuple[frozenset, ...]
    s_set: frozenset
    forest: ForestDecomposition

    @property
    def removed(self) -> frozenset:
        return frozenset().union(*self.removed_sets) if self.removed_sets else frozenset()


@dataclass(frozen=True)
class ThresholdReport:
    """Verdict of the classification for one graph."""

    chi: int
    class_tag: ClassTag
    threshold: Fraction
    forest_witness: Optional[ForestWitness] = None
    near_acyclic_witness: Optional[NearAcyclicWitness] = None

    @property
    def r(self) -> int:
        return self.chi


@dataclass(frozen=True)
class Embedding:
    """Injective map ``pattern vertex i -> host vertex mapping[i]``."""

    mapping: Tuple[int, ...]

    def image(self) -> frozenset:
        return frozenset(self.mapping)


@dataclass(frozen=True)
class WitnessCheck:
    passed: bool
    violations: Tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class SpherePoint:
    """Point of the unit sphere stored as integers scaled by ``10**digits``."""

    units: Tuple[int, ...]
    digits: int = 12

    @property
    def dimension(self) -> int:
        return len(self.units) - 1

    @property
    def coords(self) -> Tuple[Decimal, ...]:
        return tuple(Decimal(u).scaleb(-self.digits) for u in self.units)

    def dot_units(self, other: "SpherePoint") -> int:
        """Exact dot product scaled by ``10**(2 * digits)``."""
        return sum(a * b for a, b in zip(self.units, other.units))


@dataclass
class ConstructionResult:
    """A generated graph with its exactly verified and its reported-only properties."""

    graph: Graph
    verified: Dict[str, object] = field(default_factory=dict)
    reported: Dict[str, object] = field(default_factory=dict)
    points: Optional[List[Tuple[int, SpherePoint]]] = None  # (vertex, point) pairs for geometric vertices
