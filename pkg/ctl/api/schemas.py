"""Versioned JSON contract (``"schema": "ctl/1"``) for reports, constructions and checks."""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from ctl.core.config import settings
from ctl.core.graph import ForestDecomposition, ForestTree
from ctl.core.graph6 import emit_graph6
from ctl.models import (
    ClassTag,
    Coloring,
    ConstructionResult,
    ForestWitness,
    NearAcyclicWitness,
    ThresholdReport,
    WitnessCheck,
)
from ctl.models.recipe import ConstructionRecipe


class RationalOut(BaseModel):
    """Exact rational; ``decimal`` is for display only."""

    num: int
    den: int = Field(..., gt=0)
    decimal: str

    @classmethod
    def from_fraction(cls, value: Fraction) -> "RationalOut":
        value = Fraction(value)
        shown = Decimal(value.numerator) / Decimal(value.denominator)
        return cls(num=value.numerator, den=value.denominator, decimal=f"{shown:.6f}")

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)


def json_value(value: Any) -> Any:
    """Make a property value JSON-safe: rationals become ``{num, den, decimal}``, infinity ``"inf"``."""
    if isinstance(value, bool) or isinstance(value, int) or isinstance(value, str) or value is None:
        return value
    if isinstance(value, Fraction):
        return RationalOut.from_fraction(value).model_dump()
    if isinstance(value, float):
        return "inf" if value == math.inf else value
    if isinstance(value, (list, tuple)):
        return [json_value(v) for v in value]
    if isinstance(value, dict):
        return {str(k): json_value(v) for k, v in value.items()}
    return str(value)


class ForestTreeOut(BaseModel):
    vertices: List[int]
    side_a: List[int]
    side_b: List[int]
    edges: List[List[int]]

    @classmethod
    def from_tree(cls, tree: ForestTree) -> "ForestTreeOut":
        return cls(
            vertices=sorted(tree.vertices),
            side_a=sorted(tree.side_a),
            side_b=sorted(tree.side_b),
            edges=[list(e) for e in tree.edges],
        )

    def to_tree(self) -> ForestTree:
        return ForestTree(
            frozenset(self.vertices), frozenset(self.side_a), frozenset(self.side_b), tuple(tuple(e) for e in self.edges)
        )


class ForestWitnessOut(BaseModel):
    """An r-colouring and the index pair of two classes inducing a forest."""

    classes: List[List[int]]
    pair: List[int] = Field(..., min_length=2, max_length=2)

    @classmethod
    def from_witness(cls, witness: ForestWitness) -> "ForestWitnessOut":
        return cls(classes=[sorted(c) for c in witness.coloring.classes], pair=list(witness.pair))

    def to_witness(self) -> ForestWitness:
        return ForestWitness(Coloring(tuple(frozenset(c) for c in self.classes)), (self.pair[0], self.pair[1]))


class NearAcyclicWitnessOut(BaseModel):
    removed_sets: List[List[int]]
    s_set: List[int]
    forest: List[ForestTreeOut]

    @classmethod
    def from_witness(cls, witness: NearAcyclicWitness) -> "NearAcyclicWitnessOut":
        return cls(
            removed_sets=[sorted(s) for s in witness.removed_sets],
            s_set=sorted(witness.s_set),
            forest=[ForestTreeOut.from_tree(t) for t in witness.forest.trees],
        )

    def to_witness(self) -> NearAcyclicWitness:
        return NearAcyclicWitness(
            removed_sets=tuple(frozenset(s) for s in self.removed_sets),
            s_set=frozenset(self.s_set),
            forest=ForestDecomposition(tuple(t.to_tree() for t in self.forest)),
        )


class WitnessesOut(BaseModel):
    forest: Optional[ForestWitnessOut] = None
    near_acyclic: Optional[NearAcyclicWitnessOut] = None


class ErrorOut(BaseModel):
    """Per-graph failure recorded in-stream instead of aborting the batch."""

    kind: str
    message: str
    stage: Optional[str] = None


class ThresholdReportOut(BaseModel):
    """One line of ``ctl classify`` output."""

    model_config = ConfigDict(populate_by_name=True)

    schema_: str = Field(settings.SCHEMA_VERSION, alias="schema")
    index: int = Field(..., description="1-based line number of the input graph")
    graph6: str
    n: int
    chi: Optional[int] = None
    class_: Optional[ClassTag] = Field(None, alias="class")
    threshold: Optional[RationalOut] = None
    witnesses: Optional[WitnessesOut] = None
    checked: Optional[bool] = Field(None, description="True when the witness check re-ran and passed")
    error: Optional[ErrorOut] = None

    @classmethod
    def from_report(
        cls, index: int, graph6: str, n: int, report: ThresholdReport, certificate: bool, checked: Optional[bool]
    ) -> "ThresholdReportOut":
        witnesses = None
        if certificate:
            witnesses = WitnessesOut(
                forest=ForestWitnessOut.from_witness(report.forest_witness) if report.forest_witness else None,
                near_acyclic=(
                    NearAcyclicWitnessOut.from_witness(report.near_acyclic_witness)
                    if report.near_acyclic_witness
                    else None
                ),
            )
        return cls(
            index=index,
            graph6=graph6,
            n=n,
            chi=report.chi,
            class_=report.class_tag,
            threshold=RationalOut.from_fraction(report.threshold),
            witnesses=witnesses,
            checked=checked,
        )

    def to_report(self) -> ThresholdReport:
        """Rebuild the domain report, e.g. for ``ctl verify --witness``."""
        if self.error is not None or self.chi is None or self.class_ is None or self.threshold is None:
            raise ValueError(f"report for graph {self.index} carries no verdict")
        witnesses = self.witnesses or WitnessesOut()
        return ThresholdReport(
            chi=self.chi,
            class_tag=self.class_,
            threshold=self.threshold.to_fraction(),
            forest_witness=witnesses.forest.to_witness() if witnesses.forest else None,
            near_acyclic_witness=witnesses.near_acyclic.to_witness() if witnesses.near_acyclic else None,
        )

    def dump(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True, exclude_none=True)


class ConstructionOut(BaseModel):
    """Sidecar written next to a constructed graph."""

    model_config = ConfigDict(populate_by_name=True)

    schema_: str = Field(settings.SCHEMA_VERSION, alias="schema")
    recipe: ConstructionRecipe
    graph6: str
    verified: Dict[str, Any] = Field(default_factory=dict, description="Properties computed exactly on the graph")
    reported: Dict[str, Any] = Field(default_factory=dict, description="Parameters and claims that were not checked")

    @classmethod
    def from_result(cls, recipe: ConstructionRecipe, result: ConstructionResult) -> "ConstructionOut":
        return cls(
            recipe=recipe,
            graph6=emit_graph6(result.graph).decode("ascii"),
            verified=json_value(result.verified),
            reported=json_value(result.reported),
        )

    def dump(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


class CheckOut(BaseModel):
    name: str
    passed: bool
    detail: List[str] = Field(default_factory=list)

    @classmethod
    def from_witness_check(cls, name: str, check: WitnessCheck) -> "CheckOut":
        return cls(name=name, passed=check.passed, detail=list(check.violations))


class VerifyOut(BaseModel):
    """Diagnostics of ``ctl verify``."""

    model_config = ConfigDict(populate_by_name=True)

    schema_: str = Field(settings.SCHEMA_VERSION, alias="schema")
    graph6: str
    n: int
    passed: bool
    checks: List[CheckOut]

    def dump(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)
