"""Construction recipes: a generator family, its validated parameters and a seed."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional, Type

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, field_validator, model_validator

from ctl.core.errors import CtlError
from ctl.core.graph6 import parse_graph6


class Family(str, Enum):
    ZYKOV = "ZYKOV"
    KNESER = "KNESER"
    HAJNAL = "HAJNAL"
    BORSUK = "BORSUK"
    BORSUK_HAJNAL = "BORSUK_HAJNAL"
    BORSUK_HAJNAL_R = "BORSUK_HAJNAL_R"
    ERDOS = "ERDOS"
    PI_WITNESS = "PI_WITNESS"
    THETA_WITNESS = "THETA_WITNESS"
    LAMBDA_WITNESS = "LAMBDA_WITNESS"
    RANDOM_CONSTRUCTION = "RANDOM_CONSTRUCTION"
    BLOWUP_WITNESS = "BLOWUP_WITNESS"


RANDOMIZED = frozenset(
    {
        Family.BORSUK,
        Family.BORSUK_HAJNAL,
        Family.BORSUK_HAJNAL_R,
        Family.ERDOS,
        Family.PI_WITNESS,
        Family.THETA_WITNESS,
        Family.LAMBDA_WITNESS,
        Family.RANDOM_CONSTRUCTION,
        Family.BLOWUP_WITNESS,
    }
)


def parse_fraction(value: Any) -> Fraction:
    """Accept ``Fraction``, ``int`` or ``"num/den"`` strings; floats are rejected as inexact."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"expected an exact rational such as '1/10', got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"invalid rational {value!r}") from exc
    if isinstance(value, dict) and {"num", "den"} <= value.keys():
        return Fraction(int(value["num"]), int(value["den"]))
    raise ValueError(f"expected a rational, got {value!r}")


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[Fraction, BeforeValidator(parse_fraction), PlainSerializer(format_fraction, return_type=str)]


def _check_graph6(value: str) -> str:
    try:
        parse_graph6(value)
    except CtlError as exc:
        raise ValueError(str(exc)) from exc
    return value


Graph6 = Annotated[str, BeforeValidator(lambda v: v.decode("ascii") if isinstance(v, bytes) else v)]


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True, frozen=True)


class _AngleParams(_Params):
    @field_validator("eps", "delta", check_fields=False)
    @classmethod
    def _angle_range(cls, value: Fraction) -> Fraction:
        if not 0 < value < Fraction(1, 2):
            raise ValueError("angles are in units of pi and must lie strictly between 0 and 1/2")
        return value


class ZykovParams(_Params):
    trees: List[Graph6] = Field(..., min_length=1)
    r: int = Field(..., ge=3)
    t: int = Field(1, ge=1)

    @field_validator("trees")
    @classmethod
    def _valid_trees(cls, value: List[str]) -> List[str]:
        return [_check_graph6(v) for v in value]


class KneserParams(_Params):
    n: int = Field(..., ge=2)
    k: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _n_at_least_2k(self) -> "KneserParams":
        if self.n < 2 * self.k:
            raise ValueError(f"Kneser graph needs n >= 2k, got n={self.n}, k={self.k}")
        return self


class HajnalParams(_Params):
    k: int = Field(..., ge=1)
    l: int = Field(..., ge=1)  # noqa: E741
    m: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _divisible(self) -> "HajnalParams":
        if self.l % (2 * self.m + self.k):
            raise ValueError(f"2m + k = {2 * self.m + self.k} must divide l = {self.l}")
        return self


class BorsukParams(_AngleParams):
    k: int = Field(..., ge=1)
    eps: Rational
    n_points: int = Field(..., ge=2)


class BorsukHajnalParams(_AngleParams):
    k: int = Field(..., ge=1)
    eps: Rational
    delta: Rational
    w_size: int = Field(..., ge=0)
    u_points: int = Field(..., ge=0)

    @field_validator("w_size")
    @classmethod
    def _even(cls, value: int) -> int:
        if value % 2:
            raise ValueError(f"w_size must be even, got {value}")
        return value


class BorsukHajnalRParams(BorsukHajnalParams):
    r: int = Field(..., ge=3)


class ErdosParams(_Params):
    k: int = Field(..., ge=2)
    l: int = Field(..., ge=3)  # noqa: E741
    attempts: int = Field(50, ge=1)
    n_vertices: Optional[int] = Field(None, ge=3)


class WitnessParams(_Params):
    h: Graph6
    c: int = Field(..., ge=2)
    attempts: int = Field(50, ge=1)

    @field_validator("h")
    @classmethod
    def _valid_h(cls, value: str) -> str:
        return _check_graph6(value)


class LambdaWitnessParams(_Params):
    h: Graph6
    k: int = Field(2, ge=1)
    nu: Rational = Fraction(1, 5)
    u_points: int = Field(12, ge=2)
    max_attempts: int = Field(200, ge=1)

    @field_validator("h")
    @classmethod
    def _valid_h(cls, value: str) -> str:
        return _check_graph6(value)

    @field_validator("nu")
    @classmethod
    def _nu_range(cls, value: Fraction) -> Fraction:
        if not 0 < value < Fraction(1, 3):
            raise ValueError("nu must lie strictly between 0 and 1/3")
        return value


class RandomConstructionParams(_Params):
    r: int = Field(..., ge=3)
    n: int = Field(..., ge=1)
    p: float = Field(..., gt=0, lt=1)
    f: Graph6

    @field_validator("f")
    @classmethod
    def _valid_f(cls, value: str) -> str:
        return _check_graph6(value)


class BlowupWitnessParams(WitnessParams):
    t: int = Field(..., ge=1)


PARAM_MODELS: Dict[Family, Type[_Params]] = {
    Family.ZYKOV: ZykovParams,
    Family.KNESER: KneserParams,
    Family.HAJNAL: HajnalParams,
    Family.BORSUK: BorsukParams,
    Family.BORSUK_HAJNAL: BorsukHajnalParams,
    Family.BORSUK_HAJNAL_R: BorsukHajnalRParams,
    Family.ERDOS: ErdosParams,
    Family.PI_WITNESS: WitnessParams,
    Family.THETA_WITNESS: WitnessParams,
    Family.LAMBDA_WITNESS: LambdaWitnessParams,
    Family.RANDOM_CONSTRUCTION: RandomConstructionParams,
    Family.BLOWUP_WITNESS: BlowupWitnessParams,
}


class ConstructionRecipe(BaseModel):
    """Provenance record: identical recipes produce byte-identical graphs."""

    model_config = ConfigDict(frozen=True)

    family: Family
    params: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = Field(None, ge=0, lt=1 << 64)

    @model_validator(mode="after")
    def _check(self) -> "ConstructionRecipe":
        typed = PARAM_MODELS[self.family].model_validate(self.params)
        object.__setattr__(self, "params", typed.model_dump(mode="json"))
        if self.family in RANDOMIZED and self.seed is None:
            raise ValueError(f"family {self.family.value} is randomized and needs a seed")
        if self.family not in RANDOMIZED and self.seed is not None:
            raise ValueError(f"family {self.family.value} is deterministic and takes no seed")
        return self

    def typed_params(self) -> Any:
        return PARAM_MODELS[self.family].model_validate(self.params)
