from typing import Any, Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.expr import Declaration, Expr
from core.interval import Box, Interval
from core.sliding import RegionAnd, RegionLeaf, RegionOr, SlidingSpec


class ParamDecl(BaseModel):
    name: str
    lo: float
    hi: float

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)


class SystemDef(BaseModel):
    """
    A switched system  x' = f_a(x, p) if x in region else f_b(x, p),
    together with the paving domain and resolution.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    states: List[str]
    params: List[ParamDecl] = []
    field_a: Tuple[Expr, ...]
    field_b: Tuple[Expr, ...]
    sets: Dict[str, Expr] = {}  # named constraints c, each meaning c <= 0
    region: Any  # RegionLeaf | RegionAnd | RegionOr
    domain: Box
    epsilon: float = Field(..., gt=0)

    @field_validator("region")
    @classmethod
    def check_region(cls, v):
        if not isinstance(v, (RegionLeaf, RegionAnd, RegionOr)):
            raise ValueError("region must be a region tree")
        return v

    @property
    def decl(self) -> Declaration:
        return Declaration(tuple(self.states), tuple(p.name for p in self.params))

    @property
    def param_box(self) -> Box:
        return Box(tuple(p.interval for p in self.params))

    @property
    def param_center(self) -> List[float]:
        return [p.interval.mid for p in self.params]

    def to_spec(self) -> SlidingSpec:
        return SlidingSpec(
            region=self.region,
            field_a=self.field_a,
            field_b=self.field_b,
            decl=self.decl,
            param_box=self.param_box,
        )
