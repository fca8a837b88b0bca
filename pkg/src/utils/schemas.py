"""
pydantic models for the JSON inputs read by the CLI (presentations, gluing data, localization runs)
"""
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from ..algebra.gradedring import GradedPoly, RingPresentation, VariableTable
from ..algebra.polyparse import parse_poly

# a polynomial is either text ("1/8*l1^3*H") or the serialized term list
PolyInput = Union[str, int, List[Dict]]


def poly_from_input(item: PolyInput, table: VariableTable) -> GradedPoly:
    if isinstance(item, list):
        return GradedPoly.from_json(table, item)
    return parse_poly(item, table)


class VariableModel(BaseModel):
    name: str
    degree: int = Field(1, ge=1)


class PresentationModel(BaseModel):
    name: str = ""
    vars: List[VariableModel]
    relations: List[PolyInput] = []

    def table(self) -> VariableTable:
        return VariableTable((v.name, v.degree) for v in self.vars)

    def to_presentation(self) -> RingPresentation:
        table = self.table()
        return RingPresentation(table, [poly_from_input(r, table) for r in self.relations], name=self.name)


class FundamentalClassModel(BaseModel):
    name: str
    degree: int = Field(..., ge=1)


class GluingDatumModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    open: PresentationModel
    closed: PresentationModel
    fundamental_class: FundamentalClassModel = Field(..., alias="zsym")
    lift: Dict[str, PolyInput]
    c_top: PolyInput


class LocalizeModel(BaseModel):
    """P(V) with coordinate weights; optional pushforward source and point map."""

    characters: List[VariableModel]
    weights: List[PolyInput]
    hyperplane: str = "h"
    restrictions: Optional[List[PolyInput]] = None
    source_weights: Optional[List[PolyInput]] = None
    point_map: Optional[List[int]] = None
    pullback_degree: Optional[int] = None


class InvariantsModel(BaseModel):
    vars: List[VariableModel]
    group: str = Field(..., pattern=r"^(swap|symmetric)$")
    acting_on: List[str]
    ideal: List[PolyInput]
    claimed: List[PolyInput]
    elements: List[PolyInput] = []
    degree_bound: int = Field(12, ge=1)
