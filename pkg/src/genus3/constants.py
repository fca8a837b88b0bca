"""
Loader for the shipped genus-3 constants (data/genus3_constants.yaml).

The file is validated with pydantic; every entry is parsed on its ring's
variable table and its degree is recomputed rather than trusted.
"""
import hashlib
from pathlib import Path
from typing import Dict, List, Optional, Union

import yaml
from pydantic import BaseModel, Field, ValidationError, model_validator

from ..algebra.gradedring import GradedPoly, VariableTable
from ..algebra.polyparse import parse_poly
from ..errors import PolynomialError, UsageError, VerificationError
from ..utils.config import PROJECT_ROOT
from ..utils.logging_config import get_logger
from ..utils.schemas import FundamentalClassModel, VariableModel

logger = get_logger(__name__)

FINAL_RING = "final"


class ConstantEntry(BaseModel):
    name: str
    label: str = ""
    ring: str
    degree: int = Field(..., ge=0)
    source: str
    poly: str


class StratumEntry(BaseModel):
    name: str
    ring: str
    fundamental_class: FundamentalClassModel
    source: str
    normal_class: str
    restriction: Dict[str, str]


class ConstantsModel(BaseModel):
    rings: Dict[str, List[VariableModel]]
    strata: List[StratumEntry] = []
    entries: List[ConstantEntry]

    @model_validator(mode="after")
    def _check_references(self):
        names = [e.name for e in self.entries]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ValueError(f"Duplicate constant names: {dupes}")
        for item in list(self.entries) + list(self.strata):
            if item.ring not in self.rings:
                raise ValueError(f"{item.name} refers to unknown ring '{item.ring}'")
        return self


class Genus3Constants:
    """Parsed constants: one VariableTable per ring and one GradedPoly per entry."""

    def __init__(self, model: ConstantsModel, checksum: str = "", path: Optional[Path] = None):
        self.model = model
        self.checksum = checksum
        self.path = path
        self.tables: Dict[str, VariableTable] = {
            ring: VariableTable((v.name, v.degree) for v in variables) for ring, variables in model.rings.items()}
        self.entries: Dict[str, ConstantEntry] = {e.name: e for e in model.entries}
        self.polys: Dict[str, GradedPoly] = {}
        for e in model.entries:
            try:
                self.polys[e.name] = parse_poly(e.poly, self.tables[e.ring])
            except PolynomialError as err:
                raise VerificationError(f"Constant {e.name} does not parse on ring {e.ring}: {err}") from err
        self.strata: Dict[str, StratumEntry] = {s.name: s for s in model.strata}

    @property
    def source_name(self) -> str:
        """The constants path relative to the project root when it lies inside it."""
        if self.path is None:
            return ""
        try:
            return str(Path(self.path).resolve().relative_to(PROJECT_ROOT))
        except ValueError:
            return str(self.path)

    def table(self, ring: str) -> VariableTable:
        return self.tables[ring]

    def poly(self, name: str) -> GradedPoly:
        try:
            return self.polys[name]
        except KeyError:
            raise UsageError(f"No constant named '{name}' in {self.path or 'the constants file'}") from None

    def entry(self, name: str) -> ConstantEntry:
        return self.entries[name]

    def ring_entries(self, ring: str) -> List[ConstantEntry]:
        return [e for e in self.model.entries if e.ring == ring]

    def final_relations(self) -> Dict[str, GradedPoly]:
        """The printed generating set of the final ideal, in file order."""
        return {e.name: self.polys[e.name] for e in self.ring_entries(FINAL_RING)}

    def stratum(self, name: str) -> StratumEntry:
        try:
            return self.strata[name]
        except KeyError:
            raise UsageError(f"No stratum named '{name}' in {self.path or 'the constants file'}") from None

    def degree_mismatches(self) -> List[dict]:
        """Entries whose recomputed degree differs from the declared one."""
        bad = []
        for e in self.model.entries:
            actual = self.polys[e.name].weighted_degree()
            if actual != e.degree:
                bad.append({"name": e.name, "declared": e.degree, "actual": actual})
        return bad


def file_checksum(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_constants(path: Union[str, Path]) -> Genus3Constants:
    path = Path(path)
    if not path.exists():
        raise UsageError(f"Constants file not found at {path}")
    try:
        with open(path, "r") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise VerificationError(f"Constants file {path} is not valid YAML: {e}") from e
    try:
        model = ConstantsModel.model_validate(raw or {})
    except ValidationError as e:
        raise VerificationError(f"Constants file {path} is malformed: {e}") from e
    constants = Genus3Constants(model, file_checksum(path), path)
    logger.info(f"Loaded {len(constants.polys)} constants from {path} (sha256 {constants.checksum[:12]})")
    return constants
