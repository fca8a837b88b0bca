"""Verification report: one Claim per certificate, JSON output and a rich summary table."""
import json
from typing import Dict, List, Optional

from rich.table import Table

from ..algebra.exactnum import Coefficient
from ..algebra.gradedring import GradedPoly

PASS = "PASS"
FAIL = "FAIL"

# claim kinds
EQUAL = "equal"
EQUAL_UP_TO_UNIT = "equal-up-to-unit"
MEMBER = "member"
NOT_MEMBER = "not-member"
IDEAL_EQUAL = "ideal-equal"
INVARIANTS = "invariant-generators"
DEGREE = "declared-degree"
CERTIFICATE = "gluing-certificate"


def _text(p) -> Optional[str]:
    if p is None:
        return None
    if isinstance(p, GradedPoly):
        return p.to_str()
    return str(p)


class Claim:
    """A single checked statement; PASS only on exact equality or a certified membership."""

    def __init__(self, name: str, kind: str, ok: bool, stage: str = "", target=None, computed=None,
                 unit: Optional[Coefficient] = None, degree_bound: Optional[int] = None, detail: str = ""):
        self.name = name
        self.kind = kind
        self.ok = bool(ok)
        self.stage = stage
        self.target = _text(target)
        self.computed = _text(computed)
        self.unit = None if unit is None else str(unit)
        self.degree_bound = degree_bound
        self.detail = detail

    @property
    def status(self) -> str:
        return PASS if self.ok else FAIL

    def to_json(self) -> dict:
        out = {"name": self.name, "stage": self.stage, "kind": self.kind, "status": self.status}
        for key in ("target", "computed", "unit", "degree_bound"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.detail:
            out["detail"] = self.detail
        return out


class VerificationReport:
    def __init__(self, degree_bound: int, constants_checksum: str = "", constants_file: str = ""):
        self.degree_bound = degree_bound
        self.constants_checksum = constants_checksum
        self.constants_file = constants_file
        self.claims: List[Claim] = []
        self.runtimes: Dict[str, float] = {}
        self.certificates: Dict[str, dict] = {}

    def add(self, claim: Claim) -> Claim:
        self.claims.append(claim)
        return claim

    def record(self, name: str, kind: str, ok: bool, **kwargs) -> Claim:
        return self.add(Claim(name, kind, ok, **kwargs))

    @property
    def passed(self) -> bool:
        return bool(self.claims) and all(c.ok for c in self.claims)

    def failures(self) -> List[Claim]:
        return [c for c in self.claims if not c.ok]

    def to_json(self, include_runtimes: bool = False) -> dict:
        out = {
            "status": PASS if self.passed else FAIL,
            "degree_bound": self.degree_bound,
            "constants_file": self.constants_file,
            "constants_sha256": self.constants_checksum,
            "claims": [c.to_json() for c in self.claims],
            "certificates": self.certificates,
        }
        if include_runtimes:
            out["runtimes"] = {k: round(v, 3) for k, v in self.runtimes.items()}
        return out

    def dumps(self, indent: int = 2, include_runtimes: bool = False) -> str:
        return json.dumps(self.to_json(include_runtimes), indent=indent, sort_keys=False)

    def summary_table(self) -> Table:
        table = Table(title=f"chowglue verification (degree bound {self.degree_bound})")
        table.add_column("stage")
        table.add_column("claim")
        table.add_column("kind")
        table.add_column("unit", justify="right")
        table.add_column("status")
        for c in self.claims:
            style = "green" if c.ok else "bold red"
            table.add_row(c.stage, c.name, c.kind, c.unit or "", f"[{style}]{c.status}[/{style}]")
        return table
