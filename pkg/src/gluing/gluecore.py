"""Stratification gluing.

Given an open stratum U with presentation Z[1/6][X]/(p'), a closed stratum Z
with presentation Z[1/6][Y]/(q'), a lift eta of the restriction to Z defined
on Z[1/6][X, Z] (Z the fundamental class of the closed stratum) and the top
Chern class c of its normal bundle, the total ring is Z[1/6][X, Z]/ker(eta),
and ker(eta) is generated by

    (i)   Z*q     for lifts q of the closed relations,
    (ii)  Z*v     for generators v of the kernel of eta followed by the quotient,
    (iii) p + Z*g for each open relation p, where eta(p) + g'*c lies in (q')
          and g lifts g',

provided eta is surjective and c is a non-zero-divisor on the closed ring.
"""
import json
from typing import Dict, List, Optional, Tuple

from ..algebra.gradedring import GradedPoly, RingMap, RingPresentation, VariableTable, substitute
from ..errors import GluingError, IdealError
from ..ideals.engine import (NzdResult, cofactor_split, kernel_from_witnesses, member, nzd_check,
                             prune_generators, surjectivity_witnesses)
from ..ideals.slices import IdealSlices
from ..utils.logging_config import get_logger
from ..utils.schemas import GluingDatumModel, poly_from_input

logger = get_logger(__name__)

FAMILY_CLOSED = "lifted-closed-relation"
FAMILY_KERNEL = "kernel-relation"
FAMILY_OPEN = "modified-open-relation"


class GluingDatum:
    def __init__(self, open_pres: RingPresentation, closed_pres: RingPresentation, zsym: str, zdeg: int,
                 lift: Dict[str, GradedPoly], c_top: GradedPoly, name: str = ""):
        self.open = open_pres
        self.closed = closed_pres
        self.zsym = zsym
        self.zdeg = zdeg
        self.name = name
        if zsym in open_pres.table:
            raise GluingError(f"Fundamental class symbol {zsym} clashes with an open generator")
        self.table: VariableTable = open_pres.table.extend([(zsym, zdeg)])
        self.c_top = c_top.rename(closed_pres.table)
        lift = dict(lift)
        lift.setdefault(zsym, self.c_top)
        if lift[zsym].rename(closed_pres.table) != self.c_top:
            raise GluingError(f"The lift must send {zsym} to the normal class {self.c_top}, got {lift[zsym]}")
        self.total_free = RingPresentation(self.table, (), name=name or "total")
        self.eta = RingMap(self.total_free, closed_pres, lift)

    def embed(self, p: GradedPoly) -> GradedPoly:
        """An open-stratum polynomial as a polynomial of the total ring."""
        return p.rename(self.table)

    @classmethod
    def from_model(cls, model: GluingDatumModel) -> "GluingDatum":
        open_pres = model.open.to_presentation()
        closed_pres = model.closed.to_presentation()
        ctab = closed_pres.table
        lift = {name: poly_from_input(item, ctab) for name, item in model.lift.items()}
        return cls(open_pres, closed_pres, model.fundamental_class.name, model.fundamental_class.degree,
                   lift, poly_from_input(model.c_top, ctab), name=model.open.name)

    @classmethod
    def from_json(cls, data: dict) -> "GluingDatum":
        return cls.from_model(GluingDatumModel.model_validate(data))


class RelationRecord:
    def __init__(self, family: str, relation: GradedPoly, source: GradedPoly,
                 closed_cofactor: Optional[GradedPoly] = None, lift: Optional[GradedPoly] = None):
        self.family = family
        self.relation = relation
        self.source = source
        self.closed_cofactor = closed_cofactor
        self.lift = lift

    def to_json(self) -> dict:
        out = {"family": self.family, "relation": self.relation.to_str(), "source": self.source.to_str()}
        if self.closed_cofactor is not None:
            out["closed_cofactor"] = self.closed_cofactor.to_str()
        if self.lift is not None:
            out["lift"] = self.lift.to_str()
        return out


class GluingCertificate:
    def __init__(self, degree_bound: int):
        self.degree_bound = degree_bound
        self.witnesses: Dict[str, GradedPoly] = {}
        self.nzd: Optional[NzdResult] = None
        self.relations: List[RelationRecord] = []
        self.vanishing_checked = False

    def to_json(self) -> dict:
        return {
            "degree_bound": self.degree_bound,
            "witnesses": {k: v.to_str() for k, v in self.witnesses.items()},
            "nzd": self.nzd.to_json() if self.nzd is not None else None,
            "relations": [r.to_json() for r in self.relations],
            "vanishing_checked": self.vanishing_checked,
        }

    def dumps(self, indent: int = 2) -> str:
        return json.dumps(self.to_json(), indent=indent)


def check_surjective(datum: GluingDatum, degree_bound: int,
                     certificate: Optional[GluingCertificate] = None) -> Dict[str, GradedPoly]:
    """A preimage of every closed generator under eta, modulo the closed relations."""
    certificate = certificate or GluingCertificate(degree_bound)
    for name, deg in datum.closed.table:
        if deg > degree_bound:
            raise GluingError(f"Closed generator {name} has degree {deg} above the bound {degree_bound}",
                              certificate)
    witnesses = surjectivity_witnesses(datum.eta)
    for name, w in witnesses.items():
        if w is None:
            raise GluingError(f"Restriction is not surjective: no preimage of {name}", certificate)
        certificate.witnesses[name] = w
    return witnesses


def glue(datum: GluingDatum, degree_bound: int) -> Tuple[RingPresentation, GluingCertificate]:
    """Presentation of the total ring with the three relation families, plus its certificate."""
    cert = GluingCertificate(degree_bound)
    logger.info(f"Gluing {datum.closed.name or 'closed stratum'} into {datum.open.name or 'open stratum'} "
                f"along {datum.zsym} (degree {datum.zdeg})")
    witnesses = check_surjective(datum, degree_bound, cert)

    cert.nzd = nzd_check(datum.c_top, datum.closed, degree_bound)
    if not cert.nzd:
        raise GluingError(f"{datum.c_top} is a zero divisor on {datum.closed.name or 'the closed stratum'} "
                          f"(annihilator {cert.nzd.annihilator} in degree {cert.nzd.degree})", cert)

    psi = RingMap(datum.closed.free(), datum.total_free, witnesses)
    z = GradedPoly.var(datum.table, datum.zsym)

    lifts = []
    for q in datum.closed.relations:
        q_lift = substitute(q, psi)
        lifts.append(q_lift)
        cert.relations.append(RelationRecord(FAMILY_CLOSED, z * q_lift, q, lift=q_lift))

    kernel_gens = prune_generators(kernel_from_witnesses(datum.eta, witnesses), datum.table)
    lifted = IdealSlices(lifts, datum.table)
    for v in kernel_gens:
        if lifted.slice(v.degree()).contains(v):
            continue
        cert.relations.append(RelationRecord(FAMILY_KERNEL, z * v, v))
    logger.info(f"Kernel of the restriction: {len(kernel_gens)} generators")

    for p in datum.open.relations:
        image = datum.eta(datum.embed(p))
        try:
            g_closed = cofactor_split(image, datum.closed.relations, datum.c_top, datum.closed.table)
        except IdealError as e:
            raise GluingError(f"Open relation {p} does not restrict into (closed relations, normal class): "
                              f"inconsistent gluing data ({e})", cert) from e
        g = substitute(g_closed, psi)
        cert.relations.append(RelationRecord(FAMILY_OPEN, datum.embed(p) + z * g, p,
                                             closed_cofactor=g_closed, lift=g))

    relations = [r.relation for r in cert.relations]
    verify_vanishing(datum, relations)
    cert.vanishing_checked = True
    total = RingPresentation(datum.table, relations, name=datum.name or "total")
    logger.info(f"Glued presentation has {len(total.relations)} relations")
    return total, cert


def verify_vanishing(datum: GluingDatum, relations: List[GradedPoly]):
    """Every relation must restrict to zero in the closed ring."""
    closed = IdealSlices(datum.closed.relations, datum.closed.table)
    for r in relations:
        image = datum.eta(r)
        if image.is_zero():
            continue
        res = member(image, closed.gens, table=datum.closed.table, slices=closed, cofactors=False)
        if not res:
            raise GluingError(f"Relation {r} restricts to {image}, not in the closed ideal "
                              f"(residual {res.residual})")


def restrict_to_open(pres: RingPresentation, zsym: str, open_table: Optional[VariableTable] = None) -> RingPresentation:
    """Set the fundamental class to zero and drop it from the generators."""
    table = open_table or VariableTable([(n, d) for n, d in pres.table if n != zsym])
    rels = []
    for r in pres.relations:
        r0 = r.set_zero([zsym])
        if not r0.is_zero():
            rels.append(r0.rename(table))
    return RingPresentation(table, rels, name=pres.name)
