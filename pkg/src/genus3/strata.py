"""
Presentations of the genus-3 strata, derived from Chern classes, torus
localization and invariant theory, and checked against the stored constants.

Each derive_* function appends its claims to a VerificationReport and raises
VerificationError on the first mismatch (after recording it).
"""
from typing import Dict, List, Optional, Tuple

from ..algebra.exactnum import Coefficient
from ..algebra.gradedring import GradedPoly, RingMap, RingPresentation, VariableTable
from ..algebra.polyparse import parse_poly
from ..errors import LocalizationError, VerificationError
from ..geometry.chern import Atom, Det, Line, Sym, TensorLine, quotient_class, total_class
from ..geometry.invariants import GroupAction, invariant_ideal_generators_check
from ..geometry.localization import (ProjectiveRep, character_class, coefficients_in, interpolate_class,
                                     localize_pushforward, signed_classes, weyl_reduce)
from ..geometry.symmetric import elementary, reduce_symmetric
from ..ideals.engine import member
from ..utils.logging_config import get_logger
from .constants import Genus3Constants
from .report import (EQUAL, EQUAL_UP_TO_UNIT, INVARIANTS, NOT_MEMBER, VerificationReport)

logger = get_logger(__name__)

HODGE = ("lambda1", "lambda2", "lambda3")
TORUS = ("u1", "u2", "u3")
TORUS_CLASSES = ("c1", "c2", "c3")

# pi_* of the dual relative dualizing sheaf on the conic: rank 3, c3 = 0
CONIC_SECTIONS = Atom("E", ["c1", "c2", "c3"])
BRANCH_TABLE = VariableTable([("c1", 1), ("c2", 2), ("c3", 3), ("s", 1)])


class StratumRecord:
    """A stratum presentation plus the data that glues it into the previous total ring."""

    def __init__(self, name: str, presentation: RingPresentation, zsym: Optional[str] = None, zdeg: int = 0,
                 restriction: Optional[Dict[str, GradedPoly]] = None, normal_class: Optional[GradedPoly] = None,
                 provenance: Optional[Dict[str, str]] = None):
        self.name = name
        self.presentation = presentation
        self.zsym = zsym
        self.zdeg = zdeg
        self.restriction = restriction or {}
        self.normal_class = normal_class
        self.provenance = provenance or {}

    def lift(self) -> Dict[str, GradedPoly]:
        out = dict(self.restriction)
        if self.zsym is not None:
            out[self.zsym] = self.normal_class
        return out

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "presentation": self.presentation.to_json(),
            "fundamental_class": None if self.zsym is None else {"name": self.zsym, "degree": self.zdeg},
            "restriction": {k: v.to_str() for k, v in self.restriction.items()},
            "normal_class": None if self.normal_class is None else self.normal_class.to_str(),
            "provenance": self.provenance,
        }


# comparisons


def unit_between(computed: GradedPoly, stored: GradedPoly) -> Optional[Coefficient]:
    """u with computed == u * stored for a unit u of Z[1/6], or None."""
    if stored.is_zero():
        return Coefficient(1) if computed.is_zero() else None
    mono, c = stored.leading_term()
    u = computed.coefficient(mono).try_divide(c)
    if u is None or not u.is_unit():
        return None
    return u if computed == stored.scale(u) else None


def check_equal(report: VerificationReport, stage: str, name: str, computed: GradedPoly, stored: GradedPoly,
                up_to_unit: bool = False) -> Coefficient:
    """Record computed == stored (or == unit * stored); raise VerificationError with the diff otherwise."""
    computed = computed.rename(stored.table)
    if up_to_unit:
        unit = unit_between(computed, stored)
        ok = unit is not None
        report.record(name, EQUAL_UP_TO_UNIT, ok, stage=stage, target=stored, computed=computed, unit=unit)
        if unit is not None and unit != 1:
            logger.warning(f"{name}: computed class is {unit} times the stored one")
    else:
        unit = Coefficient(1)
        ok = computed == stored
        report.record(name, EQUAL, ok, stage=stage, target=stored, computed=computed)
    if not ok:
        diff = computed - stored
        raise VerificationError(f"{stage}: computed {name} differs from the stored constant; "
                                f"difference {diff}", diff=diff)
    return unit


def _restriction(constants: Genus3Constants, stratum: str) -> StratumRecord:
    entry = constants.stratum(stratum)
    table = constants.table(entry.ring)
    images = {k: parse_poly(v, table) for k, v in entry.restriction.items()}
    normal = parse_poly(entry.normal_class, table)
    return StratumRecord(entry.name, RingPresentation(table, (), name=entry.name), entry.fundamental_class.name,
                         entry.fundamental_class.degree, images, normal, {"restriction": entry.source})


# hyperelliptic stratum


def _branch_substitution(target: VariableTable) -> RingMap:
    """c1, c2, s in terms of lambda1, lambda2, xi1; c3 = 0."""
    images = {
        "c1": parse_poly("-xi1", target),
        "c2": parse_poly("lambda2 - (lambda1^2 - xi1^2)/3", target),
        "c3": GradedPoly.zero(target),
        "s": parse_poly("-(xi1 + lambda1)/3", target),
    }
    return RingMap(RingPresentation(BRANCH_TABLE), RingPresentation(target), images)


def branch_divisor_class(degree: int = 9) -> GradedPoly:
    """Top class of S^-2 Sym^4 E modulo S^-2 det E Sym^2 E, in c1, c2, c3, s."""
    twist = Line("-2*s")
    quartics = TensorLine(Sym(CONIC_SECTIONS, 4), twist)
    discriminant_part = TensorLine(TensorLine(Sym(CONIC_SECTIONS, 2), Det(CONIC_SECTIONS)), twist)
    b = total_class(quartics, degree, BRANCH_TABLE)
    a = total_class(discriminant_part, degree, BRANCH_TABLE)
    return quotient_class(b, a, degree)


def hodge_classes(target: VariableTable) -> List[GradedPoly]:
    """lambda_i of the hyperelliptic stratum: c_i of E tensor S^-1 after the substitution."""
    hodge = TensorLine(CONIC_SECTIONS, Line("-s"))
    c = total_class(hodge, 3, BRANCH_TABLE)
    sub = _branch_substitution(target)
    return [sub(c.c(i)) for i in (1, 2, 3)]


D_TABLE = VariableTable([("s", 1), ("t1", 1), ("t2", 1)])


def d_ideal() -> Tuple[List[GradedPoly], List[GradedPoly]]:
    """(2s(2s - t1), 2s(2s - t2)) and its claimed generators over the t1 <-> t2 invariants."""
    ideal = [parse_poly("2*s*(2*s - t1)", D_TABLE), parse_poly("2*s*(2*s - t2)", D_TABLE)]
    claimed = [parse_poly("2*s*(t1 + t2 - 4*s)", D_TABLE), parse_poly("2*s*(2*s - t1)*(2*s - t2)", D_TABLE)]
    return ideal, claimed


def d_ideal_generators() -> List[GradedPoly]:
    """The claimed invariant generators in s, c1 = t1 + t2, c2 = t1 t2."""
    target = VariableTable([("s", 1), ("c1", 1), ("c2", 2)])
    return [reduce_symmetric(g, ["t1", "t2"], ["c1", "c2"], target) for g in d_ideal()[1]]


def derive_hyperelliptic(constants: Genus3Constants, report: VerificationReport,
                         degree_bound: int = 12) -> StratumRecord:
    stage = "hyperelliptic"
    logger.info("Deriving the hyperelliptic stratum")
    table = constants.table("hyperelliptic")
    sub = _branch_substitution(table)

    c9 = sub(branch_divisor_class(9).set_zero(["c3"]))
    check_equal(report, stage, "c9", c9, constants.poly("c9"))

    lambdas = hodge_classes(table)
    for name, computed in zip(("lambda1", "lambda2"), lambdas[:2]):
        check_equal(report, stage, f"hodge {name}", computed, GradedPoly.var(table, name))
    check_equal(report, stage, "hodge lambda3", lambdas[2], constants.poly("lambda3"))

    ideal, claimed = d_ideal()
    _invariant_claim(report, stage, "D-ideal invariants under t1 <-> t2", ideal, claimed,
                     GroupAction.swap("t1", "t2"), degree_bound)
    gens = d_ideal_generators()
    # pushforward along the closed stratum of class c1
    sd_table = gens[0].table
    pushed = [g * GradedPoly.var(sd_table, "c1") for g in gens]
    d_sub = RingMap(RingPresentation(sd_table), RingPresentation(table),
                    {n: sub.image_of(n) for n in sd_table.names})
    check_equal(report, stage, "D1", d_sub(pushed[0]), constants.poly("D1"))
    check_equal(report, stage, "D2", d_sub(pushed[1]), constants.poly("D2"))

    pres = RingPresentation(table, [constants.poly(n) for n in ("c9", "D1", "D2")], name=stage)
    record = _restriction(constants, stage)
    record.presentation = pres
    check_equal(report, stage, "restriction lambda3", record.restriction["lambda3"], constants.poly("lambda3"))
    record.provenance.update({n: constants.entry(n).source for n in ("c9", "D1", "D2", "lambda3")})
    logger.info(f"Hyperelliptic stratum: {pres}")
    return record


# open stratum


def _torus() -> VariableTable:
    return VariableTable([(n, 1) for n in TORUS])


def _to_hodge(p: GradedPoly, target: VariableTable) -> GradedPoly:
    classes = VariableTable([("c1", 1), ("c2", 2), ("c3", 3)])
    reduced = weyl_reduce(p, TORUS, TORUS_CLASSES, classes)
    return signed_classes(reduced, TORUS_CLASSES, HODGE, target)


def two_jet_coefficients(target: VariableTable) -> Dict[int, GradedPoly]:
    """Coefficients of the 2-jet locus class as a polynomial in the hyperplane class of P^2."""
    torus = _torus()
    chars = [GradedPoly.var(torus, n) for n in TORUS]
    det = chars[0] + chars[1] + chars[2]
    quartics = ProjectiveRep.of_forms(chars, 4, twist=det)
    values, nodes = [], []
    for k in range(3):
        a, b = [i for i in range(3) if i != k]
        weights = []
        for i in range(3):
            for j in range(3 - i):
                alpha = [0, 0, 0]
                alpha[a], alpha[b], alpha[k] = i, j, 4 - i - j
                weights.append(quartics.weights[quartics.index_of(tuple(alpha))])
        values.append(character_class(weights, table=torus))
        nodes.append(-chars[k])
    with_h = torus.extend([("h", 1)])
    p = interpolate_class(values, nodes, "h", with_h)
    coeffs = coefficients_in(p, "h", torus)
    return {k: _to_hodge(coeffs.get(k, GradedPoly.zero(torus)), target) for k in range(3)}


def squares_class(target: VariableTable) -> GradedPoly:
    """Class of the locus of squares of conics among quartic forms on the dual representation,
    with h set to its first Chern class."""
    torus = _torus()
    chars = [-GradedPoly.var(torus, n) for n in TORUS]
    conics = ProjectiveRep.of_forms(chars, 2)
    quartics = ProjectiveRep.of_forms(chars, 4)
    restrictions = localize_pushforward(conics, quartics, lambda g: tuple(2 * e for e in g), pullback_degree=2)
    with_h = torus.extend([("h", 1)])
    nodes = [pt.hyperplane for pt in quartics.fixed_points()]
    p = interpolate_class(restrictions, nodes, "h", with_h)
    p = p.evaluate({"h": chars[0] + chars[1] + chars[2]}, torus)
    return _to_hodge(p, target)


def derive_open(constants: Genus3Constants, report: VerificationReport) -> StratumRecord:
    stage = "open"
    logger.info("Deriving the open stratum by localization")
    table = constants.table("open")
    jets = two_jet_coefficients(table)
    for k in (2, 1, 0):
        check_equal(report, stage, f"p{k}", jets[k], constants.poly(f"p{k}"))
    check_equal(report, stage, "z2", squares_class(table), constants.poly("z2"))

    z2 = constants.poly("z2")
    ps = [constants.poly(f"p{k}") for k in (0, 1, 2)]
    res = member(z2, ps, table=table, cofactors=False)
    report.record("z2 not in (p0,p1,p2)", NOT_MEMBER, not res, stage=stage, target=z2,
                  degree_bound=z2.degree(), computed=res.residual)
    if res:
        raise VerificationError("z2 lies in the ideal of p0, p1, p2")

    pres = RingPresentation(table, [z2] + ps, name=stage)
    return StratumRecord(stage, pres, provenance={n: constants.entry(n).source for n in ("z2", "p0", "p1", "p2")})


# boundary strata


SEXTIC_ROOT = "s"


def sextic_weights(table: VariableTable) -> Dict[object, GradedPoly]:
    """Torus weights of the B2 representation of pointed genus-2 curves.

    Binary sextics with A.f(x) = det(A)^2 f(A^-1 x), where the coefficient of
    x1^6 is replaced by its square root s, acted on by det(A) a22^-3.
    Coordinates are keyed by the exponent of the monomial, s by SEXTIC_ROOT.
    """
    t0, t1 = GradedPoly.var(table, "t0"), GradedPoly.var(table, "t1")
    det = t0 + t1
    sextics = ProjectiveRep.of_forms([t0, t1], 6, twist=det.scale(2))
    weights: Dict[object, GradedPoly] = dict(zip(sextics.labels, sextics.weights))
    root = det - t1.scale(3)
    replaced = weights.pop((0, 6))
    if root.scale(2) != replaced:
        raise LocalizationError(f"s^2 has weight {root.scale(2)}, the x1^6 coefficient {replaced}")
    weights[SEXTIC_ROOT] = root
    return weights


def first_boundary_relation(table: VariableTable) -> GradedPoly:
    """f: the class of the locus s = a5 = a4 = a3 = 0, a_i the coefficient of x0^(6-i) x1^i."""
    weights = sextic_weights(table)
    return character_class([weights[SEXTIC_ROOT]] + [weights[(6 - i, i)] for i in (5, 4, 3)], table=table)


def _invariant_claim(report: VerificationReport, stage: str, name: str, ideal: List[GradedPoly],
                     claimed: List[GradedPoly], group: GroupAction, degree_bound: int):
    ok = invariant_ideal_generators_check(ideal, claimed, group, degree_bound)
    report.record(name, INVARIANTS, ok, stage=stage, degree_bound=degree_bound,
                  detail=f"{group.name} acting on {', '.join(group.variables)}")
    if not ok:
        raise VerificationError(f"{stage}: {name} failed")


def derive_boundary_strata(constants: Genus3Constants, report: VerificationReport,
                           degree_bound: int = 12) -> List[StratumRecord]:
    logger.info("Deriving the boundary strata")
    out = []

    d1 = _restriction(constants, "delta1")
    table = constants.table("delta1")
    check_equal(report, "delta1", "f", first_boundary_relation(table), constants.poly("f"))
    # the hyperelliptic locus meets the stratum where s vanishes
    check_equal(report, "delta1", "restriction H", sextic_weights(table)[SEXTIC_ROOT], d1.restriction["H"])
    d1.presentation = RingPresentation(table, [constants.poly("f")], name="delta1")
    d1.provenance["f"] = constants.entry("f").source
    out.append(d1)

    d11 = _restriction(constants, "delta11")
    pair = VariableTable([("t", 1), ("t1", 1), ("t2", 1)])
    _invariant_claim(report, "delta11", "invariants of Z[t,t1,t2] under t1 <-> t2",
                     [GradedPoly.var(pair, n) for n in ("t", "t1", "t2")],
                     [parse_poly(q, pair) for q in ("t", "t1 + t2", "t1*t2")],
                     GroupAction.swap("t1", "t2"), degree_bound)
    out.append(d11)

    d111 = _restriction(constants, "delta111")
    triple = VariableTable([("t1", 1), ("t2", 1), ("t3", 1)])
    roots = ["t1", "t2", "t3"]
    _invariant_claim(report, "delta111", "invariants of Z[t1,t2,t3] under S3",
                     [GradedPoly.var(triple, n) for n in roots],
                     [elementary(triple, roots, k) for k in (1, 2, 3)],
                     GroupAction.permutations_of(roots), degree_bound)
    out.append(d111)
    return out
