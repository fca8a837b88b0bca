import pytest

from src.algebra.exactnum import Coefficient
from src.algebra.gradedring import GradedPoly, RingMap, RingPresentation, VariableTable
from src.algebra.polyparse import parse_poly
from src.errors import UsageError, VerificationError
from src.genus3.constants import FINAL_RING, load_constants
from src.genus3.report import EQUAL, FAIL, VerificationReport
from src.genus3.strata import (SEXTIC_ROOT, check_equal, d_ideal_generators, derive_boundary_strata,
                               derive_hyperelliptic, derive_open, first_boundary_relation, hodge_classes,
                               sextic_weights, squares_class, two_jet_coefficients, unit_between)
from src.gluing.gluecore import FAMILY_OPEN, GluingDatum, glue
from src.ideals.engine import cofactor_split, ideal_equal, kernel, member
from src.utils.config import PROJECT_ROOT

CONSTANTS_FILE = PROJECT_ROOT / "data" / "genus3_constants.yaml"


@pytest.fixture(scope="module")
def constants():
    return load_constants(CONSTANTS_FILE)


def test_declared_degrees_match(constants):
    assert constants.degree_mismatches() == []
    assert constants.poly("c9").degree() == 9
    assert constants.poly("z2").degree() == 9


def test_final_relation_list(constants):
    final = constants.final_relations()
    assert len(final) == 15
    assert list(final)[0] == "k_h"
    assert all(p.table == constants.table(FINAL_RING) for p in final.values())


def test_strata_are_stored_in_gluing_order(constants):
    assert [s.name for s in constants.model.strata] == ["hyperelliptic", "delta1", "delta11", "delta111"]
    assert constants.stratum("delta11").fundamental_class.degree == 2
    with pytest.raises(UsageError):
        constants.stratum("delta2")
    with pytest.raises(UsageError):
        constants.poly("nope")


def test_hodge_classes_of_the_hyperelliptic_stratum(constants):
    table = constants.table("hyperelliptic")
    l1, l2, l3 = hodge_classes(table)
    assert l1 == GradedPoly.var(table, "lambda1")
    assert l2 == GradedPoly.var(table, "lambda2")
    assert l3 == constants.poly("lambda3")


def test_d_ideal_generators_are_symmetric_in_the_branch_points():
    s_c1_c2 = VariableTable([("s", 1), ("c1", 1), ("c2", 2)])
    assert [g.table for g in d_ideal_generators()] == [s_c1_c2, s_c1_c2]
    assert [g.degree() for g in d_ideal_generators()] == [2, 3]


def test_two_jet_coefficients(constants):
    jets = two_jet_coefficients(constants.table("open"))
    for k in (0, 1, 2):
        assert jets[k] == constants.poly(f"p{k}")


def test_squares_class_is_not_in_the_two_jet_ideal(constants):
    ps = [constants.poly(f"p{k}") for k in (0, 1, 2)]
    assert not member(constants.poly("z2"), ps, cofactors=False)
    assert member(constants.poly("p0") * constants.poly("p1"), ps)


def test_first_boundary_relation(constants):
    assert first_boundary_relation(constants.table("delta1")) == constants.poly("f")


def test_sextic_weights_come_from_the_borel_action(constants):
    table = constants.table("delta1")
    weights = sextic_weights(table)
    assert len(weights) == 7
    assert (0, 6) not in weights
    # a_i, the coefficient of x0^(6-i) x1^i, has weight (i - 4) t0 + (2 - i) t1
    assert weights[(1, 5)] == parse_poly("t0 - 3*t1", table)
    assert weights[(2, 4)] == parse_poly("-2*t1", table)
    assert weights[(3, 3)] == parse_poly("-t0 - t1", table)
    assert weights[(6, 0)] == parse_poly("-4*t0 + 2*t1", table)
    assert weights[SEXTIC_ROOT] == parse_poly("t0 - 2*t1", table)
    assert weights[SEXTIC_ROOT] == parse_poly(constants.stratum("delta1").restriction["H"], table)


def test_boundary_strata(constants):
    report = VerificationReport(12)
    records = derive_boundary_strata(constants, report, 6)
    assert [r.name for r in records] == ["delta1", "delta11", "delta111"]
    assert [r.zdeg for r in records] == [1, 2, 3]
    assert report.passed
    for r in records:
        assert r.lift()[r.zsym] == r.normal_class


def test_check_equal_records_the_failure(constants):
    report = VerificationReport(12)
    with pytest.raises(VerificationError) as err:
        check_equal(report, "open", "p2", constants.poly("p2").scale(-1), constants.poly("p2"))
    assert report.claims[-1].status == FAIL
    assert err.value.diff == constants.poly("p2").scale(-2)
    unit = check_equal(report, "open", "p2", constants.poly("p2").scale(-1), constants.poly("p2"), up_to_unit=True)
    assert unit == -1


def test_unit_between_rejects_non_units(constants):
    p = constants.poly("p1")
    assert unit_between(p.scale(5), p) is None
    assert unit_between(p.scale("1/6"), p) == Coefficient("1/6")
    assert unit_between(p, p) == 1


@pytest.mark.slow
def test_hyperelliptic_stratum(constants):
    report = VerificationReport(12)
    record = derive_hyperelliptic(constants, report)
    claims = {c.name: c for c in report.claims}
    for name in ("c9", "D1", "D2"):
        assert claims[name].kind == EQUAL
        assert claims[name].unit is None
    assert report.passed
    assert len(record.presentation.relations) == 3


def test_d_ideal_pushforward_gives_the_stored_generators(constants):
    table = constants.table("hyperelliptic")
    images = {"s": parse_poly("-(xi1 + lambda1)/3", table), "c1": parse_poly("-xi1", table),
              "c2": parse_poly("lambda2 - (lambda1^2 - xi1^2)/3", table)}
    d1, d2 = [(g * GradedPoly.var(g.table, "c1")).evaluate(images, table) for g in d_ideal_generators()]
    assert d1 == constants.poly("D1")
    assert d2 == constants.poly("D2")


@pytest.mark.slow
def test_open_stratum(constants):
    report = VerificationReport(12)
    record = derive_open(constants, report)
    assert report.passed
    assert all(c.kind == EQUAL for c in report.claims if c.name in ("z2", "p0", "p1", "p2"))
    assert record.zsym is None
    assert len(record.presentation.relations) == 4


@pytest.mark.slow
def test_squares_class_matches_the_stored_sign(constants):
    assert squares_class(constants.table("open")) == constants.poly("z2")


def test_constants_file_errors(tmp_path):
    with pytest.raises(UsageError):
        load_constants(tmp_path / "missing.yaml")
    bad_yaml = tmp_path / "bad.yaml"
    bad_yaml.write_text("rings: [unclosed\n")
    with pytest.raises(VerificationError):
        load_constants(bad_yaml)
    unknown_ring = tmp_path / "ring.yaml"
    unknown_ring.write_text("rings: {open: [{name: x, degree: 1}]}\n"
                            "entries: [{name: a, ring: other, degree: 1, source: s, poly: x}]\n")
    with pytest.raises(VerificationError):
        load_constants(unknown_ring)
    unparsable = tmp_path / "poly.yaml"
    unparsable.write_text("rings: {open: [{name: x, degree: 1}]}\n"
                          "entries: [{name: a, ring: open, degree: 1, source: s, poly: 'x + y'}]\n")
    with pytest.raises(VerificationError):
        load_constants(unparsable)


def _first_gluing_datum(constants):
    """The open stratum glued to the hyperelliptic stratum along H, read straight from the stored data."""
    open_table, hyp = constants.table("open"), constants.table("hyperelliptic")
    open_pres = RingPresentation(open_table, [constants.poly(n) for n in ("z2", "p0", "p1", "p2")], name="open")
    closed = RingPresentation(hyp, [constants.poly(n) for n in ("c9", "D1", "D2")], name="hyperelliptic")
    entry = constants.stratum("hyperelliptic")
    lift = {k: parse_poly(v, hyp) for k, v in entry.restriction.items()}
    return GluingDatum(open_pres, closed, "H", 1, lift, parse_poly(entry.normal_class, hyp), name="step1")


def test_kernel_of_the_first_restriction_contains_the_lambda3_relation(constants):
    datum = _first_gluing_datum(constants)
    hyp, source = datum.closed.table, datum.table
    m = RingMap(datum.total_free, datum.closed.free(), datum.eta.as_dict())
    assert list(source.names) == ["lambda1", "lambda2", "lambda3", "H"]
    assert m(GradedPoly.var(source, "H")) == parse_poly("(2*xi1 - lambda1)/3", hyp)
    assert m(GradedPoly.var(source, "lambda3")) == constants.poly("lambda3")

    k = parse_poly("lambda3 - (H + lambda1)*lambda2/2 - (H + lambda1)^2*(H - lambda1)/8", source)
    assert m(k).is_zero()
    gens = kernel(m, 3)
    assert [g.degree() for g in gens] == [3]
    assert ideal_equal(gens, [k], source)
    # the printed k_h is H times this generator once the boundary classes vanish
    k_h = constants.poly("k_h").set_zero(["d1", "d11", "d111"]).rename(source)
    assert k_h == GradedPoly.var(source, "H") * k


def test_cofactor_split_of_the_restricted_p2(constants):
    datum = _first_gluing_datum(constants)
    hyp = datum.closed.table
    p = datum.eta(datum.embed(constants.poly("p2")))
    q_gens = list(datum.closed.relations)
    c = parse_poly("(2*xi1 - lambda1)/3", hyp)
    g = cofactor_split(p, q_gens, c, hyp)
    assert g.degree() == 3
    assert member(p + g * c, q_gens, table=hyp, cofactors=False)
    assert not member(p, q_gens, table=hyp, cofactors=False)


def _open_cofactors(cert):
    return [r.lift for r in cert.relations if r.family == FAMILY_OPEN]


@pytest.mark.slow
def test_first_gluing_does_not_depend_on_the_open_cofactors(constants, monkeypatch):
    datum = _first_gluing_datum(constants)
    base, base_cert = glue(datum, 12)
    hyp = datum.closed.table
    xi1 = GradedPoly.var(hyp, "xi1")
    shortest = min(datum.closed.relations, key=lambda q: q.degree())
    shifted = []

    def shifted_split(p, q_gens, c, table=None):
        g = cofactor_split(p, q_gens, c, table)
        if p.is_zero():
            return g
        extra = p.degree() - c.degree() - shortest.degree()
        if extra < 0:
            return g
        shift = shortest
        for _ in range(extra):
            shift = shift * xi1
        shifted.append(p)
        return g + shift

    monkeypatch.setattr("src.gluing.gluecore.cofactor_split", shifted_split)
    other, cert = glue(datum, 12)
    assert shifted
    assert cert.vanishing_checked
    assert _open_cofactors(cert) != _open_cofactors(base_cert)
    assert ideal_equal(other.relations, base.relations, base.table)
