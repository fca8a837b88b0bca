import pytest

from src.algebra.gradedring import RingPresentation, VariableTable
from src.algebra.polyparse import parse_poly
from src.errors import GluingError
from src.gluing.gluecore import FAMILY_CLOSED, FAMILY_KERNEL, FAMILY_OPEN, GluingDatum, glue, restrict_to_open
from src.ideals.engine import ideal_equal

OPEN = VariableTable.of("t:1")
CLOSED = VariableTable.of("s:1")


def _line_through_origin():
    """[A^1/G_m]: the open orbit is a point, the origin is BG_m with normal class s."""
    open_pres = RingPresentation(OPEN, [parse_poly("t", OPEN)], name="orbit")
    closed_pres = RingPresentation(CLOSED, name="origin")
    return GluingDatum(open_pres, closed_pres, "Z", 1, {"t": parse_poly("s", CLOSED)},
                       parse_poly("s", CLOSED), name="line")


def test_gluing_recovers_the_equivariant_line():
    datum = _line_through_origin()
    total, cert = glue(datum, 4)
    assert ideal_equal(total.relations, [parse_poly("t - Z", total.table)], total.table)
    families = [r.family for r in cert.relations]
    assert families == [FAMILY_KERNEL, FAMILY_OPEN]
    assert cert.nzd and cert.vanishing_checked
    assert datum.eta(cert.witnesses["s"]) == parse_poly("s", CLOSED)


def test_restricting_to_the_open_stratum_gives_back_its_relations():
    total, _ = glue(_line_through_origin(), 4)
    restricted = restrict_to_open(total, "Z", OPEN)
    assert ideal_equal(restricted.relations, [parse_poly("t", OPEN)], OPEN)


def test_lifted_closed_relation_family():
    plane = VariableTable.of("s:1,r:1")
    closed_pres = RingPresentation(plane, [parse_poly("r^2", plane)], name="fat line")
    open_table = VariableTable.of("t:1,q:1")
    open_pres = RingPresentation(open_table, [parse_poly("q^2 - t*q", open_table)])
    datum = GluingDatum(open_pres, closed_pres, "Z", 1,
                        {"t": parse_poly("s", plane), "q": parse_poly("r", plane)}, parse_poly("s", plane))
    total, cert = glue(datum, 4)
    z_q = [r for r in cert.relations if r.family == FAMILY_CLOSED]
    assert len(z_q) == 1
    assert z_q[0].relation == parse_poly("Z", total.table) * z_q[0].lift
    assert datum.eta(z_q[0].lift) == parse_poly("r^2", plane)


def test_zero_divisor_normal_class_is_rejected():
    closed_pres = RingPresentation(CLOSED, [parse_poly("s^2", CLOSED)])
    open_pres = RingPresentation(OPEN, [parse_poly("t", OPEN)])
    datum = GluingDatum(open_pres, closed_pres, "Z", 1, {"t": parse_poly("s", CLOSED)}, parse_poly("s", CLOSED))
    with pytest.raises(GluingError) as err:
        glue(datum, 4)
    assert err.value.certificate is not None


def test_non_surjective_restriction_is_rejected():
    plane = VariableTable.of("s:1,r:1")
    closed_pres = RingPresentation(plane)
    open_pres = RingPresentation(OPEN, [parse_poly("t", OPEN)])
    datum = GluingDatum(open_pres, closed_pres, "Z", 1, {"t": parse_poly("s", plane)}, parse_poly("s", plane))
    with pytest.raises(GluingError):
        glue(datum, 4)


def test_datum_from_json():
    datum = GluingDatum.from_json({
        "open": {"name": "orbit", "vars": [{"name": "t", "degree": 1}], "relations": ["t"]},
        "closed": {"name": "origin", "vars": [{"name": "s", "degree": 1}]},
        "zsym": {"name": "Z", "degree": 1},
        "lift": {"t": "s"},
        "c_top": "s",
    })
    total, _ = glue(datum, 4)
    assert ideal_equal(total.relations, [parse_poly("t - Z", total.table)], total.table)
    with pytest.raises(GluingError):
        GluingDatum.from_json({
            "open": {"vars": [{"name": "Z", "degree": 1}]},
            "closed": {"vars": [{"name": "s", "degree": 1}]},
            "zsym": {"name": "Z", "degree": 1},
            "lift": {"Z": "s"},
            "c_top": "s",
        })


@pytest.mark.parametrize("witness", ["t", "Z", "2*t - Z", "3*Z - 2*t"])
def test_result_does_not_depend_on_the_chosen_lift(monkeypatch, witness):
    datum = _line_through_origin()
    table = datum.table
    w = parse_poly(witness, table)
    assert datum.eta(w) == parse_poly("s", CLOSED)
    monkeypatch.setattr("src.gluing.gluecore.surjectivity_witnesses", lambda eta: {"s": w})
    total, cert = glue(datum, 4)
    assert cert.witnesses["s"] == w
    assert ideal_equal(total.relations, [parse_poly("t - Z", table)], table)


def test_gluing_a_point_with_nilpotent_class_onto_a_line():
    """U = Z[x]/(x^2) glued to Z[y] along x -> y with normal class y."""
    open_table = VariableTable.of("x:1")
    line = VariableTable.of("y:1")
    open_pres = RingPresentation(open_table, [parse_poly("x^2", open_table)], name="fat point")
    y = parse_poly("y", line)
    datum = GluingDatum(open_pres, RingPresentation(line, name="line"), "Z", 1, {"x": y}, y)
    total, cert = glue(datum, 4)
    expected = [parse_poly("x*(x - Z)", total.table), parse_poly("Z*(x - Z)", total.table)]
    assert ideal_equal(total.relations, expected, total.table)
    assert ideal_equal(total.relations, [parse_poly("x*Z - Z^2", total.table),
                                         parse_poly("x^2 - Z^2", total.table)], total.table)
    assert not ideal_equal(total.relations, [parse_poly("x^2", total.table)], total.table)
    assert cert.nzd and cert.vanishing_checked
    restricted = restrict_to_open(total, "Z", open_table)
    assert ideal_equal(restricted.relations, [parse_poly("x^2", open_table)], open_table)
