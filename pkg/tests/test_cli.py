import json

from src.algebra.gradedring import VariableTable
from src.algebra.polyparse import parse_poly
from src.app_main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


def _run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main(["--out", str(out), *argv])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_zero_is_a_member_of_the_empty_ideal(tmp_path):
    code, payload = _run(tmp_path, "ideal", "member", "--poly", "0", "--gens", "[]")
    assert code == EXIT_OK
    assert payload["status"] == "PASS"


def test_ideal_member_with_cofactors(tmp_path):
    code, payload = _run(tmp_path, "ideal", "member", "--vars", "x:1,y:2", "--gens", '["x^2 - y"]',
                         "--poly", "x^4 - y^2")
    assert code == EXIT_OK
    table = VariableTable.of("x:1,y:2")
    assert parse_poly(payload["cofactors"][0], table) == parse_poly("x^2 + y", table)


def test_ideal_non_member_exits_with_failure(tmp_path):
    code, payload = _run(tmp_path, "ideal", "member", "--vars", "x:1", "--gens", '["5*x"]', "--poly", "x")
    assert code == EXIT_FAILED
    assert payload["status"] == "FAIL" and "residual" in payload


def test_ideal_equal_and_nzd(tmp_path):
    code, _ = _run(tmp_path, "ideal", "equal", "--gens", '["x^2", "x*y"]', "--other", '["x^2 + x*y", "x*y"]')
    assert code == EXIT_OK
    code, payload = _run(tmp_path, "ideal", "nzd", "--vars", "x:1,y:1", "--gens", '["x*y"]', "--poly", "x")
    assert code == EXIT_FAILED
    assert payload["non_zero_divisor"] is False


def test_chern_of_a_symmetric_square(tmp_path):
    code, payload = _run(tmp_path, "chern", "--expr", "sym2(E{c1,c2})", "--degree", "1")
    assert code == EXIT_OK
    assert parse_poly(payload["class"], VariableTable.of("c1:1,c2:2")) == parse_poly("3*c1", VariableTable.of("c1:1,c2:2"))


def test_glue_from_inline_json(tmp_path):
    datum = {
        "open": {"name": "orbit", "vars": [{"name": "t", "degree": 1}], "relations": ["t"]},
        "closed": {"name": "origin", "vars": [{"name": "s", "degree": 1}]},
        "zsym": {"name": "Z", "degree": 1},
        "lift": {"t": "s"},
        "c_top": "s",
    }
    code, payload = _run(tmp_path, "glue", "--datum", json.dumps(datum))
    assert code == EXIT_OK
    assert len(payload["certificate"]["relations"]) == 2


def test_localize_and_invariants(tmp_path):
    payload_in = {"characters": [{"name": "u1"}, {"name": "u2"}], "weights": ["u1", "u2"], "restrictions": ["-u1", "-u2"]}
    code, payload = _run(tmp_path, "localize", "--input", json.dumps(payload_in))
    assert code == EXIT_OK
    assert parse_poly(payload["integral"], VariableTable.of("u1:1,u2:1")) == parse_poly("1", VariableTable.of("u1:1,u2:1"))
    inv = {"vars": [{"name": "a"}, {"name": "b"}], "group": "swap", "acting_on": ["a", "b"],
           "ideal": ["a", "b"], "claimed": ["a + b", "a*b"], "degree_bound": 4}
    code, payload = _run(tmp_path, "invariants", "--input", json.dumps(inv))
    assert code == EXIT_OK and payload["group_order"] == 2


def test_usage_errors_exit_with_two(tmp_path):
    assert main(["ideal", "member", "--vars", "x:1", "--gens", "not json", "--poly", "x"]) == EXIT_USAGE
    assert main(["ideal", "member", "--vars", "x:1", "--gens", "[]", "--poly", "x + q"]) == EXIT_USAGE
    assert main(["--max-degree", "5", "verify"]) == EXIT_USAGE
    assert main(["--constants", str(tmp_path / "missing.yaml"), "derive", "delta1"]) == EXIT_USAGE
    inv = {"vars": [{"name": "a"}], "group": "cyclic", "acting_on": ["a"], "ideal": [], "claimed": []}
    assert main(["invariants", "--input", json.dumps(inv)]) == EXIT_USAGE


def test_corrupted_constants_fail_verification(tmp_path):
    bad = tmp_path / "constants.yaml"
    bad.write_text("rings: {open: [{name: lambda1, degree: 1}]}\n"
                   "entries: [{name: p2, ring: open, degree: 4, source: corrupted, poly: 'lambda1^4 +'}]\n")
    assert main(["--constants", str(bad), "verify"]) == EXIT_FAILED


def test_boundary_derivation(tmp_path):
    code, payload = _run(tmp_path, "derive", "boundary")
    assert code == EXIT_OK
    assert sorted(payload["strata"]) == ["delta1", "delta11", "delta111"]
