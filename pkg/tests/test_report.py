import json

from src.algebra.gradedring import VariableTable
from src.algebra.polyparse import parse_poly
from src.genus3.report import EQUAL, MEMBER, VerificationReport


def test_empty_report_does_not_pass():
    report = VerificationReport(12)
    assert not report.passed
    assert report.to_json()["status"] == "FAIL"


def test_claims_and_json_layout():
    table = VariableTable.of("x:1")
    report = VerificationReport(12, "abc", "data/genus3_constants.yaml")
    report.record("x equals x", EQUAL, True, stage="toy", target=parse_poly("x", table))
    report.record("x in (2*x)", MEMBER, True, stage="toy", degree_bound=1)
    report.runtimes["toy"] = 0.25
    data = json.loads(report.dumps())
    assert data["status"] == "PASS"
    assert data["constants_sha256"] == "abc"
    assert [c["name"] for c in data["claims"]] == ["x equals x", "x in (2*x)"]
    assert "runtimes" not in data
    assert report.to_json(include_runtimes=True)["runtimes"] == {"toy": 0.25}


def test_failures_and_summary_table():
    report = VerificationReport(9)
    report.record("good", EQUAL, True)
    report.record("bad", EQUAL, False, detail="differs")
    assert [c.name for c in report.failures()] == ["bad"]
    assert report.claims[1].to_json()["status"] == "FAIL"
    assert report.summary_table().row_count == 2
