"""Acceptance gate: the full verification battery, one test per criterion."""

import pytest

from pogorelov import verify

EXPECTED_CHECKS = {
    1: "embedding isometry residual",
    2: "one-sided z'' jump at the branch circle",
    3: "embeddable window endpoints",
    4: "curvature closed-form identity",
    5: "curvature expansion coefficients",
    6: "curvature lower bound window",
    7: "disc layout disjointness",
    8: "C^2 gluing across disc boundaries",
    9: "norm decay exponents and Cauchy tails",
    10: "convex edge bound suite",
    11: "ruling curvature law 1/k linear",
    12: "sagitta value and bounds",
    13: "bytewise deterministic reports",
}


@pytest.fixture(scope="module")
def report():
    return verify.run_all("full")


def test_battery_shape(report):
    assert [r.check_id for r in report.results] == list(EXPECTED_CHECKS)
    assert {r.check_id: r.name for r in report.results} == EXPECTED_CHECKS


@pytest.mark.parametrize(
    "check_id",
    list(EXPECTED_CHECKS),
    ids=[f"{i:02d}-{name.replace(' ', '-')}" for i, name in EXPECTED_CHECKS.items()],
)
def test_criterion(report, check_id):
    result = next(r for r in report.results if r.check_id == check_id)
    status = "PASS" if result.passed else "FAIL"
    print(f"criterion {check_id:02d} {status} {result.name}")
    assert result.passed, f"criterion {check_id:02d} FAIL {result.name}: {result.details}"


def test_overall_verdict(report):
    assert report.passed is True
    doc = report.to_dict()
    assert doc["passed"] is True
    assert len(doc["checks"]) == len(EXPECTED_CHECKS)
    assert all(c["passed"] for c in doc["checks"])
