"""End-to-end acceptance battery, one test per criterion.

The battery runs once per module; each criterion's pass/fail line is printed
(visible with ``pytest -s`` and in the captured output of a failing run).
"""
import functools
import io
import json

import pytest

from conftest import ACCEPTANCE_LINES
from hbsmirnov.battery import run_battery
from hbsmirnov.cli import run
from hbsmirnov.config import RunConfig


@pytest.fixture(scope="module")
def battery():
    crits = {c.number: c for c in run_battery(RunConfig())}
    print()
    for c in crits.values():
        print(c.line())
        ACCEPTANCE_LINES.append(c.line())
    return crits


def _report(c):
    print(c.line())
    return c


def test_criterion_01_mate_identity(battery):
    c = _report(battery[1])
    assert c.passed and c.detail["cases"] >= 25


def test_criterion_02_fejer_riesz(battery):
    c = _report(battery[2])
    assert c.passed and c.detail["cases"] >= 50 and c.detail["multiplicityMismatches"] == 0


def test_criterion_03_decomposition_round_trip(battery):
    c = _report(battery[3])
    assert c.passed and c.detail["cases"] >= 300


def test_criterion_04_reconstruction_and_certificates(battery):
    c = _report(battery[4])
    d = c.detail
    assert d["cases"] >= 50 and not d["failing"]
    assert c.value <= c.threshold
    assert d["worst"]["minQ"] >= 0.5 - 1e-9
    assert max(d["worst"]["tailU"], d["worst"]["tailV"], d["worst"]["tailFp"]) <= 1e-6


@pytest.mark.xfail(strict=True, reason=(
    "p u_c = Q p h_c / (c F0 + 1) with |Q| up to 3/2 on the circle; only the second "
    "factor is bounded by 1, so sup|p u_c| exceeds 1 when p has two boundary zeros"))
def test_criterion_04_unit_bound_on_p_times_u(battery):
    c = _report(battery[4])
    assert not c.detail["supPUAboveOne"]


def test_criterion_05_dual_route(battery):
    c = _report(battery[5])
    assert c.passed
    assert c.detail["mismatchAt64"] and c.detail["adaptivePass"] and c.detail["adaptiveGrid"] > 64


def test_criterion_06_main_assembly(battery):
    c = _report(battery[6])
    assert c.passed and c.detail["cases"] >= 75


def test_criterion_07_cyclicity_routes(battery):
    c = _report(battery[7])
    assert c.passed and c.detail["agree"] == c.detail["cases"] >= 300


def test_criterion_08_algebra_closure(battery):
    c = _report(battery[8])
    assert c.passed and c.detail["combinations"] >= 90


def test_criterion_09_kernel_positivity(battery):
    c = _report(battery[9])
    assert c.passed and c.detail["cases"] >= 20


def test_criterion_10_negative_controls(battery):
    c = _report(battery[10])
    assert c.passed and all(c.detail.values())


# --- the same suite driven through the command line ---------------------------------

@functools.lru_cache(maxsize=None)
def _selftest(*flags):
    out, err = io.StringIO(), io.StringIO()
    _, code = run(["selftest", *flags], stdout=out, stderr=err)
    return json.loads(out.getvalue()), code, err.getvalue()


def test_selftest_coarse_grid_is_numerical_failure():
    doc, code, log = _selftest("--grid", "64")
    print(log)
    kinds = {c["detail"].get("error", {}).get("kind") for c in doc["result"]["criteria"]}
    assert code == 3 and "RouteMismatch" in kinds


@pytest.mark.xfail(strict=True, reason="criterion 4 keeps the literal unit bound on sup|p u_c|")
def test_selftest_default_passes():
    doc, code, log = _selftest()
    print(log)
    assert code == 0


@pytest.mark.xfail(strict=True, reason="sup|p u_c| reaches 1.18, above the loosened 1.1")
def test_selftest_loose_tolerance_passes():
    doc, code, log = _selftest("--tol", "0.1")
    print(log)
    assert code == 0


def test_selftest_loose_tolerance_only_unit_bound_fails():
    doc, code, _ = _selftest("--tol", "0.1")
    failed = [c["criterion"] for c in doc["result"]["criteria"] if not c["pass"]]
    assert code == 1 and failed == [4]
