import math
import time

import pytest

from stdqbose import model
from stdqbose.verify import FamilyResult, rel_err, run_verify, scaled_err

FAMILY_NAMES = {
    "limit",
    "asymptotic",
    "oracle",
    "specialization",
    "intercept_forms",
    "symmetry",
    "identity",
    "algebra",
    "degenerate",
    "occupation_zeros",
}


def test_quick_preset_passes_fast():
    t0 = time.perf_counter()
    report = run_verify("quick")
    elapsed = time.perf_counter() - t0
    assert report.passed, "\n".join(report.lines())
    assert elapsed < 10.0
    assert {f.name for f in report.families} == FAMILY_NAMES


def test_full_preset_passes():
    report = run_verify("full")
    assert report.passed, "\n".join(report.lines())
    assert all(f.checks > 0 for f in report.families)


@pytest.mark.parametrize("preset", ["quick", "full"])
def test_sign_error_in_dist_3_is_caught(monkeypatch, preset):
    original = model.dist_3
    monkeypatch.setattr(model, "dist_3", lambda dp, mode: -original(dp, mode))
    report = run_verify(preset)
    fam = {f.name: f for f in report.families}["specialization"]
    assert not fam.passed and not report.passed
    assert "r=3" in fam.point


def test_crash_in_family_is_reported(monkeypatch):
    def boom(dp, mode, r):
        raise RuntimeError("injected")

    monkeypatch.setattr(model, "dist_r", boom)
    report = run_verify("quick")
    assert not report.passed
    failed = [f for f in report.families if not f.passed]
    assert any("injected" in f.point for f in failed)


def test_unknown_preset():
    with pytest.raises(ValueError):
        run_verify("exhaustive")


def test_nan_residual_fails():
    fam = FamilyResult("x", 1e-12)
    fam.record(1e-15, "a")
    fam.record(math.nan, "b")
    assert not fam.passed and fam.point == "b"


def test_empty_family_fails():
    assert not FamilyResult("x", 1.0).passed


def test_error_metrics():
    assert rel_err(1.0 + 1e-12, 1.0) == pytest.approx(1e-12, rel=1e-3)
    assert rel_err(3.0, 0.0) == 3.0
    assert scaled_err(1e-14, 0.0, 1.0) == 1e-14
    assert scaled_err(2.0, 1.0, 0.5) == 1.0


def test_report_lines():
    lines = run_verify("quick").lines()
    assert len(lines) == len(FAMILY_NAMES) + 1
    assert all(line.startswith("PASS") for line in lines)
