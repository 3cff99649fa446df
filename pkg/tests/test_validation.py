from ou_bounds.capacity import PowerLaw
from ou_bounds.ou import OuParams
from ou_bounds.validation import CheckResult, eigen_sandwich, water_level_floor_scan, level_sandwich_scan, run_all

P = OuParams()


def test_check_result_semantics():
    assert CheckResult("a", "skip").ok
    assert not CheckResult("a", "fail", "x").ok
    assert CheckResult("a", "pass", "fine").line() == "[PASS] a: fine"


def test_sandwich_reports_failure_detail():
    # negative slack is tighter than the bounds themselves and must fail somewhere
    check = eigen_sandwich(P, n=50, k_max=10, slack=-0.5)
    assert check.status == "fail" and "not in" in check.detail


def test_water_level_floor_limit_is_enforced():
    check, r_large = water_level_floor_scan(P, r_max_allowed=1.0)
    assert r_large > 1.0 and check.status == "fail"


def test_level_sandwich_checks_window_image_rates():
    # the nominal rate interval is empty at this N, so only the 20 image rates are tested
    check = level_sandwich_scan(P, 64)
    assert check.detail.endswith("20/20 rates inside the sandwich")


def test_run_all_skips_for_weak_power():
    results = run_all(P, PowerLaw.power_of_n(1.0, -2.0), 2.0, 16, 200, 1)
    status = {r.name: r.status for r in results}
    assert status["water-level-floor"] == status["level-sandwich"] == "skip"
    assert status["monte-carlo"] != "skip" and status["eigen-sandwich"] == "pass"
