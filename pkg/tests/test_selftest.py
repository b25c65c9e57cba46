import numpy as np

from blackwell_kit.selftest import CHECKS, CheckResult, SelftestConfig, format_report, run_selftest


def test_every_module_is_exercised():
    modules = {m for m, *_ in CHECKS}
    assert {"channel_core", "parameters", "operations", "blackwell", "analysis"} <= modules


def test_all_checks_pass_at_small_scale():
    results = run_selftest(SelftestConfig(seed=2, scale=0.2))
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_report_is_pure_function_of_seed():
    cfg = SelftestConfig(seed=1, scale=0.1)
    a = format_report(run_selftest(cfg), 1)
    assert a == format_report(run_selftest(cfg), 1)
    assert a != format_report(run_selftest(SelftestConfig(seed=7, scale=0.1)), 7)


def test_line_format():
    line = CheckResult("m", "name", False, 3, 1 / 3).line()
    assert line == "FAIL\tm\tname\tcases=3\tworst=0.333333333333"


def test_failure_is_counted():
    rs = [CheckResult("a", "x", True, 1, 0.0), CheckResult("b", "y", False, 1, np.inf)]
    assert format_report(rs, 0).endswith("passed 1 / 2, failed 1\n")
