"""Acceptance gate: every shipped criterion passes inside its time budget.

Each test drives one entry of the criterion registry end to end and prints
the same one-line verdict the ``suite`` command would, so a verbose test run
doubles as the acceptance report.
"""

from doublehall.suites import TIME_LIMITS, format_result, run_criterion


def check(ident: str) -> None:
    res = run_criterion(ident)
    print(format_result(res))
    assert res.passed, res.detail
    assert res.seconds < TIME_LIMITS[ident]


def test_criterion_01_checker_equivalence():
    check("1")


def test_criterion_02_family_truncations_are_double_hall():
    check("2")


def test_criterion_03_hall_failure_is_tight():
    check("3")


def test_criterion_04_cover_existence():
    check("4")


def test_criterion_05_single_cycle_covers():
    check("5")


def test_criterion_06_greedy_prefix_sweeps():
    check("6")


def test_criterion_07_economical_minimality():
    check("7")


def test_criterion_08_stabilized_cover_degrees():
    check("8")


def test_criterion_09_surgery_invariants():
    check("9")


def test_criterion_10_normal_tree_comparability():
    check("10")


def test_criterion_11_gluing_preserves_dhp():
    check("11")


def test_criterion_12_pseudo_isolation_verdicts():
    check("12")
