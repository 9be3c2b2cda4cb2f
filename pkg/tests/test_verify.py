"""Verification harness: structural inequality checks and reporting."""

import math

import pytest

import wklib
from wklib.verify import all_passed


def _ids(reports):
    return [r.check_id for r in reports]


# -- kernel tables -----------------------------------------------------------------


def test_kernel_tables_all_pass():
    reports = wklib.check_kernel_tables(n_grid=50001)
    assert len(reports) >= 12
    assert all(r.applicable for r in reports)
    assert all_passed(reports)
    # margins are genuine: lhs strictly below rhs for the ratio bounds
    for r in reports:
        assert r.margin >= 0.0


# -- theorem checks -----------------------------------------------------------------


def test_thm1_ode_d3(ode_profile):
    reports = wklib.check_thm1(3, ode_profile, 1.5)
    assert len(reports) == 2
    assert all(r.applicable for r in reports)
    assert all_passed(reports)
    # the sup-gauge comparison has real margin on this profile
    sup = [r for r in reports if r.check_id.endswith("sup")][0]
    assert sup.lhs < sup.rhs


def test_thm1_inapplicable_on_truncated_support(tp_2_1_10):
    reports = wklib.check_thm1(3, tp_2_1_10, 2.0)
    assert all(not r.applicable for r in reports)
    assert all_passed(reports)  # inapplicable checks do not fail the suite


def test_thm2_band(tr_2_4_10):
    d0 = wklib.kernel_constants(3).delta0
    reports = wklib.check_thm2(3, tr_2_4_10, [d0])
    assert all(r.applicable for r in reports)
    assert all_passed(reports)


def test_thm2_inapplicable_without_second_moment():
    slow = wklib.make_two_regime(2.0, 3.0, 10.0)
    reports = wklib.check_thm2(3, slow, [wklib.kernel_constants(3).delta0])
    assert all(not r.applicable for r in reports)


def test_thm4_three_regime(three_regime):
    reports = [wklib.check_thm4(3, three_regime, 1.53, 1.0, 1e4)]
    assert reports[0].applicable
    assert all_passed(reports)


def test_thm4_inapplicable_when_plan_infeasible(tr_2_4_1):
    rep = wklib.check_thm4(3, tr_2_4_1, 5.0 / 3.0, 1.0, 2.0)
    assert not rep.applicable


def test_comparisons(tr_2_4_1):
    reports = wklib.check_comparisons(tr_2_4_1)
    assert all(r.applicable for r in reports)
    assert all_passed(reports)
    # the suite contains both the ordering and the sandwich checks
    joined = " ".join(_ids(reports))
    assert "order" in joined or "monotone" in joined or "comparison" in joined
    assert "sandwich" in joined


def test_powerlaw_lower_bound(tp_2_1_10):
    rep = wklib.check_powerlaw_lower_bound(3, tp_2_1_10, -2.0, 1.0, 10.0)
    assert rep.applicable
    assert rep.passed


# -- reporting ----------------------------------------------------------------------


def test_report_text_and_csv():
    reports = wklib.check_kernel_tables(n_grid=20001)
    text = wklib.report_text(reports)
    assert ": pass" in text
    csv_text = wklib.report_csv(reports)
    lines = csv_text.strip().splitlines()
    assert lines[0].startswith("check_id,")
    assert len(lines) == len(reports) + 1


def test_all_passed_flags_failures():
    reports = wklib.check_kernel_tables(n_grid=20001)
    assert all_passed(reports)
    doctored = reports[0].__class__(
        check_id="doctored", lhs=2.0, rhs=1.0, margin=-1.0, passed=False)
    assert not all_passed(reports + [doctored])
    assert ": FAIL" in wklib.report_text([doctored]) or ": fail" in wklib.report_text([doctored])
