"""Thresholds, the admissibility function and dual-range planning."""

import math

import numpy as np
import pytest

import wklib
from wklib.errors import DomainError
from wklib.profiles import AnalyticProfile

D0_3 = wklib.kernel_constants(3).delta0
E0_3 = wklib.kernel_constants(3).eta0


def exp_tail_profile():
    return AnalyticProfile(
        lambda k: k**2 * np.exp(-k), lambda k: 2.0 - k,
        support=(0.0, math.inf), scale_hint=1.0, monotone_from=2.0,
        label="exp-tail")


# -- sharp threshold -------------------------------------------------------------


def test_k_sharp_frozen_value(tr_2_4_10):
    assert wklib.k_sharp(3, tr_2_4_10, D0_3) == pytest.approx(
        285.1606562482854, rel=1e-6)


def test_k_sharp_defining_condition(tr_2_4_10):
    delta = D0_3 / 2.0
    ks = wklib.k_sharp(3, tr_2_4_10, delta)
    lhs = ks**2 * tr_2_4_10.tail_mass(0, ks)
    rhs = 0.5 * delta**4 * tr_2_4_10.head_mass(2, ks)
    assert lhs <= rhs * (1.0 + 1e-5)
    # just below the threshold the condition must fail
    k_lo = ks * (1.0 - 1e-4)
    assert (k_lo**2 * tr_2_4_10.tail_mass(0, k_lo)
            > 0.5 * delta**4 * tr_2_4_10.head_mass(2, k_lo))


def test_k_sharp_compact_support_saturates(tp_2_1_10):
    # with support ending at 10, the threshold converges to the support edge
    small = wklib.k_sharp(3, tp_2_1_10, D0_3 / 64.0)
    assert 1.0 <= small <= 10.0 * (1.0 + 1e-6)
    assert small > 0.9 * wklib.k_sharp(3, tp_2_1_10, D0_3 / 4096.0)


@pytest.mark.parametrize("beta,expo", [(4.0, -4.0), (5.0, -2.0)])
def test_k_sharp_power_tail_scaling(beta, expo):
    # K ~ delta^{-4/(beta-3)} for a k^-beta tail
    q = wklib.make_two_regime(2.0, beta, 1.0)
    deltas = D0_3 * 2.0 ** -np.arange(4)
    ks = [wklib.k_sharp(3, q, float(d)) for d in deltas]
    slope = np.polyfit(np.log(deltas), np.log(ks), 1)[0]
    assert slope == pytest.approx(expo, rel=0.03)


def test_k_sharp_exponential_tail_log_law():
    # K grows by a near-constant amount per decade of delta
    p = exp_tail_profile()
    ks = [wklib.k_sharp(3, p, D0_3 * 10.0**-j) for j in range(4)]
    incs = np.diff(ks)
    assert np.all(incs > 0)
    assert np.max(incs) / np.min(incs) < 1.3


def test_k_sharp_dual_endpoint_monotone(tr_2_4_10):
    # delta / K_sharp(delta) is nondecreasing in delta
    deltas = D0_3 * 2.0 ** -np.arange(5)[::-1]
    ratios = [d / wklib.k_sharp(3, tr_2_4_10, float(d)) for d in deltas]
    assert np.all(np.diff(ratios) >= -1e-12)


def test_k_sharp_domain(tr_2_4_10):
    with pytest.raises(DomainError):
        wklib.k_sharp(3, tr_2_4_10, 2.0 * D0_3)
    with pytest.raises(DomainError):
        wklib.k_sharp(3, tr_2_4_10, 0.0)


# -- flat threshold ---------------------------------------------------------------


def test_k_flat_frozen_values(tr_2_4_10):
    assert wklib.k_flat(3, tr_2_4_10, E0_3) == pytest.approx(
        8.001121588260467, rel=1e-6)
    assert wklib.k_flat(2, tr_2_4_10, wklib.kernel_constants(2).eta0) == \
        pytest.approx(7.724859736223068, rel=1e-6)


def test_k_flat_matches_scan_oracle(tr_2_4_10):
    # largest K with head <= eta^{-(d-1)/2} tail / 2, by exhaustive grid
    eta = E0_3
    grid = np.geomspace(6.0, 10.0, 20001)
    ok = [k for k in grid
          if tr_2_4_10.head_mass(0, k) <= 0.5 * eta**-1.0 * tr_2_4_10.tail_mass(0, k)]
    scan = max(ok)
    assert wklib.k_flat(3, tr_2_4_10, eta) == pytest.approx(scan, rel=2e-4)


def test_k_flat_decreasing_in_eta(tr_2_4_10):
    vals = [wklib.k_flat(3, tr_2_4_10, e)
            for e in (E0_3, 10.0 * E0_3, 100.0 * E0_3)]
    assert vals[0] > vals[1] > vals[2] > 0.0


def test_k_flat_domain(tr_2_4_10):
    with pytest.raises(DomainError):
        wklib.k_flat(3, tr_2_4_10, 0.5 * E0_3)
    with pytest.raises(DomainError):
        wklib.k_flat(1, tr_2_4_10, 2.0)


def test_flat_sharp_gap(tr_2_4_10):
    kf, ks, ok = wklib.flat_sharp_gap(3, tr_2_4_10, D0_3, E0_3)
    assert ok
    assert kf < ks
    assert kf == pytest.approx(wklib.k_flat(3, tr_2_4_10, E0_3), rel=1e-9)
    assert ks == pytest.approx(wklib.k_sharp(3, tr_2_4_10, D0_3), rel=1e-9)


# -- admissibility and the minimal range ------------------------------------------


def test_sigma_alpha_formula():
    # alpha = 2 reduces to pi eps + 1/(pi mu)
    assert wklib.sigma_alpha(2.0, 0.1, 3.0) == pytest.approx(
        math.pi * 0.1 + 1.0 / (math.pi * 3.0), rel=1e-14)
    val = wklib.sigma_alpha(1.5, 0.2, 2.0)
    expect = (0.5 * (math.pi * 0.2) ** 1.5
              + 1.5 * (math.pi * 2.0) ** -0.5)
    assert val == pytest.approx(expect, rel=1e-14)


def test_sigma_alpha_domain():
    with pytest.raises(DomainError):
        wklib.sigma_alpha(1.0, 0.1, 1.0)
    with pytest.raises(DomainError):
        wklib.sigma_alpha(2.0, -0.1, 1.0)
    with pytest.raises(DomainError):
        wklib.sigma_alpha(2.0, 0.1, 0.0)


def test_min_reynolds_closed_form_point():
    assert wklib.min_reynolds(2.0, 1.0) == pytest.approx(4.0, rel=1e-12)


def test_min_reynolds_matches_grid_search():
    alpha, target = 1.7, 0.8
    eps_max = (target / (alpha - 1.0)) ** (1.0 / (3.0 - alpha)) / math.pi
    eps = np.geomspace(eps_max * 1e-4, eps_max * (1 - 1e-9), 200001)
    rem = target - (alpha - 1.0) * (math.pi * eps) ** (3.0 - alpha)
    mu = ((3.0 - alpha) / rem) ** (1.0 / (alpha - 1.0)) / math.pi
    brute = float(np.min(mu / eps))
    assert wklib.min_reynolds(alpha, target) == pytest.approx(brute, rel=1e-5)


def test_min_reynolds_blows_up_at_the_ends():
    assert wklib.min_reynolds(1.01, 1.0) > 1e10
    assert wklib.min_reynolds(2.99, 1.0) > 1e10
    # easier targets shrink the minimal range
    assert wklib.min_reynolds(2.0, 1.5) < wklib.min_reynolds(2.0, 1.0)


# -- dual-range planning -------------------------------------------------------------


def test_plan_frozen_three_regime(three_regime):
    plan = wklib.plan_dual_range(3, three_regime, 1.53, 1.0, 1e4)
    assert plan.feasible
    assert plan.eps == pytest.approx(0.19864050954888193, rel=1e-6)
    assert plan.mu == pytest.approx(1.177148502469384, rel=1e-6)
    assert plan.rhs_bound == pytest.approx(42.669643220493725, rel=1e-5)
    assert plan.dual_interval[0] == pytest.approx(plan.mu / 1e4, rel=1e-9)
    assert plan.dual_interval[1] == pytest.approx(plan.eps / 1.0, rel=1e-9)
    # the dual window must span more than three decades here
    assert math.log10(plan.dual_interval[1] / plan.dual_interval[0]) > 3.0
    assert plan.sigma_value <= plan.meta["target"] * (1.0 + 1e-9)


def test_plan_infeasible_for_narrow_interval(tr_2_4_1):
    plan = wklib.plan_dual_range(3, tr_2_4_1, 5.0 / 3.0, 1.0, 2.0)
    assert not plan.feasible


def test_plan_d1_constant_is_infinite(tr_2_4_1):
    # no positive kernel lower bound in d=1, so the theorem gives nothing
    plan = wklib.plan_dual_range(1, tr_2_4_1, 2.0, 1.0, 1e4)
    assert not plan.feasible
    assert plan.rhs_bound == math.inf


def test_plan_pure_power_degenerate_target():
    p = wklib.make_truncated_power(5.0 / 3.0, 1e-10, 1e10)
    plan = wklib.plan_dual_range(3, p, 5.0 / 3.0, 1e-9, 1e9)
    # gauges vanish, the target degenerates and is floored, yet the wide
    # spectral interval keeps the plan feasible
    assert plan.meta["target_floored"]
    assert plan.feasible
