"""Profile families, cumulative masses, sampled spectra, combinators."""

import io
import math

import numpy as np
import pytest
from scipy.integrate import quad

import wklib
from wklib.errors import DivergenceError, DomainError, FormatError
from wklib.profiles import (
    AnalyticProfile,
    ProductProfile,
    Sampled,
    ScaledProfile,
    SumProfile,
    moment,
)


def _fd_slope(p, k, h=1e-6):
    return ((math.log(p.value(k * math.exp(h))) - math.log(p.value(k * math.exp(-h))))
            / (2.0 * h))


# -- slope consistency ----------------------------------------------------------


@pytest.mark.parametrize("make,pts,tol", [
    (lambda: wklib.make_truncated_power(1.7, 0.5, 40.0), (0.8, 3.0, 25.0), 1e-8),
    (lambda: wklib.make_two_regime(2.0, 4.0, 3.0), (0.1, 2.9, 80.0), 1e-7),
    (lambda: wklib.make_three_regime(), (0.05, 1.5, 300.0), 1e-7),
    (lambda: wklib.make_multi_regime(1.4, 2.4, 1.0, 100.0, 1e4),
     (5.0, 50.0, 5000.0), 1e-8),
    (lambda: wklib.make_ode_fluctuation(), (0.3, 1.4, 12.0), 2e-4),
])
def test_slope_matches_log_derivative(make, pts, tol):
    p = make()
    for k in pts:
        assert p.slope(k) == pytest.approx(_fd_slope(p, k), abs=max(tol, 1e-5 * abs(p.slope(k))))


def test_value_outside_support_is_zero():
    p = wklib.make_truncated_power(2.0, 1.0, 10.0)
    assert p.value(0.5) == 0.0
    assert p.value(20.0) == 0.0
    assert np.all(p.value(np.array([0.1, 11.0])) == 0.0)


def test_slope_outside_support_raises():
    p = wklib.make_truncated_power(2.0, 1.0, 10.0)
    with pytest.raises(DomainError):
        p.slope(0.5)
    with pytest.raises(DomainError):
        p.slope(np.array([2.0, 20.0]))


def test_family_parameter_validation():
    with pytest.raises(DomainError):
        wklib.make_truncated_power(2.0, 5.0, 1.0)
    with pytest.raises(DomainError):
        wklib.make_two_regime(-1.5, 4.0, 1.0)
    with pytest.raises(DomainError):
        wklib.make_two_regime(2.0, 2.5, 1.0)
    with pytest.raises(DomainError):
        wklib.make_multi_regime(1.0, 2.0, 1.0, 0.5, 10.0)


def test_ode_normalization():
    p = wklib.make_ode_fluctuation()
    assert p.value(1.0) == pytest.approx(1.0, rel=1e-6)


# -- cumulative masses -----------------------------------------------------------


def test_truncated_power_masses_closed_form():
    alpha, k1, k2 = 2.0, 1.0, 10.0
    p = wklib.make_truncated_power(alpha, k1, k2)

    def exact(order, a, b):
        a, b = max(a, k1), min(b, k2)
        if a >= b:
            return 0.0
        q = order - alpha + 1.0
        if abs(q) < 1e-14:
            return math.log(b / a)
        return (b**q - a**q) / q

    for order in (0, 1, 2, 3):
        for k in (0.0, 0.5, 1.0, 3.7, 9.0, 10.0, 50.0):
            assert p.tail_mass(order, k) == pytest.approx(
                exact(order, k, math.inf), rel=1e-9, abs=1e-15)
            assert p.head_mass(order, k) == pytest.approx(
                exact(order, 0.0, k), rel=1e-9, abs=1e-15)


def test_head_plus_tail_is_total(tr_2_4_1):
    total = tr_2_4_1.tail_mass(0, 0.0)
    for k in (1e-3, 0.2, 1.0, 7.0, 300.0):
        s = tr_2_4_1.head_mass(0, k) + tr_2_4_1.tail_mass(0, k)
        assert s == pytest.approx(total, rel=1e-9)


def test_two_regime_far_tail_accuracy(tr_2_4_1):
    # cached masses must stay accurate far beyond the build grid
    f = lambda k: k**2 / (1.0 + k**6)
    for big_k in (1e6, 1e9, 1e12):
        ref = quad(f, big_k, math.inf)[0]
        assert tr_2_4_1.tail_mass(0, big_k) == pytest.approx(ref, rel=1e-6)


def test_moment_matches_quad(three_regime):
    ref = quad(lambda k: three_regime.value(k), 0.0, math.inf, limit=400)[0]
    assert moment(three_regime, 0) == pytest.approx(ref, rel=1e-7)


def test_divergent_masses_raise():
    slow = wklib.make_two_regime(2.0, 3.0, 10.0)
    with pytest.raises(DivergenceError):
        slow.tail_mass(2, 1.0)  # k^2 f ~ 1/k at infinity
    ode = wklib.make_ode_fluctuation()
    with pytest.raises(DivergenceError):
        ode.head_mass(0, 1.0)  # f ~ k^{-3/2} at the origin
    # a pure 1/k spectrum has no integrable tail, so no transform
    harmonic = AnalyticProfile(
        lambda k: 1.0 / k, lambda k: np.full_like(k, -1.0),
        support=(0.0, math.inf), scale_hint=1.0, monotone_from=0.0,
        label="harmonic")
    with pytest.raises(DivergenceError):
        harmonic.transform_ready(3)


def test_tail_sup_dominates_scan():
    for p in (wklib.make_two_regime(2.0, 4.0, 3.0), wklib.make_three_regime(),
              wklib.make_ode_fluctuation()):
        for k in (0.05, 0.7, 2.0, 30.0):
            grid = np.geomspace(k, max(100.0, 50.0 * k), 4001)
            assert p.tail_sup(k) >= np.max(p.value(grid)) * (1.0 - 1e-9)


# -- sampled profiles ------------------------------------------------------------


def test_sampled_exact_on_power_laws():
    ks = np.geomspace(0.1, 100.0, 25)
    fs = 3.0 * ks**-1.7
    p = wklib.load_sampled(list(zip(ks, fs)))
    probe = np.geomspace(0.15, 80.0, 40)
    assert np.allclose(p.value(probe), 3.0 * probe**-1.7, rtol=1e-12)
    assert np.allclose(p.slope(probe), -1.7, atol=1e-12)


def test_sampled_validation():
    with pytest.raises(FormatError):
        wklib.load_sampled([(1.0, 1.0)] * 4)  # too few rows
    ks = list(np.geomspace(1, 10, 9))
    with pytest.raises(FormatError):
        Sampled(ks, [1.0] * 8 + [-1.0])  # nonpositive value
    bad = ks.copy()
    bad[3] = bad[2]
    with pytest.raises(FormatError):
        Sampled(bad, [1.0] * 9)  # non-increasing abscissas


def test_read_spectrum_csv_roundtrip():
    ks = np.geomspace(0.5, 50.0, 12)
    fs = ks**-2.0
    text = "# comment\nk,f\n" + "\n".join(f"{k:.12g},{f:.12g}" for k, f in zip(ks, fs))
    p = wklib.read_spectrum_csv(io.StringIO(text))
    assert p.kind == "sampled"
    assert p.support == (pytest.approx(0.5), pytest.approx(50.0))
    assert p.value(5.0) == pytest.approx(5.0**-2.0, rel=1e-10)


def test_read_spectrum_csv_rejects_bad_rows():
    with pytest.raises(FormatError):
        wklib.read_spectrum_csv(io.StringIO("1,2,3\n"))
    rows = "\n".join(f"{k},1.0" for k in range(1, 10))
    with pytest.raises(FormatError):
        wklib.read_spectrum_csv(io.StringIO(rows + "\noops,1.0\n"))


# -- combinators ------------------------------------------------------------------


def test_scaled_profile_value_and_slope(tr_2_4_1):
    p = ScaledProfile(tr_2_4_1, amplitude=2.5, stretch=4.0)
    for k in (0.01, 0.3, 2.0):
        assert p.value(k) == pytest.approx(2.5 * tr_2_4_1.value(4.0 * k), rel=1e-13)
        assert p.slope(k) == pytest.approx(tr_2_4_1.slope(4.0 * k), rel=1e-13)


def test_sum_profile_slope_is_weighted_mean():
    f = wklib.make_truncated_power(1.0, 1.0, 100.0)
    g = wklib.make_truncated_power(3.0, 1.0, 100.0)
    s = SumProfile(f, g)
    for k in (1.5, 10.0, 90.0):
        vf, vg = f.value(k), g.value(k)
        expect = (f.slope(k) * vf + g.slope(k) * vg) / (vf + vg)
        assert s.value(k) == pytest.approx(vf + vg, rel=1e-13)
        assert s.slope(k) == pytest.approx(expect, rel=1e-12)


def test_product_profile_slope_adds():
    f = wklib.make_truncated_power(1.0, 0.5, 200.0)
    g = wklib.make_two_regime(2.0, 4.0, 3.0)
    prod = ProductProfile(f, g)
    assert prod.support == (pytest.approx(0.5), pytest.approx(200.0))
    for k in (0.9, 5.0, 150.0):
        assert prod.value(k) == pytest.approx(f.value(k) * g.value(k), rel=1e-13)
        assert prod.slope(k) == pytest.approx(f.slope(k) + g.slope(k), rel=1e-12)


def test_product_empty_support_raises():
    f = wklib.make_truncated_power(1.0, 0.5, 1.0)
    g = wklib.make_truncated_power(1.0, 2.0, 3.0)
    with pytest.raises(DomainError):
        ProductProfile(f, g)
