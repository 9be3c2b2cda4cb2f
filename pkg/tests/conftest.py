"""Shared fixtures and reference integrators.

Session-scoped profile fixtures are reused across test modules so the
cumulative-mass caches are built once.
"""

import numpy as np
import pytest

import wklib


@pytest.fixture(scope="session")
def tp_2_1_10():
    return wklib.make_truncated_power(2.0, 1.0, 10.0)


@pytest.fixture(scope="session")
def tr_2_4_10():
    return wklib.make_two_regime(2.0, 4.0, 10.0)


@pytest.fixture(scope="session")
def tr_2_4_1():
    return wklib.make_two_regime(2.0, 4.0, 1.0)


@pytest.fixture(scope="session")
def three_regime():
    return wklib.make_three_regime()


@pytest.fixture(scope="session")
def multi_regime():
    return wklib.make_multi_regime(1.4, 2.4, 1.0, 100.0, 1e4)


@pytest.fixture(scope="session")
def ode_profile():
    return wklib.make_ode_fluctuation()


def trapezoid_wk(d, p, lam, n=1_000_000):
    """Reference transform for compact-support profiles.

    Plain trapezoid on a linear grid over the support, Richardson
    extrapolated (n and n/2 nodes) to kill the O(h^2) term.
    """
    lo, hi = p.support
    assert np.isfinite(hi), "reference integrator needs compact support"

    def trapz(m):
        k = np.linspace(lo, hi, m + 1)
        y = wklib.kernel_h(d, lam * k) * p.value(k)
        return np.trapezoid(y, k)

    t_full = trapz(n)
    t_half = trapz(n // 2)
    return (4.0 * t_full - t_half) / 3.0
