"""Radial correlation kernel H_d and its companion quantities.

H_d(sigma) = 1 - Gamma(d/2) (pi sigma)^{1-d/2} J_{d/2-1}(2 pi sigma) is the
weight that turns a radial spectrum into a structure function.  This module
evaluates H_d, its derivative, the combinations L_d = 2H_d - z H_d' and the
primitive G_d of z H_d', together with the dimension-dependent constants
used by the threshold and range computations.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from ._kernels import besselj_arr, h_arr, h_deriv_arr, l_arr
from .errors import DomainError, UnsupportedOrderError

_PI = math.pi

# lower/upper constants of the global bound
#   c_minus * pi^2 s^2/(1+pi^2 s^2) <= H_d(s) <= c_plus * pi^2 s^2/(1+pi^2 s^2)
# (lower constants rounded down, upper rounded up); outside the table the
# fallback c_minus = 2/d, c_plus = d/(d-1) applies for d >= 3.
_C_MINUS = {2: 0.756, 3: 2.0 / 3.0, 4: 0.5, 5: 0.4, 6: 1.0 / 3.0}
_C_PLUS = {1: 2.0, 2: 1.839, 3: 1.487, 4: 1.322, 5: 1.230, 6: 1.172}

# remainder constants of the large-argument expansion of H_d (rounded up);
# zero in dimensions 1 and 3 where the expansion is exact
_C_ZERO = {
    1: 0.0,
    2: 6.34e-3,
    3: 0.0,
    4: 6.05e-3,
    5: 12.1e-3,
    6: 20.2e-3,
    10: 101e-3,
    20: 24.9,
}


def check_dim(d, minimum=1):
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise DomainError(f"dimension must be an integer, got {d!r}")
    if d < minimum:
        raise DomainError(f"dimension must be >= {minimum}, got {d}")
    return int(d)


def _check_nonneg(name, value):
    v = float(value)
    if not math.isfinite(v) or v < 0.0:
        raise DomainError(f"{name} must be a finite nonnegative real, got {value!r}")
    return v


def _check_pos(name, value):
    v = float(value)
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"{name} must be a finite positive real, got {value!r}")
    return v


def _scalarize(fn, name, value, positive=False):
    """Apply an array kernel to a scalar or array argument with validation."""
    arr = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if positive:
        if np.any(arr <= 0.0):
            raise DomainError(f"{name} must be > 0")
    elif np.any(arr < 0.0):
        raise DomainError(f"{name} must be >= 0")
    out = fn(arr)
    if np.isscalar(value) or arr.ndim == 0:
        return float(np.asarray(out).ravel()[0])
    return out


def bessel_j(nu, x):
    """Bessel function J_nu for integer and half-integer orders nu >= -1/2.

    Absolute accuracy is ~1e-13 over x in [0, 1e6] for the orders needed
    here (nu = d/2 - 1 and d/2).  Scalar or array x.
    """
    nu = float(nu)
    if nu < -0.5 or (2.0 * nu) != round(2.0 * nu):
        raise UnsupportedOrderError(
            f"order must be an integer or half-integer >= -1/2, got {nu}"
        )
    if nu < 0.0:
        # J_{-1/2} blows up like x^{-1/2} at the origin
        def fn(a):
            out = besselj_arr(nu, a)
            return np.where(a == 0.0, math.inf, out)
        return _scalarize(fn, "x", x)
    return _scalarize(lambda a: besselj_arr(nu, a), "x", x)


def kernel_h(d, sigma):
    """The kernel H_d(sigma); nonnegative, H_d(0) = 0, oscillates to 1."""
    d = check_dim(d)
    return _scalarize(lambda a: h_arr(d, a), "sigma", sigma)


def kernel_h_deriv(d, sigma):
    """Derivative H_d'(sigma) for sigma > 0."""
    d = check_dim(d)
    return _scalarize(lambda a: h_deriv_arr(d, a), "sigma", sigma, positive=True)


def kernel_l(d, z):
    """L_d(z) = 2 H_d(z) - z H_d'(z); O(z^4) at the origin."""
    d = check_dim(d)
    return _scalarize(lambda a: l_arr(d, a), "z", z)


_G_SWITCH = 4.0 / _PI

_GL16_X, _GL16_W = np.polynomial.legendre.leggauss(16)


def _g_series(d, z):
    # G_d(z) = (4 pi^2 / 3d) z^3 * 1F2(3/2; 5/2, 1+d/2; -pi^2 z^2)
    w = -(_PI * z) ** 2
    a, b, c = 1.5, 2.5, 1.0 + 0.5 * d
    term = 1.0
    acc = 1.0
    for m in range(1, 200):
        term *= w * (a + m - 1.0) / ((b + m - 1.0) * (c + m - 1.0) * m)
        acc += term
        if abs(term) <= 1e-17 * (abs(acc) + 1e-300):
            break
    return (4.0 * _PI * _PI / (3.0 * d)) * z**3 * acc


def _g_quad_tail(d, z0, z1):
    # integral of s H_d'(s) over [z0, z1] on half-period panels
    n = max(1, int(math.ceil(2.0 * (z1 - z0))))
    edges = np.linspace(z0, z1, n + 1)
    half = 0.5 * np.diff(edges)
    mid = edges[:-1] + half
    s = (mid[:, None] + half[:, None] * _GL16_X).ravel()
    vals = (s * h_deriv_arr(d, s)).reshape(-1, 16)
    return float(np.sum((vals @ _GL16_W) * half))


def kernel_g(d, z):
    """G_d(z), the primitive of z H_d'(z) vanishing at 0; scalar only."""
    d = check_dim(d)
    z = _check_nonneg("z", z)
    if z == 0.0:
        return 0.0
    if d == 1:
        x = 2.0 * _PI * z
        return -z * math.cos(x) + math.sin(x) / (2.0 * _PI)
    if d == 3:
        x = 2.0 * _PI * z
        si, _ = sici(x)
        return (float(si) - math.sin(x)) / (2.0 * _PI)
    if z <= _G_SWITCH:
        return _g_series(d, z)
    return _g_series(d, _G_SWITCH) + _g_quad_tail(d, _G_SWITCH, z)


def kernel_asymptotic(d, sigma):
    """Large-argument form of H_d and a bound on its remainder.

    Returns (main, remainder_bound) with
    main = 1 - (Gamma(d/2)/pi^{d/2}) sigma^{-(d-1)/2} cos[(2 sigma - (d-1)/4) pi];
    the bound is c_d0 * sigma^{-(d+1)/2}, zero for d in {1, 3} where the
    formula is exact.
    """
    d = check_dim(d)
    sigma = _check_pos("sigma", sigma)
    amp = math.gamma(0.5 * d) * _PI ** (-0.5 * d) * sigma ** (-0.5 * (d - 1.0))
    main = 1.0 - amp * math.cos((2.0 * sigma - 0.25 * (d - 1.0)) * _PI)
    c0 = _c_zero(d)
    rem = 0.0 if d in (1, 3) else c0 * sigma ** (-0.5 * (d + 1.0))
    return main, rem


def _c_zero(d):
    if d in _C_ZERO:
        return _C_ZERO[d]
    # geometric interpolation between tabulated dimensions; crude but only
    # used for untabulated d where no sharper figure is available
    known = sorted(k for k in _C_ZERO if _C_ZERO[k] > 0.0)
    lo = max(k for k in known if k < d) if any(k < d for k in known) else known[0]
    his = [k for k in known if k > d]
    if his:
        hi = min(his)
        t = (d - lo) / (hi - lo)
        return _C_ZERO[lo] ** (1.0 - t) * _C_ZERO[hi] ** t
    # extrapolate beyond the table with the last decade's growth rate
    rate = (_C_ZERO[20] / _C_ZERO[10]) ** 0.1
    return _C_ZERO[20] * rate ** (d - 20)


@dataclass(frozen=True)
class KernelConstants:
    d: int
    c_minus: float
    c_plus: float
    c_zero: float
    big_c_l: float
    delta0: float
    eta0: float


def kernel_constants(d):
    """Tabulated constants for dimension d (bounds, delta0, eta0)."""
    d = check_dim(d)
    if d == 1:
        c_minus = 0.0  # H_1 vanishes at every integer, no positive lower bound
    elif d in _C_MINUS:
        c_minus = _C_MINUS[d]
    else:
        c_minus = 2.0 / d
    c_plus = _C_PLUS[d] if d in _C_PLUS else d / (d - 1.0)
    c_zero = _c_zero(d)
    big_c_l = 4.0 * _PI**4 / (d * (d + 2.0))
    delta0 = math.sqrt(d / (2.0 * _PI**2))
    if d == 1:
        eta0 = math.inf  # the flat-threshold theory needs d >= 2
    else:
        ind4 = 1.0 if d >= 4 else 0.0
        amp = (1.0 + ind4) * math.gamma(0.5 * d) * _PI ** (-0.5 * d)
        cand1 = (1.0 + amp) ** (2.0 / (d - 1.0))
        cand2 = ind4 * c_zero * _PI ** (0.5 * d) / math.gamma(0.5 * d)
        eta0 = max(cand1, cand2)
    return KernelConstants(
        d=d,
        c_minus=c_minus,
        c_plus=c_plus,
        c_zero=c_zero,
        big_c_l=big_c_l,
        delta0=delta0,
        eta0=eta0,
    )


def homogeneous_constant(d, alpha):
    """The constant c_d(alpha) with WK_d[k^{-alpha}](lam) = c_d(alpha) lam^{alpha-1}.

    Only d in {2, 3} and 1 < alpha < 3 are covered.  The d = 3 case uses a
    reflection-formula form that is smooth through alpha = 2.
    """
    d = check_dim(d)
    alpha = float(alpha)
    if not (1.0 < alpha < 3.0):
        raise DomainError(f"alpha must lie in (1, 3), got {alpha}")
    if d == 2:
        s = 0.5 * (alpha - 1.0)  # in (0, 1)
        gamma_neg = _PI / (math.sin(_PI * s) * math.gamma(1.0 + s))
        return 0.5 * _PI ** (alpha - 1.0) * gamma_neg / math.gamma(0.5 * (alpha + 1.0))
    if d == 3:
        # (2 pi)^{alpha-1} Gamma(-alpha) sin(alpha pi / 2) rewritten by the
        # reflection formula; no pole at alpha = 2
        return (
            -((2.0 * _PI) ** (alpha - 1.0))
            * _PI
            / (2.0 * math.cos(0.5 * _PI * alpha) * math.gamma(alpha + 1.0))
        )
    raise UnsupportedOrderError(f"homogeneous constant only covers d in {{2, 3}}, got {d}")
