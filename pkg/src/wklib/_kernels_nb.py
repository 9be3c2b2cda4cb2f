"""Numba-compiled kernel evaluations (scalar hot loops).

Same branch layout and array API as ``_kernels_np``; see that module for
the numerical rationale.  Importing this module requires numba.
"""

import math

import numpy as np
from numba import njit

_PI = math.pi


@njit(cache=True)
def _j_series(nu, x):
    if x <= 0.0:
        return 1.0 if nu == 0.0 else 0.0
    half = 0.5 * x
    term = math.exp(nu * math.log(half) - math.lgamma(nu + 1.0))
    acc = term
    z = -half * half
    for m in range(1, 80):
        term = term * z / (m * (nu + m))
        acc += term
        if abs(term) <= 1e-18 * (abs(acc) + 1e-300):
            break
    return acc


@njit(cache=True)
def _j_intrep(n, x):
    npts = 240
    hstep = _PI / npts
    s = 0.0
    for i in range(npts):
        th = (i + 0.5) * hstep
        s += math.cos(n * th - x * math.sin(th))
    return s / npts


@njit(cache=True)
def _j_asym(nu, x):
    mu4 = 4.0 * nu * nu
    p = 1.0
    q = 0.0
    tk = 1.0
    for k in range(1, 19):
        tk = tk * (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        r = k % 4
        if r == 1:
            q += tk
        elif r == 2:
            p -= tk
        elif r == 3:
            q -= tk
        else:
            p += tk
    chi = x - (0.5 * nu + 0.25) * _PI
    return math.sqrt(2.0 / (_PI * x)) * (p * math.cos(chi) - q * math.sin(chi))


@njit(cache=True)
def _j_half(nu, x):
    c = math.sqrt(2.0 / (_PI * x))
    jm = c * math.cos(x)
    jp = c * math.sin(x)
    if nu == -0.5:
        return jm
    n = int(round(nu - 0.5))
    v = 0.5
    for _ in range(n):
        jn = (2.0 * v / x) * jp - jm
        jm = jp
        jp = jn
        v += 1.0
    return jp


@njit(cache=True)
def _besselj_scalar(nu, x):
    if x < 12.0:
        return _j_series(nu, x)
    if nu == math.floor(nu):
        if x < 40.0:
            return _j_intrep(int(nu), x)
        return _j_asym(nu, x)
    return _j_half(nu, x)


@njit(cache=True)
def _h_series(a, t):
    z = -t * t
    term = 1.0
    acc = 0.0
    for m in range(1, 120):
        term = term * z / ((a + m - 1.0) * m)
        acc -= term
        if abs(term) <= 1e-17 * (abs(acc) + 1e-300):
            break
    return acc


@njit(cache=True)
def _f01_series(a, t):
    z = -t * t
    term = 1.0
    acc = 1.0
    for m in range(1, 120):
        term = term * z / ((a + m - 1.0) * m)
        acc += term
        if abs(term) <= 1e-17 * (abs(acc) + 1e-300):
            break
    return acc


@njit(cache=True)
def _h_scalar(d, sigma):
    if d == 1:
        s = math.sin(_PI * sigma)
        return 2.0 * s * s
    t = _PI * sigma
    if t <= 4.0:
        return _h_series(0.5 * d, t)
    x = 2.0 * t
    if d == 3:
        return 1.0 - math.sin(x) / x
    pref = math.exp(math.lgamma(0.5 * d) + (1.0 - 0.5 * d) * math.log(t))
    return 1.0 - pref * _besselj_scalar(0.5 * d - 1.0, x)


@njit(cache=True)
def _h_deriv_scalar(d, sigma):
    if d == 1:
        return 2.0 * _PI * math.sin(2.0 * _PI * sigma)
    t = _PI * sigma
    if t <= 4.0:
        return (4.0 * _PI * _PI / d) * sigma * _f01_series(1.0 + 0.5 * d, t)
    x = 2.0 * t
    if d == 3:
        return (math.sin(x) / x - math.cos(x)) / sigma
    pref = 2.0 * _PI * math.exp(math.lgamma(0.5 * d) + (1.0 - 0.5 * d) * math.log(t))
    return pref * _besselj_scalar(0.5 * d, x)


@njit(cache=True)
def _l_scalar(d, z):
    t = _PI * z
    if t <= 4.0:
        w = -t * t
        a = 0.5 * d
        term = w / a
        acc = 0.0
        for m in range(2, 120):
            term = term * w / ((a + m - 1.0) * m)
            acc += 2.0 * (m - 1.0) * term
            if abs(term) <= 1e-17 * (abs(acc) + 1e-300):
                break
        return acc
    return 2.0 * _h_scalar(d, z) - z * _h_deriv_scalar(d, z)


@njit(cache=True)
def besselj(nu, x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _besselj_scalar(nu, x[i])
    return out


@njit(cache=True)
def h(d, sigma):
    out = np.empty(sigma.size)
    for i in range(sigma.size):
        out[i] = _h_scalar(d, sigma[i])
    return out


@njit(cache=True)
def h_deriv(d, sigma):
    out = np.empty(sigma.size)
    for i in range(sigma.size):
        out[i] = _h_deriv_scalar(d, sigma[i])
    return out


@njit(cache=True)
def l(d, z):
    out = np.empty(z.size)
    for i in range(z.size):
        out[i] = _l_scalar(d, z[i])
    return out
