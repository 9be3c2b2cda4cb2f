"""Pure-numpy vectorized kernel evaluations.

This is the fallback backend; the numba backend in ``_kernels_nb`` computes
the same quantities with scalar compiled loops.  Both expose the same four
array functions: ``besselj``, ``h``, ``h_deriv``, ``l``.

Branch layout (t = pi*sigma, x = Bessel argument):
  - hypergeometric series for t <= 4 (no cancellation there),
  - Bessel formula elsewhere, with J_nu computed by ascending series
    (x < 12), an integral representation (12 <= x < 40, integer order),
    upward trigonometric recurrence (half-integer order), or the Hankel
    asymptotic expansion (x >= 40, integer order).
"""

import math

import numpy as np

_PI = math.pi


def _j_series(nu, x):
    # ascending series; reliable for x < 12 (cancellation stays ~1e3 eps)
    out = np.zeros_like(x)
    nz = x > 0.0
    xs = x[nz]
    half = 0.5 * xs
    term = np.exp(nu * np.log(half) - math.lgamma(nu + 1.0))
    acc = term.copy()
    z = -half * half
    for m in range(1, 80):
        term = term * z / (m * (nu + m))
        acc += term
        if np.all(np.abs(term) <= 1e-18 * (np.abs(acc) + 1e-300)):
            break
    out[nz] = acc
    if nu == 0.0:
        out[~nz] = 1.0
    return out


def _j_intrep(n, x):
    # J_n(x) = (1/pi) int_0^pi cos(n*th - x*sin th) dth; the midpoint rule
    # is spectrally accurate here (smooth periodic even extension)
    npts = 240
    th = (np.arange(npts) + 0.5) * (_PI / npts)
    return np.cos(n * th[None, :] - np.outer(x, np.sin(th))).mean(axis=1)


def _j_asym(nu, x):
    # Hankel expansion, x >= 40
    mu4 = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    tk = np.ones_like(x)
    for k in range(1, 19):
        tk = tk * (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        r = k % 4
        if r == 1:
            q = q + tk
        elif r == 2:
            p = p - tk
        elif r == 3:
            q = q - tk
        else:
            p = p + tk
    chi = x - (0.5 * nu + 0.25) * _PI
    return np.sqrt(2.0 / (_PI * x)) * (p * np.cos(chi) - q * np.sin(chi))


def _j_half(nu, x):
    # upward recurrence from the trigonometric J_{-1/2}, J_{1/2};
    # stable because all needed orders satisfy nu < x in this branch
    c = np.sqrt(2.0 / (_PI * x))
    jm = c * np.cos(x)
    jp = c * np.sin(x)
    if nu == -0.5:
        return jm
    n = int(round(nu - 0.5))
    v = 0.5
    for _ in range(n):
        jm, jp = jp, (2.0 * v / x) * jp - jm
        v += 1.0
    return jp


def besselj(nu, x):
    nu = float(nu)
    out = np.empty_like(x)
    lo = x < 12.0
    if lo.any():
        out[lo] = _j_series(nu, x[lo])
    hi = ~lo
    if hi.any():
        if nu == round(nu):
            mid = hi & (x < 40.0)
            if mid.any():
                out[mid] = _j_intrep(int(nu), x[mid])
            top = hi & (x >= 40.0)
            if top.any():
                out[top] = _j_asym(nu, x[top])
        else:
            out[hi] = _j_half(nu, x[hi])
    return out


def _h_series(a, t):
    # H = -sum_{m>=1} z^m / ((a)_m m!) with z = -t^2
    z = -t * t
    term = np.ones_like(t)
    acc = np.zeros_like(t)
    for m in range(1, 120):
        term = term * z / ((a + m - 1.0) * m)
        acc = acc - term
        if np.all(np.abs(term) <= 1e-17 * (np.abs(acc) + 1e-300)):
            break
    return acc


def _f01_series(a, t):
    # 0F1(a; -t^2)
    z = -t * t
    term = np.ones_like(t)
    acc = np.ones_like(t)
    for m in range(1, 120):
        term = term * z / ((a + m - 1.0) * m)
        acc = acc + term
        if np.all(np.abs(term) <= 1e-17 * (np.abs(acc) + 1e-300)):
            break
    return acc


def h(d, sigma):
    if d == 1:
        s = np.sin(_PI * sigma)
        return 2.0 * s * s
    t = _PI * sigma
    out = np.empty_like(t)
    lo = t <= 4.0
    if lo.any():
        out[lo] = _h_series(0.5 * d, t[lo])
    hi = ~lo
    if hi.any():
        tt = t[hi]
        x = 2.0 * tt
        if d == 3:
            out[hi] = 1.0 - np.sin(x) / x
        else:
            pref = math.gamma(0.5 * d) * tt ** (1.0 - 0.5 * d)
            out[hi] = 1.0 - pref * besselj(0.5 * d - 1.0, x)
    return out


def h_deriv(d, sigma):
    if d == 1:
        return 2.0 * _PI * np.sin(2.0 * _PI * sigma)
    t = _PI * sigma
    out = np.empty_like(t)
    lo = t <= 4.0
    if lo.any():
        out[lo] = (4.0 * _PI * _PI / d) * sigma[lo] * _f01_series(1.0 + 0.5 * d, t[lo])
    hi = ~lo
    if hi.any():
        tt = t[hi]
        x = 2.0 * tt
        if d == 3:
            out[hi] = (np.sin(x) / x - np.cos(x)) / sigma[hi]
        else:
            pref = 2.0 * _PI * math.gamma(0.5 * d) * tt ** (1.0 - 0.5 * d)
            out[hi] = pref * besselj(0.5 * d, x)
    return out


def l(d, z):
    t = _PI * z
    out = np.empty_like(t)
    lo = t <= 4.0
    if lo.any():
        # L = sum_{m>=2} 2(m-1) b_m with b_m = (-t^2)^m / ((d/2)_m m!)
        ts = t[lo]
        w = -ts * ts
        a = 0.5 * d
        term = w / a
        acc = np.zeros_like(ts)
        for m in range(2, 120):
            term = term * w / ((a + m - 1.0) * m)
            acc = acc + 2.0 * (m - 1.0) * term
            if np.all(np.abs(term) <= 1e-17 * (np.abs(acc) + 1e-300)):
                break
        out[lo] = acc
    hi = ~lo
    if hi.any():
        zs = z[hi]
        out[hi] = 2.0 * h(d, zs) - zs * h_deriv(d, zs)
    return out
