"""Oscillatory quadrature for WK_d[f](lam) = int_0^inf H_d(lam k) f(k) dk.

Strategy per point:
  (i)  smooth head, sigma = lam k <= 1/2: octave panels with Gauss-Legendre,
       descending toward k = 0 until the quadratic kernel bound
       c+ pi^2 lam^2 int k^2 f makes the rest negligible;
  (ii) oscillatory region: half-period panels (width 1/(2 lam)) in batches,
       each panel GL16 with a GL8 companion for the error estimate;
  (iii) early stop at K once the remaining tail is provably below tolerance,
       using H_d ~ 1: the plain part int_K f is added by accurate quadrature
       and the oscillatory correction is bounded by the large-argument
       expansion of the kernel (van der Corput style bound on monotone
       tails, or the tail-mass bound otherwise).

The log-log slope uses lam WK'(lam) = int (lam k) H_d'(lam k) f(k) dk with
the same machinery and a self-calibrated remainder constant for the slope
kernel's large-argument expansion.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import h_arr, h_deriv_arr
from .errors import DivergenceError, DomainError, ToleranceError
from .kernel import check_dim, kernel_constants
from .profiles import moment

_PI = math.pi
_X16, _W16 = np.polynomial.legendre.leggauss(16)
_X8, _W8 = np.polynomial.legendre.leggauss(8)

_MAX_PANELS = 4_000_000


def _gl_batch(F, edges):
    """GL16 integral and |GL16-GL8| error per cell of an edge partition."""
    edges = np.asarray(edges, dtype=np.float64)
    half = 0.5 * np.diff(edges)
    mid = edges[:-1] + half
    k16 = (mid[:, None] + half[:, None] * _X16).ravel()
    v16 = F(k16).reshape(-1, 16)
    i16 = (v16 @ _W16) * half
    k8 = (mid[:, None] + half[:, None] * _X8).ravel()
    v8 = F(k8).reshape(-1, 8)
    i8 = (v8 @ _W8) * half
    return float(i16.sum()), float(np.abs(i16 - i8).sum())


def _merge_breakpoints(edges, bps):
    inner = [b for b in bps if edges[0] < b < edges[-1]]
    if not inner:
        return edges
    return np.unique(np.concatenate([edges, inner]))


def _check_tol(tol):
    tol = float(tol)
    if not (1e-10 <= tol <= 1e-2):
        raise DomainError(f"tolerance must lie in [1e-10, 1e-2], got {tol}")
    return tol


# -- large-argument amplitude data -------------------------------------------


def _value_amp(d):
    # |H_d(z) - 1| <= amp * z^{-(d-1)/2} for the leading oscillation
    return math.gamma(0.5 * d) * _PI ** (-0.5 * d)


def _slope_amp(d):
    # z H_d'(z) ~ amp * z^{(3-d)/2} cos(2 pi z - (d+1) pi/4)
    return 2.0 * math.gamma(0.5 * d) * _PI ** (1.0 - 0.5 * d)


_slope_rem_cache = {}


def _slope_rem_coef(d):
    """Bound coefficient r_d with |zH_d'(z) - main(z)| <= r_d z^{-(d-1)/2}
    for z >= 1, calibrated numerically with a margin."""
    if d not in _slope_rem_cache:
        z = np.concatenate([np.linspace(1.0, 50.0, 20001),
                            np.linspace(50.0, 400.0, 7001)])
        amp = _slope_amp(d)
        main = amp * z ** (0.5 * (3.0 - d)) * np.cos(
            (2.0 * z - 0.25 * (d + 1.0)) * _PI)
        exact = z * h_deriv_arr(d, z)
        coef = float(np.max(np.abs(exact - main) * z ** (0.5 * (d - 1.0))))
        _slope_rem_cache[d] = 1.5 * coef
    return _slope_rem_cache[d]


def _envelope_decreasing(p, K, expo):
    """Heuristic check that k^expo f(k) is nonincreasing beyond K."""
    lo, hi = p.support
    if K >= hi:
        return True
    top = min(hi, K * 1e6) if math.isfinite(hi) else K * 1e6
    probes = np.geomspace(K, max(top, K * (1 + 1e-9)), 24)
    probes = probes[(probes >= lo) & (probes <= hi)]
    if probes.size == 0:
        return True
    try:
        s = p.slope(probes)
    except Exception:
        return False
    return bool(np.all(s + expo <= 1e-9))


def _slope_bound_beyond(p, K, expo):
    """Local estimate of |expo + k f'/f| just beyond K.  The integration by
    parts error is dominated near K when the envelope decreases, so probing
    one octave suffices (a global sup would explode for exponential tails
    where |f'/f| keeps growing even though the contribution dies off)."""
    lo, hi = p.support
    top = min(hi, K * 16.0) if math.isfinite(hi) else K * 16.0
    probes = np.geomspace(K, max(top, K * (1 + 1e-9)), 24)
    probes = probes[(probes >= lo) & (probes <= hi)]
    if probes.size == 0:
        return 1.0
    s = p.slope(probes)
    return 1.2 * float(np.max(np.abs(s + expo))) + 0.1


def _variation_cells(p, expo, edges):
    """Upper estimate of int |d(k^expo f)| over each cell:
    int (|expo| + |k f'/f|) k^expo f d(log k), GL8 in log coordinates."""
    u = np.log(edges)
    half = 0.5 * np.diff(u)
    mid = u[:-1] + half
    uu = (mid[:, None] + half[:, None] * _X8).ravel()
    k = np.exp(uu)
    f = np.asarray(p.value(k), dtype=np.float64)
    w = np.zeros_like(f)
    pos = f > 0.0
    if pos.any():
        s = np.abs(np.asarray(p.slope(k[pos]), dtype=np.float64)) + abs(expo)
        with np.errstate(over="ignore"):
            w[pos] = s * np.exp(expo * uu[pos] + np.log(f[pos]))
    with np.errstate(over="ignore", invalid="ignore"):
        out = float(np.sum((w.reshape(-1, 8) @ _W8) * half))
    return out if math.isfinite(out) else math.inf


def _variation_struct(p, expo):
    """Suffix-cumulated total variation of k^expo f on a cached log grid."""
    cache = getattr(p, "_var_cache", None)
    if cache is None:
        cache = p._var_cache = {}
    if expo in cache:
        return cache[expo]
    lo, hi = p.support
    anchor = max(p.scale_hint, lo if lo > 0 else p.scale_hint * 1e-6, 1e-30)
    hi_eff = hi
    diverges = False
    if math.isinf(hi):
        k = anchor
        total = 0.0
        small = 0
        for _ in range(400):
            c = _variation_cells(p, expo, np.array([k, 2.0 * k]))
            total += c
            if c <= 1e-16 * max(total, 1e-300):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            k *= 2.0
        else:
            diverges = True
        hi_eff = 2.0 * k
    lo_eff = lo
    head_done = True
    if lo <= 0.0:
        k = anchor
        total = 0.0
        small = 0
        for _ in range(400):
            c = _variation_cells(p, expo, np.array([0.5 * k, k]))
            total += c
            if c <= 1e-16 * max(total, 1e-300):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            k *= 0.5
        else:
            head_done = False
        lo_eff = 0.5 * k
    n = min(20000, max(8, int(math.ceil(16 * math.log10(hi_eff / lo_eff)))))
    edges = np.geomspace(lo_eff, hi_eff, n + 1)
    bps = [b for b in p.breakpoints if lo_eff < b < hi_eff]
    if bps:
        edges = np.unique(np.concatenate([edges, bps]))
    cells = np.array([_variation_cells(p, expo, edges[i:i + 2])
                      for i in range(len(edges) - 1)])
    st = {
        "edges": edges,
        "cum_tail": np.concatenate([np.cumsum(cells[::-1])[::-1], [0.0]]),
        "diverges": diverges,
        "head_done": head_done,
    }
    cache[expo] = st
    return st


def _variation_tail(p, expo, K):
    """Upper estimate of the total variation of k^expo f(k) over [K, hi];
    inf when it does not converge."""
    st = _variation_struct(p, expo)
    if st["diverges"]:
        return math.inf
    edges = st["edges"]
    if K >= edges[-1]:
        return 0.0
    if K <= edges[0]:
        if not st["head_done"]:
            return math.inf
        return float(st["cum_tail"][0])
    i = int(np.searchsorted(edges, K) - 1)
    out = float(st["cum_tail"][i + 1])
    if K < edges[i + 1]:
        out += _variation_cells(p, expo, np.array([K, edges[i + 1]]))
    return out


def _tv_bound(p, lam, K, amp, expo):
    """Integration-by-parts bound on |int_K^hi amp (lam k)^expo
    cos((2 lam k + phi) pi) f dk| via the total variation of the envelope;
    valid without monotonicity.  For a decreasing envelope the variation
    telescopes and this reduces to the second-mean-value bound."""
    var = _variation_tail(p, expo, K)
    if not math.isfinite(var):
        return math.inf
    g0 = K**expo * float(p.value(K))
    return amp * lam**expo * (g0 + var) / (_PI * lam)


def _ibp_tail(d, p, lam, K, sign, amp, expo, phi0):
    """Tail of int_K^hi kern(lam k) f dk for an oscillatory kernel
    kern(z) ~ sign * amp * z^expo * cos((2 z + phi0) pi); one integration by
    parts of the main term yields a computable boundary correction plus an
    O(1/lam^2) error estimate.  Returns (bound, correction), or None when
    the monotonicity preconditions fail.
    """
    z0 = lam * K
    if z0 < 1.0 or K < p.monotone_from:
        return None
    if not _envelope_decreasing(p, K, expo):
        return None
    lo, hi = p.support
    fenv = p.tail_sup(K)
    fk = float(p.value(K))
    bterm = -(lam * K) ** expo * fk * math.sin((2.0 * lam * K + phi0) * _PI)
    if math.isfinite(hi):
        fb = float(p.value(hi))
        bterm += (lam * hi) ** expo * fb * math.sin((2.0 * lam * hi + phi0) * _PI)
    corr = sign * amp * bterm / (2.0 * _PI * lam)
    smax = _slope_bound_beyond(p, K, expo)
    err = 2.0 * amp * z0**expo * fenv * smax / (2.0 * _PI**2 * lam**2 * K)
    return err, corr


def _value_tail_bound(d, p, lam, K):
    """Bound and boundary correction for int_K^hi (H_d(lam k) - 1) f dk."""
    tail0 = p.tail_mass(0, K)
    if tail0 <= 0.0:
        return 0.0, 0.0
    const = kernel_constants(d)
    z0 = lam * K
    bound = math.inf
    if d >= 2:
        amp = (2.0 if d >= 4 else 1.0) * _value_amp(d)
        ok = True
        if d >= 4:
            ok = z0 >= const.c_zero * _PI ** (0.5 * d) / math.gamma(0.5 * d)
        if ok and z0 > 0:
            bound = amp * z0 ** (-0.5 * (d - 1.0)) * tail0
    else:
        bound = tail0
    corr = 0.0
    expo = -0.5 * (d - 1.0)
    if z0 >= 1.0:
        # variation-based integration by parts; no monotonicity needed
        tv = (_tv_bound(p, lam, K, _value_amp(d), expo)
              + const.c_zero * z0 ** (-0.5 * (d + 1.0)) * tail0)
        if tv < bound:
            bound = tv
    if z0 >= 1.0 and K >= p.monotone_from:
        fenv = p.tail_sup(K)
        rem = const.c_zero * z0 ** (-0.5 * (d + 1.0)) * tail0
        if _envelope_decreasing(p, K, expo):
            # the expansion remainder is itself oscillatory one order down
            rem = min(rem, 2.0 * const.c_zero * z0 ** (expo - 1.0)
                      * fenv / (_PI * lam))
        vdc = _value_amp(d) * z0**expo * fenv / (_PI * lam) + rem
        if vdc < bound:
            bound = vdc
        got = _ibp_tail(d, p, lam, K, -1.0, _value_amp(d), expo,
                        -0.25 * (d - 1.0))
        if got is not None and got[0] + rem < bound:
            bound = got[0] + rem
            corr = got[1]
    return bound, corr


def _slope_tail_bound(d, p, lam, K):
    """Bound and boundary correction for int_K^hi (lam k) H_d'(lam k) f dk."""
    tail0 = p.tail_mass(0, K)
    if tail0 <= 0.0:
        return 0.0, 0.0
    z0 = lam * K
    bound = math.inf
    if d >= 3:
        bound = 2.0 * kernel_constants(d).c_plus * tail0
    corr = 0.0
    expo = 0.5 * (3.0 - d)
    return _osc_bound_common(d, p, lam, K, tail0, bound,
                             _slope_amp(d), expo, 1.0, -0.25 * (d + 1.0),
                             _slope_rem_coef(d))


def _sin_tail_bound(p, lam, K):
    """Bound and correction for int_K^hi sin(2 pi lam k) f dk."""
    tail0 = p.tail_mass(0, K)
    if tail0 <= 0.0:
        return 0.0, 0.0
    # sin(2 pi z) = cos((2z - 1/2) pi), amplitude 1, no expansion remainder
    return _osc_bound_common(None, p, lam, K, tail0, tail0,
                             1.0, 0.0, 1.0, -0.5, 0.0)


def _osc_bound_common(d, p, lam, K, tail0, bound, amp, expo, sign, phi0,
                      rem_coef):
    """Shared tail logic for a kernel ~ sign * amp * z^expo cos((2z+phi0) pi)
    with an expansion remainder bounded by rem_coef * z^{expo-1}."""
    z0 = lam * K
    corr = 0.0
    if expo > 0.0 and z0 >= 1.0:
        # plain envelope bound |kern| <~ amp z^expo; needs the k^expo moment,
        # which only converges for steep (e.g. exponentially cut) tails
        try:
            tail_expo = p.tail_mass(expo, K)
        except DivergenceError:
            tail_expo = math.inf
        bound = min(bound, 1.1 * amp * lam**expo * tail_expo)
    if z0 >= 1.0 and expo <= 1.0:
        # variation-based integration by parts; no monotonicity needed
        tv = _tv_bound(p, lam, K, amp, expo)
        if rem_coef > 0.0:
            tv += rem_coef * z0 ** (expo - 1.0) * tail0
        if tv < bound:
            bound = tv
    if z0 >= 1.0 and K >= p.monotone_from and _envelope_decreasing(p, K, expo):
        fenv = p.tail_sup(K)
        rem = min(rem_coef * z0 ** (expo - 1.0) * tail0,
                  2.0 * rem_coef * z0 ** (expo - 1.0) * fenv / (_PI * lam)) \
            if rem_coef > 0.0 else 0.0
        vdc = amp * z0**expo * fenv / (_PI * lam) + rem
        if vdc < bound:
            bound = vdc
        got = _ibp_tail(d, p, lam, K, sign, amp, expo, phi0)
        if got is not None and got[0] + rem < bound:
            bound = got[0] + rem
            corr = got[1]
    return bound, corr


# -- the quadrature driver -----------------------------------------------------


def _head_coef(d):
    const = kernel_constants(d)
    if d == 1:
        return 2.0 * _PI**2  # H_1 <= 2 pi^2 sigma^2 and |zH_1'| <= 4 pi^2 z^2
    coef = const.c_plus * _PI**2
    return coef


def _integrate(d, p, lam, tol, kernel, scale=0.0):
    """Shared driver; kernel is 'value' or 'slope'.

    scale sets the absolute error target tol * max(|acc|, scale); the slope
    numerator passes the transform value so that its stopping rule matches
    the final relative accuracy of the slope.
    """
    lo, hi = p.support
    if kernel == "value":
        def F(k):
            return h_arr(d, lam * k) * p.value(k)

        tail_bound = _value_tail_bound
        head_scale = 1.0
    elif kernel == "slope":
        def F(k):
            z = lam * k
            return z * h_deriv_arr(d, z) * p.value(k)

        tail_bound = _slope_tail_bound
        head_scale = 3.5 if d == 2 else 2.0
    else:  # plain sine transform, used by the threshold amendments
        def F(k):
            return np.sin(2.0 * _PI * lam * k) * p.value(k)

        def tail_bound(_d, pp, la, K):
            return _sin_tail_bound(pp, la, K)

        head_scale = 1.0

    acc = 0.0
    err = 0.0
    kc = 0.5 / lam
    head_top = min(hi, kc)
    n_panels = 0

    # (i) smooth head
    if head_top > lo and head_top > 0.0:
        if lo > 0.0:
            n = max(1, int(math.ceil(2.0 * math.log2(head_top / lo))))
            edges = np.geomspace(lo, head_top, min(n, 4000) + 1)
            i, e = _gl_batch(F, _merge_breakpoints(edges, p.breakpoints))
            acc += i
            err += e
        else:
            top = head_top
            for _ in range(500):
                a = 0.5 * top
                i, e = _gl_batch(F, _merge_breakpoints(np.array([a, top]),
                                                       p.breakpoints))
                acc += i
                err += e
                top = a
                if kernel == "sin":
                    head_rest = 2.0 * _PI * lam * p.head_mass(1, a)
                else:
                    head_rest = (head_scale * _head_coef(d) * lam**2
                                 * p.head_mass(2, a))
                if head_rest < 0.25 * tol * max(abs(acc), scale, 1e-300) \
                        or head_rest < 1e-305:
                    err += head_rest
                    break
            else:
                raise ToleranceError("head refinement stalled")

    # (ii)/(iii) oscillatory region with early stop
    complete = head_top >= hi
    if not complete:
        dk = 0.5 / lam
        K = head_top
        batch = 64
        while True:
            n = batch
            if math.isfinite(hi):
                n = min(n, max(1, int(math.ceil((hi - K) / dk))))
            edges = K + dk * np.arange(n + 1)
            if math.isfinite(hi) and edges[-1] >= hi:
                edges = edges[edges < hi]
                edges = np.append(edges, hi)
                complete = True
            i, e = _gl_batch(F, _merge_breakpoints(edges, p.breakpoints))
            acc += i
            err += e
            K = float(edges[-1])
            n_panels += n
            if complete:
                break
            rem, corr = tail_bound(d, p, lam, K)
            if rem < 0.5 * tol * max(abs(acc), scale, 1e-300):
                acc += corr
                if kernel == "value":
                    acc += moment(p, 0, K, hi)
                err += rem
                break
            if n_panels > _MAX_PANELS:
                raise ToleranceError(
                    f"oscillatory tail did not converge within {_MAX_PANELS} panels "
                    f"(lam={lam}, K={K}, remaining bound {rem:.3e})")
            batch = min(2 * batch, 8192)

    return acc, err


def wk_point(d, p, lam, tol=1e-7):
    """WK_d[f](lam) with an absolute error estimate err <= tol * value."""
    d = check_dim(d)
    lam = float(lam)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise DomainError(f"lambda must be positive, got {lam}")
    tol = _check_tol(tol)
    p.transform_ready(d)
    cache = getattr(p, "_wk_cache", None)
    if cache is None:
        cache = p._wk_cache = {}
    key = ("v", d, lam, tol)
    if key not in cache:
        if len(cache) > 4096:
            cache.clear()
        cache[key] = _integrate(d, p, lam, tol, "value")
    return cache[key]


def wk_slope(d, p, lam, tol=1e-7):
    """Log-log slope lam WK'(lam)/WK(lam)."""
    d = check_dim(d)
    lam = float(lam)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise DomainError(f"lambda must be positive, got {lam}")
    tol = _check_tol(tol)
    value, _ = wk_point(d, p, lam, tol)
    cache = p._wk_cache
    key = ("s", d, lam, tol)
    if key not in cache:
        if len(cache) > 4096:
            cache.clear()
        cache[key] = _integrate(d, p, lam, tol, "slope", scale=abs(value))
    num, _ = cache[key]
    return num / value


def hankel_side(d, p, lam, tol=1e-7):
    """int f - WK_d[f](lam); tends to 0 as lam -> inf, to int f as lam -> 0."""
    total = moment(p, 0, 0.0, math.inf)
    value, _ = wk_point(d, p, lam, tol)
    return total - value


@dataclass
class TransformCurve:
    d: int
    lambda_grid: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    err_est: np.ndarray
    tol: float
    label: str = ""
    meta: dict = field(default_factory=dict)


def wk_curve(d, p, lambda_min, lambda_max, points_per_decade=24, tol=1e-7):
    """Sampled transform on a log grid with values, slopes and error estimates."""
    d = check_dim(d)
    lambda_min = float(lambda_min)
    lambda_max = float(lambda_max)
    if not (0.0 < lambda_min < lambda_max):
        raise DomainError("need 0 < lambda_min < lambda_max")
    if points_per_decade < 4:
        raise DomainError("points_per_decade must be >= 4")
    tol = _check_tol(tol)
    n = max(2, int(math.ceil(points_per_decade
                             * math.log10(lambda_max / lambda_min))) + 1)
    grid = np.geomspace(lambda_min, lambda_max, n)
    values = np.empty(n)
    errs = np.empty(n)
    slopes = np.empty(n)
    for i, lam in enumerate(grid):
        values[i], errs[i] = wk_point(d, p, float(lam), tol)
        slopes[i] = wk_slope(d, p, float(lam), tol)
    return TransformCurve(d=d, lambda_grid=grid, values=values, slopes=slopes,
                          err_est=errs, tol=tol, label=getattr(p, "label", ""))


def oscillation_probe(p, lam, kind, tol=1e-6, scale=None, with_err=False):
    """Oscillatory side integrals used by the flat-threshold amendments.

    kind 'cos'  : int cos(2 pi lam k) f dk  (= int f - WK_1[f](lam))
    kind 'sin'  : int sin(2 pi lam k) f dk
    kind 'exp'  : |int e^{2 i pi lam k} f dk|
    kind 'zj1'  : int (lam k) J_1(2 pi lam k) f dk  (= slope kernel of d=2
                  divided by 2 pi)

    The stop rule is absolute with floor `scale` (default int f): the probe
    only has to be accurate to tol * scale, not relative to the tiny partial
    sums.  with_err=True returns (value, error_estimate) so callers that
    compare the probe against a threshold can do so conservatively.
    """
    lam = float(lam)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise DomainError(f"lambda must be positive, got {lam}")
    tol = _check_tol(tol)
    total = p.tail_mass(0, 0.0)
    if scale is None:
        scale = total
    if kind == "cos":
        value, err = _integrate(1, p, lam, tol, "value", scale=scale)
        out = (total - value, err)
    elif kind == "sin":
        out = _integrate(1, p, lam, tol, "sin", scale=scale)
    elif kind == "exp":
        c, ec = oscillation_probe(p, lam, "cos", tol, scale, with_err=True)
        s, es = oscillation_probe(p, lam, "sin", tol, scale, with_err=True)
        out = (math.hypot(c, s), ec + es)
    elif kind == "zj1":
        val, err = _integrate(2, p, lam, tol, "slope", scale=scale)
        out = (val / (2.0 * _PI), err / (2.0 * _PI))
    else:
        raise DomainError(f"unknown oscillation kind {kind!r}")
    return out if with_err else out[0]
