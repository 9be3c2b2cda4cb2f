"""Positive spectra on (0, inf).

A Profile bundles a positive function f with its log-log slope k f'/f,
support and breakpoint metadata, and cached cumulative masses used by the
oscillatory quadrature to decide where tails become negligible.  Analytic
families mirror the usual toy spectra (truncated power laws, two/three/multi
regime shapes, a fluctuating ODE solution) and sampled data is interpolated
log-log linearly, which is exact on power laws.
"""

import csv
import io
import math

import numpy as np
from scipy.integrate import cumulative_trapezoid, quad
from scipy.interpolate import PchipInterpolator

from .errors import DivergenceError, DomainError, FormatError

_LN10 = math.log(10.0)


def _as_float_array(k):
    return np.asarray(k, dtype=np.float64)


class Profile:
    """Base class; subclasses implement _value_in and _slope_in on the support."""

    kind = "analytic-family"
    label = "profile"
    has_derivative = True

    def __init__(self, support=(0.0, math.inf), breakpoints=(), scale_hint=1.0,
                 monotone_from=None):
        self.support = (float(support[0]), float(support[1]))
        self.breakpoints = tuple(sorted(float(b) for b in breakpoints))
        self.scale_hint = float(scale_hint)
        if monotone_from is None:
            monotone_from = self.support[1]
        self.monotone_from = float(monotone_from)
        self._mass_cache = {}

    # -- evaluation -------------------------------------------------------

    def _value_in(self, k):
        raise NotImplementedError

    def _slope_in(self, k):
        raise NotImplementedError

    def value(self, k):
        arr = _as_float_array(k)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        out = np.zeros_like(arr)
        lo, hi = self.support
        inside = (arr >= lo) & (arr <= hi) & (arr > 0.0)
        if inside.any():
            out[inside] = self._value_in(arr[inside])
        return float(out[0]) if scalar else out

    def slope(self, k):
        arr = _as_float_array(k)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        lo, hi = self.support
        if np.any((arr < lo) | (arr > hi) | (arr <= 0.0)):
            raise DomainError("slope queried outside the profile support")
        out = self._slope_in(arr)
        return float(out[0]) if scalar else np.asarray(out, dtype=np.float64)

    def derivative(self, k):
        arr = _as_float_array(k)
        return self.slope(arr) * self.value(arr) / arr

    def tail_sup(self, k):
        """An upper bound for sup of f over [k, support end]."""
        lo, hi = self.support
        k = max(float(k), lo)
        if k >= hi:
            return 0.0
        if k >= self.monotone_from:
            return float(self.value(k))
        top = min(self.monotone_from, hi)
        grid = np.geomspace(max(k, 1e-300), max(top, k * (1 + 1e-12)), 129)
        grid = np.concatenate([grid, [b for b in self.breakpoints if k <= b <= top]])
        vals = self.value(grid)
        cap = float(self.value(top)) if top < hi else 0.0
        return 1.001 * max(float(vals.max()), cap)

    # -- cumulative masses --------------------------------------------------

    def _mass_struct(self, order):
        if order not in self._mass_cache:
            self._mass_cache[order] = _build_mass_struct(self, order)
        return self._mass_cache[order]

    def tail_mass(self, order, k):
        """Fast (interpolated) estimate of int_k^hi s^order f(s) ds."""
        st = self._mass_struct(order)
        if st["tail_diverges"]:
            raise DivergenceError(
                f"tail of k^{order} f is not integrable for {self.label}")
        return _query_cum(st, float(k), tail=True)

    def head_mass(self, order, k):
        """Fast (interpolated) estimate of int_lo^k s^order f(s) ds."""
        st = self._mass_struct(order)
        if st["head_diverges"]:
            raise DivergenceError(
                f"head of k^{order} f is not integrable for {self.label}")
        return _query_cum(st, float(k), tail=False)

    def transform_ready(self, d):
        """Raise DivergenceError unless WK_d[f] converges (tail of f and
        head of k^2 f integrable)."""
        self.tail_mass(0, self.scale_hint)
        self.head_mass(2, self.scale_hint)

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


# -- cumulative mass construction -------------------------------------------

_GL8_X, _GL8_W = np.polynomial.legendre.leggauss(8)


def _cells_integrate(p, order, edges):
    """Integral of k^order f over each cell, GL8 in log coordinates."""
    u = np.log(edges)
    half = 0.5 * np.diff(u)
    mid = u[:-1] + half
    uu = (mid[:, None] + half[:, None] * _GL8_X).ravel()
    k = np.exp(uu)
    t = np.asarray(p.value(k), dtype=np.float64)
    # evaluate k^{order+1} f in log space; k^{order+1} alone can overflow
    with np.errstate(divide="ignore", over="ignore"):
        vals = np.where(t > 0.0,
                        np.exp((order + 1) * uu + np.log(np.maximum(t, 1e-320))),
                        0.0).reshape(-1, 8)
    return (vals @ _GL8_W) * half


def _build_mass_struct(p, order):
    lo, hi = p.support
    anchor = min(max(p.scale_hint, lo if lo > 0 else p.scale_hint * 1e-6), 1e300)
    per_dec = 16

    # expand upward until the tail is exhausted or clearly divergent
    hi_eff = hi
    tail_div = False
    if math.isinf(hi):
        k = max(anchor, 1.0e-30)
        cells = []
        prev = None
        small = 0
        flatrun = 0
        total = 0.0
        for _ in range(400):
            c = float(_cells_integrate(p, order, np.array([k, 2.0 * k])).sum())
            cells.append(c)
            total += c
            if prev is not None and prev > 0 and c >= 0.995 * prev:
                small = -1  # not decaying
                flatrun += 1
                # a long run of non-decaying octave masses means the tail
                # integral grows without bound even if f later underflows
                if flatrun >= 50:
                    tail_div = True
                    break
            elif c > 1e-17 * max(total, 1e-300):
                flatrun = 0
            if c <= 1e-17 * max(total, 1e-300):
                small += 1
                if small >= 3:
                    break
            prev = c
            k *= 2.0
        else:
            tail_div = True
        if small == -1 or (len(cells) > 60 and cells[-1] > 0.5 * cells[60]):
            tail_div = True
        hi_eff = k * 2.0

    lo_eff = lo
    head_div = False
    if lo <= 0.0:
        k = anchor
        total = 0.0
        small = 0
        for _ in range(400):
            c = float(_cells_integrate(p, order, np.array([0.5 * k, k])).sum())
            total += c
            if c <= 1e-17 * max(total, 1e-300):
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            k *= 0.5
        else:
            head_div = True
        # divergent heads have non-decaying cell masses; probe two octaves
        c1 = float(_cells_integrate(p, order, np.array([0.5 * k, k])).sum())
        c2 = float(_cells_integrate(p, order, np.array([0.25 * k, 0.5 * k])).sum())
        if c1 > 0 and c2 >= 0.995 * c1:
            head_div = True
        lo_eff = 0.5 * k

    n = max(8, int(math.ceil(per_dec * math.log10(hi_eff / lo_eff))))
    n = min(n, 20000)
    edges = np.geomspace(lo_eff, hi_eff, n + 1)
    bps = [b for b in p.breakpoints if lo_eff < b < hi_eff]
    if bps:
        edges = np.unique(np.concatenate([edges, bps]))
    cell = _cells_integrate(p, order, edges)
    cum_head = np.concatenate([[0.0], np.cumsum(cell)])
    # separate suffix sums: total - cum_head would cancel catastrophically
    # when a divergent head dominates the total
    cum_tail = np.concatenate([np.cumsum(cell[::-1])[::-1], [0.0]])
    total = cum_head[-1]
    return {
        "profile": p,
        "order": order,
        "edges": edges,
        "cum_head": cum_head,
        "cum_tail": cum_tail,
        "total": total,
        "head_diverges": head_div,
        "tail_diverges": tail_div,
        "lo_eff": lo_eff,
        "hi_eff": hi_eff,
    }


def _tail_beyond_grid(st, k):
    """Tail mass queried past the cached grid: integrate fresh doubling
    cells from k until they stop contributing."""
    p = st["profile"]
    hi = p.support[1]
    if k >= hi:
        return 0.0
    if math.isfinite(hi):
        edges = np.geomspace(k, hi, 65)
        return float(_cells_integrate(p, st["order"], edges).sum())
    total = 0.0
    cur = k
    small = 0
    for _ in range(400):
        c = float(_cells_integrate(p, st["order"],
                                   np.array([cur, 2.0 * cur])).sum())
        total += c
        if c <= 1e-17 * max(total, 1e-300):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        cur *= 2.0
    return total


def _query_cum(st, k, tail):
    edges = st["edges"]
    if tail:
        if k >= edges[-1]:
            return _tail_beyond_grid(st, k)
        if "tail_rest" not in st:
            # remainder past the cached grid; negligible for the total but
            # not for queries near the top edge
            st["tail_rest"] = _tail_beyond_grid(st, float(edges[-1]))
        if k <= edges[0]:
            return float(st["cum_tail"][0]) + st["tail_rest"]
        i = int(np.searchsorted(edges, k) - 1)
        out = float(st["cum_tail"][i + 1]) + st["tail_rest"]
        if k < edges[i + 1]:
            part = _cells_integrate(st["profile"], st["order"],
                                    np.array([k, edges[i + 1]]))
            out += float(part.sum())
        return out
    if k <= edges[0]:
        return 0.0
    if k >= edges[-1]:
        return float(st["total"])
    i = int(np.searchsorted(edges, k) - 1)
    out = float(st["cum_head"][i])
    if k > edges[i]:
        part = _cells_integrate(st["profile"], st["order"],
                                np.array([edges[i], k]))
        out += float(part.sum())
    return out


# -- accurate moments ---------------------------------------------------------


def _quad_piece(fn, a, b, pts):
    inner = sorted(x for x in pts if a < x < b)
    val, _ = quad(fn, a, b, points=inner or None, limit=400, epsabs=0.0,
                  epsrel=1e-12, full_output=False)
    return val


def moment(p, order, a=0.0, b=math.inf, _allow_any_order=False):
    """Adaptive quadrature of k^order f(k) over (a, b) with b possibly inf."""
    if not _allow_any_order and order not in (0, 2, 4):
        raise DomainError(f"moment order must be 0, 2 or 4, got {order}")
    a = float(a)
    b = float(b)
    if not a < b:
        raise DomainError("moment needs a < b")
    lo, hi = p.support
    a = max(a, lo)
    b = min(b, hi)
    if a >= b:
        return 0.0

    def fn(k):
        return k**order * p.value(k)

    pts = p.breakpoints
    anchor = min(max(p.scale_hint, a * 2 if a > 0 else p.scale_hint), b)
    total = 0.0
    # downward cells toward a (handles the k -> 0 endpoint)
    if a < anchor:
        k1 = anchor
        prev = None
        for j in range(600):
            k0 = max(a, 0.5 * k1)
            c = _quad_piece(fn, k0, k1, pts)
            total += c
            if k0 == a:
                break
            if abs(c) <= 1e-14 * max(abs(total), 1e-300):
                prev = prev + 1 if prev else 1
                if prev >= 3:
                    break
            else:
                prev = 0
            if j > 80 and c > 0 and abs(total) > 0 and c >= 0.9 * abs(total) / (j + 1):
                raise DivergenceError(
                    f"moment of order {order} diverges at the origin for {p.label}")
            k1 = k0
    # upward cells toward b
    if b > anchor:
        k0 = anchor
        hist = []
        flat = 0
        for j in range(600):
            k1 = min(b, 2.0 * k0)
            c = _quad_piece(fn, k0, k1, pts)
            total += c
            hist.append(c)
            if k1 == b:
                break
            if abs(c) <= 1e-14 * max(abs(total), 1e-300):
                flat += 1
                if flat >= 3:
                    break
            else:
                flat = 0
            if len(hist) >= 2 and hist[-2] > 0 and hist[-1] >= 0.9 * hist[-2]:
                if len(hist) >= 40:
                    raise DivergenceError(
                        f"moment of order {order} diverges at infinity for {p.label}")
            k0 = k1
        else:
            raise DivergenceError(
                f"moment of order {order} fails to stabilize for {p.label}")
    return total


# -- analytic families --------------------------------------------------------


class TruncatedPower(Profile):
    """f(k) = k^{-alpha} on [k1, k2], zero elsewhere."""

    label = "truncated"

    def __init__(self, alpha, k1, k2):
        k1 = float(k1)
        k2 = float(k2)
        if not (0.0 < k1 < k2):
            raise DomainError("need 0 < k1 < k2")
        self.alpha = float(alpha)
        self.k1 = k1
        self.k2 = k2
        mono = k1 if self.alpha >= 0.0 else k2
        super().__init__(support=(k1, k2), breakpoints=(k1, k2),
                         scale_hint=math.sqrt(k1 * k2), monotone_from=mono)
        self.label = f"truncated:{alpha},{k1},{k2}"

    def _value_in(self, k):
        return k ** (-self.alpha)

    def _slope_in(self, k):
        return np.full_like(k, -self.alpha)


class TwoRegime(Profile):
    """f(k) = k^alpha / (k0^{alpha+beta} + k^{alpha+beta})."""

    label = "two-regime"

    def __init__(self, alpha, beta, k0):
        alpha = float(alpha)
        beta = float(beta)
        k0 = float(k0)
        if alpha <= -1.0:
            raise DomainError("need alpha > -1")
        if beta < 3.0:
            raise DomainError("need beta >= 3")
        if k0 <= 0.0:
            raise DomainError("need k0 > 0")
        self.alpha = alpha
        self.beta = beta
        self.k0 = k0
        if alpha > 0.0:
            peak = k0 * (alpha / beta) ** (1.0 / (alpha + beta))
        else:
            peak = 0.0  # nonincreasing everywhere
        super().__init__(support=(0.0, math.inf), scale_hint=k0,
                         monotone_from=max(peak, 1e-300))
        self.label = f"two-regime:{alpha},{beta},{k0}"

    def _value_in(self, k):
        # log-space form: k^g overflows for k beyond ~1e300/g
        g = self.alpha + self.beta
        lk = np.log(k)
        return np.exp(self.alpha * lk
                      - np.logaddexp(g * math.log(self.k0), g * lk))

    def _slope_in(self, k):
        g = self.alpha + self.beta
        u = (k / self.k0) ** g
        return self.alpha - g * u / (1.0 + u)


class ThreeRegime(Profile):
    """f(k) = k^2 exp(-1e-4 k) / ((1 + k^3) ln^2(2 + k))."""

    label = "three-regime"

    def __init__(self):
        super().__init__(support=(0.0, math.inf), scale_hint=1.0,
                         monotone_from=1.0)

    def _value_in(self, k):
        return k**2 * np.exp(-1e-4 * k) / ((1.0 + k**3) * np.log(2.0 + k) ** 2)

    def _slope_in(self, k):
        return (2.0 - 1e-4 * k - 3.0 * k**3 / (1.0 + k**3)
                - 2.0 * k / ((2.0 + k) * np.log(2.0 + k)))


class MultiRegime(Profile):
    """Two glued power laws: k^{-alpha} on [k1, k2), k2^{beta-alpha} k^{-beta}
    on [k2, k3]."""

    label = "multi-regime"

    def __init__(self, alpha, beta, k1, k2, k3):
        k1, k2, k3 = float(k1), float(k2), float(k3)
        if not (0.0 < k1 < k2 < k3):
            raise DomainError("need 0 < k1 < k2 < k3")
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.k1 = k1
        self.k2 = k2
        self.k3 = k3
        mono = k1 if (self.alpha >= 0 and self.beta >= 0) else k3
        super().__init__(support=(k1, k3), breakpoints=(k1, k2, k3),
                         scale_hint=k2, monotone_from=mono)
        self.label = f"multi-regime:{alpha},{beta},{k1},{k2},{k3}"

    def _value_in(self, k):
        out = np.empty_like(k)
        first = k < self.k2
        out[first] = k[first] ** (-self.alpha)
        out[~first] = self.k2 ** (self.beta - self.alpha) * k[~first] ** (-self.beta)
        return out

    def _slope_in(self, k):
        return np.where(k < self.k2, -self.alpha, -self.beta)


class OdeFluctuation(Profile):
    """f(k) = k^{-3/2} exp(theta(k)), normalized with f(1) = 1, where the
    log-log slope is -3/2 + 50 sin(5k) exp(-k - 1/k)."""

    label = "ode-fluctuation"

    def __init__(self):
        super().__init__(support=(0.0, math.inf), scale_hint=1.0,
                         monotone_from=4.0)
        t = np.geomspace(1e-3, 200.0, 60000)
        dtheta = 50.0 * np.sin(5.0 * t) * np.exp(-t - 1.0 / t) / t
        theta = cumulative_trapezoid(dtheta, t, initial=0.0)
        theta -= np.interp(1.0, t, theta)
        self._t0, self._t1 = t[0], t[-1]
        self._theta = PchipInterpolator(np.log(t), theta, extrapolate=False)
        self._theta_lo = float(theta[0])
        self._theta_hi = float(theta[-1])

    def _theta_at(self, k):
        k = np.clip(k, self._t0, self._t1)
        return self._theta(np.log(k))

    def _value_in(self, k):
        return k ** (-1.5) * np.exp(self._theta_at(k))

    def _slope_in(self, k):
        return -1.5 + 50.0 * np.sin(5.0 * k) * np.exp(-k - 1.0 / k)


class Sampled(Profile):
    """Log-log linear interpolation of (k, f) samples; zero outside."""

    kind = "sampled"
    label = "sampled"
    has_derivative = True  # piecewise-constant log-log slopes

    def __init__(self, ks, fs):
        ks = np.asarray(ks, dtype=np.float64)
        fs = np.asarray(fs, dtype=np.float64)
        if ks.size < 8:
            raise FormatError(f"need at least 8 samples, got {ks.size}")
        for i in range(ks.size):
            if not math.isfinite(ks[i]) or ks[i] <= 0.0:
                raise FormatError(f"row {i}: abscissa must be positive, got {ks[i]}")
            if not math.isfinite(fs[i]) or fs[i] <= 0.0:
                raise FormatError(f"row {i}: value must be positive, got {fs[i]}")
            if i and ks[i] <= ks[i - 1]:
                raise FormatError(f"row {i}: abscissas must be strictly increasing")
        self.ks = ks
        self.fs = fs
        self._logk = np.log(ks)
        self._logf = np.log(fs)
        self._seg_slopes = np.diff(self._logf) / np.diff(self._logk)
        suffix = np.maximum.accumulate(fs[::-1])[::-1]
        mono_idx = ks.size - 1
        for i in range(ks.size - 1, -1, -1):
            if fs[i] >= suffix[i] and (i == ks.size - 1 or np.all(self._seg_slopes[i:] <= 0)):
                mono_idx = i
            else:
                break
        super().__init__(support=(float(ks[0]), float(ks[-1])),
                         breakpoints=tuple(float(x) for x in ks),
                         scale_hint=float(np.sqrt(ks[0] * ks[-1])),
                         monotone_from=float(ks[mono_idx]))
        self._suffix_max = suffix

    def _value_in(self, k):
        return np.exp(np.interp(np.log(k), self._logk, self._logf))

    def _slope_in(self, k):
        idx = np.clip(np.searchsorted(self.ks, k, side="right") - 1, 0,
                      self._seg_slopes.size - 1)
        return self._seg_slopes[idx]

    def tail_sup(self, k):
        if k >= self.ks[-1]:
            return 0.0
        i = int(np.searchsorted(self.ks, k, side="right"))
        cap = float(self._suffix_max[min(i, self.ks.size - 1)])
        return max(cap, float(self.value(max(k, self.ks[0]))))

    def samples(self):
        return list(zip(self.ks.tolist(), self.fs.tolist()))


class AnalyticProfile(Profile):
    """Profile from explicit value/slope callables (vectorized)."""

    def __init__(self, value_fn, slope_fn, support=(0.0, math.inf),
                 breakpoints=(), scale_hint=1.0, monotone_from=None,
                 label="analytic"):
        self._vf = value_fn
        self._sf = slope_fn
        super().__init__(support=support, breakpoints=breakpoints,
                         scale_hint=scale_hint, monotone_from=monotone_from)
        self.label = label

    def _value_in(self, k):
        return self._vf(k)

    def _slope_in(self, k):
        return self._sf(k)


class ScaledProfile(Profile):
    """r * f(s * k) for a base profile f."""

    def __init__(self, base, amplitude=1.0, stretch=1.0):
        r = float(amplitude)
        s = float(stretch)
        if r <= 0.0 or s <= 0.0:
            raise DomainError("amplitude and stretch must be positive")
        self.base = base
        self.amplitude = r
        self.stretch = s
        lo, hi = base.support
        super().__init__(support=(lo / s, hi / s),
                         breakpoints=tuple(b / s for b in base.breakpoints),
                         scale_hint=base.scale_hint / s,
                         monotone_from=base.monotone_from / s)
        self.label = f"scaled({base.label})"

    def _value_in(self, k):
        return self.amplitude * self.base.value(self.stretch * k)

    def _slope_in(self, k):
        return self.base.slope(self.stretch * k)


class SumProfile(Profile):
    def __init__(self, f, g):
        self.f = f
        self.g = g
        lo = min(f.support[0], g.support[0])
        hi = max(f.support[1], g.support[1])
        super().__init__(
            support=(lo, hi),
            breakpoints=tuple(f.breakpoints) + tuple(g.breakpoints),
            scale_hint=math.sqrt(f.scale_hint * g.scale_hint),
            monotone_from=max(f.monotone_from, g.monotone_from))
        self.label = f"sum({f.label},{g.label})"

    def _value_in(self, k):
        return self.f.value(k) + self.g.value(k)

    def _slope_in(self, k):
        vf = self.f.value(k)
        vg = self.g.value(k)
        lof, hif = self.f.support
        log, hig = self.g.support
        sf = np.zeros_like(k)
        sg = np.zeros_like(k)
        mf = (k >= lof) & (k <= hif) & (vf > 0)
        mg = (k >= log) & (k <= hig) & (vg > 0)
        if mf.any():
            sf[mf] = self.f.slope(k[mf])
        if mg.any():
            sg[mg] = self.g.slope(k[mg])
        return (sf * vf + sg * vg) / (vf + vg)


class ProductProfile(Profile):
    def __init__(self, f, g):
        self.f = f
        self.g = g
        lo = max(f.support[0], g.support[0])
        hi = min(f.support[1], g.support[1])
        if not lo < hi:
            raise DomainError("product support is empty")
        super().__init__(
            support=(lo, hi),
            breakpoints=tuple(b for b in f.breakpoints + g.breakpoints if lo <= b <= hi),
            scale_hint=math.sqrt(f.scale_hint * g.scale_hint),
            monotone_from=min(hi, max(f.monotone_from, g.monotone_from)))
        self.label = f"product({f.label},{g.label})"

    def _value_in(self, k):
        return self.f.value(k) * self.g.value(k)

    def _slope_in(self, k):
        return self.f.slope(k) + self.g.slope(k)


# -- constructors matching the documented families ----------------------------


def make_truncated_power(alpha, k1, k2):
    return TruncatedPower(alpha, k1, k2)


def make_two_regime(alpha, beta, k0):
    return TwoRegime(alpha, beta, k0)


def make_three_regime():
    return ThreeRegime()


def make_multi_regime(alpha, beta, k1, k2, k3):
    return MultiRegime(alpha, beta, k1, k2, k3)


def make_ode_fluctuation():
    return OdeFluctuation()


def load_sampled(rows):
    rows = list(rows)
    if len(rows) < 8:
        raise FormatError(f"need at least 8 rows, got {len(rows)}")
    ks = [r[0] for r in rows]
    fs = [r[1] for r in rows]
    return Sampled(ks, fs)


def read_spectrum_csv(source):
    """Parse a `k,f` CSV (optional header, # comments) into a Sampled profile."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected two columns, got {len(parts)}")
        try:
            k = float(parts[0])
            f = float(parts[1])
        except ValueError:
            if rows:
                raise FormatError(f"line {lineno}: non-numeric row {parts!r}")
            continue  # header line
        rows.append((k, f))
    return load_sampled(rows)
