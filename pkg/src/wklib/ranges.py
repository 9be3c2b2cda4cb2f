"""Threshold frequencies and dual-range planning.

Two threshold functionals bracket the universal asymptotic regimes of the
transform: the sharp threshold K#(delta) marks where the tail of f stops
polluting the quadratic regime of WK_d[f] near lambda = 0, and the flat
threshold Kb(eta) marks where the head of f stops polluting the constant
regime at lambda = infinity.  In between, a spectral quasi-power-law range
[k1, k2] of f maps to a dual range (mu/k2, eps/k1) of WK_d[f]; the planner
picks (eps, mu) on the optimal level curve of sigma_alpha and checks
feasibility against the range ratio k2/k1.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import DivergenceError, DomainError, GaugeError
from .gauges import gauge_report
from .kernel import check_dim, kernel_constants
from .transform import oscillation_probe

_PI = math.pi
_REL = 1e-6  # relative bracketing accuracy of the thresholds


@dataclass
class Thresholds:
    d: int
    delta: float
    k_sharp: float
    eta: float
    k_flat: float


@dataclass
class RangePlan:
    d: int
    alpha: float
    spectral_interval: tuple
    eps: float
    mu: float
    sigma_value: float
    dual_interval: tuple
    feasible: bool
    rhs_bound: float
    meta: dict = field(default_factory=dict)


# -- sharp threshold ----------------------------------------------------------


def _sharp_cond(d, p, delta, K):
    head2 = p.head_mass(2, K)
    if head2 <= 0.0:
        return False
    if K * K * p.tail_mass(0, K) > 0.5 * delta**4 * head2:
        return False
    if d <= 2:
        # low dimensions need the second-moment version as well
        if p.tail_mass(2, K) > 0.5 * delta**2 * head2:
            return False
    return True


def k_sharp(d, p, delta, probes=10):
    """Smallest K with K^2 int_K^inf f <= (delta^4/2) int_0^K k^2 f (and the
    second-moment variant for d <= 2), bracketed to relative 1e-6.

    The "for all larger K" quantifier is checked on the geometric grid
    K * {1, 2, ..., 2^probes}; a violation restarts the bracketing above the
    violating point.
    """
    d = check_dim(d)
    delta = float(delta)
    const = kernel_constants(d)
    if not 0.0 < delta <= const.delta0:
        raise DomainError(
            f"delta must lie in (0, {const.delta0:.6g}] for d={d}, got {delta}")
    p.tail_mass(0, p.scale_hint)  # fail fast on nonintegrable tails

    K = max(p.scale_hint, 1e-280)
    for _ in range(8):
        # bracket upward
        for _ in range(2000):
            if _sharp_cond(d, p, delta, K):
                break
            K *= 2.0
        else:
            raise DivergenceError(
                "no sharp threshold found; the tail of f is too heavy")
        hi = K
        lo = K * 0.5
        while _sharp_cond(d, p, delta, lo) and lo > 1e-280:
            hi = lo
            lo *= 0.5
        if not _sharp_cond(d, p, delta, lo):
            while hi / lo > 1.0 + _REL:
                mid = math.sqrt(lo * hi)
                if _sharp_cond(d, p, delta, mid):
                    hi = mid
                else:
                    lo = mid
        K = hi
        bad = None
        for j in range(probes + 1):
            if not _sharp_cond(d, p, delta, K * 2.0**j):
                bad = K * 2.0**j
                break
        if bad is None:
            return K
        K = bad * 2.0
    raise DivergenceError("sharp threshold quantifier check kept failing")


# -- flat threshold -----------------------------------------------------------


def _flat_cond(d, p, eta, K):
    return p.head_mass(0, K) <= (0.5 * eta ** (-0.5 * (d - 1.0))
                                 * p.tail_mass(0, K))


def _flat_amendment_ok(d, p, eta, K, total, probes):
    lam_grid = np.geomspace(eta / K, 1e3 * eta / K, probes)
    if d == 3:
        cap = total / eta
        kind = "exp"
    else:
        cap = total / math.sqrt(eta)
        kind = "zj1"
    # the probe only has to resolve the cap, not the integral itself: the
    # scale floor makes the quadrature stop once its remaining-tail bound is
    # a fraction of the cap, and the comparison uses the error conservatively
    tol = min(1e-3, max(1e-10, 0.05 * cap / total))
    scale = 0.6 * cap / tol
    for lam in lam_grid:
        val, err = oscillation_probe(p, float(lam), kind, tol=tol,
                                     scale=scale, with_err=True)
        if abs(val) + err > cap:
            return False
    return True


def k_flat(d, p, eta, probes=64):
    """Largest K with int_0^K f <= (1/2) eta^{-(d-1)/2} int_K^inf f, for
    d >= 2 and eta >= eta0; for d in {2, 3} the result is shrunk until the
    oscillatory side conditions hold on a probe grid of lambda >= eta/K."""
    d = check_dim(d, minimum=2)
    eta = float(eta)
    const = kernel_constants(d)
    if not eta >= const.eta0 * (1.0 - 1e-12):
        raise DomainError(
            f"eta must be >= eta0 = {const.eta0:.6g} for d={d}, got {eta}")
    total = p.tail_mass(0, 0.0)

    K = p.scale_hint
    for _ in range(2000):
        if _flat_cond(d, p, eta, K):
            break
        K *= 0.5
    else:
        raise DivergenceError("no flat threshold found")
    lo = K
    hi = K * 2.0
    while _flat_cond(d, p, eta, hi) and hi < 1e280:
        lo = hi
        hi *= 2.0
    if _flat_cond(d, p, eta, hi):
        raise DivergenceError("flat threshold ran away; head of f vanishes")
    while hi / lo > 1.0 + _REL:
        mid = math.sqrt(lo * hi)
        if _flat_cond(d, p, eta, mid):
            lo = mid
        else:
            hi = mid
    K = lo

    if d in (2, 3):
        for _ in range(200):
            if _flat_amendment_ok(d, p, eta, K, total, probes):
                break
            K *= 0.8
        else:
            raise DivergenceError(
                "flat-threshold side condition kept failing while shrinking K")
    return K


def flat_sharp_gap(d, p, delta, eta):
    """(k_flat, k_sharp, gap_ok) with gap_ok = (k_flat < k_sharp)."""
    kf = k_flat(d, p, eta)
    ks = k_sharp(d, p, delta)
    return kf, ks, bool(kf < ks)


# -- dual-range planning ------------------------------------------------------


def sigma_alpha(alpha, eps, mu):
    """(alpha-1)(pi eps)^{3-alpha} + (3-alpha)(pi mu)^{-(alpha-1)}."""
    alpha = float(alpha)
    if not 1.0 < alpha < 3.0:
        raise DomainError(f"alpha must lie in (1, 3), got {alpha}")
    eps = float(eps)
    mu = float(mu)
    if eps <= 0.0 or mu <= 0.0:
        raise DomainError("eps and mu must be positive")
    return ((alpha - 1.0) * (_PI * eps) ** (3.0 - alpha)
            + (3.0 - alpha) * (_PI * mu) ** (-(alpha - 1.0)))


def min_reynolds(alpha, target):
    """inf{mu/eps : sigma_alpha(eps, mu) <= target}.

    The first-order conditions of the constrained problem put both terms of
    sigma_alpha at target/2, giving the closed form
    (target/2)^(-2 / ((alpha-1)(3-alpha))).
    """
    alpha = float(alpha)
    if not 1.0 < alpha < 3.0:
        raise DomainError(f"alpha must lie in (1, 3), got {alpha}")
    target = float(target)
    if target <= 0.0:
        raise DomainError(f"target must be positive, got {target}")
    return (0.5 * target) ** (-2.0 / ((alpha - 1.0) * (3.0 - alpha)))


def _mu_on_level(alpha, eps, target):
    rest = target - (alpha - 1.0) * (_PI * eps) ** (3.0 - alpha)
    if rest <= 0.0:
        return math.inf
    return ((3.0 - alpha) / rest) ** (1.0 / (alpha - 1.0)) / _PI


def _golden_min_ratio(alpha, target):
    """Minimize mu/eps along sigma_alpha(eps, mu) = target (golden section
    on log eps).  Returns (eps, mu)."""
    eps_max = (target / (alpha - 1.0)) ** (1.0 / (3.0 - alpha)) / _PI
    a = math.log(eps_max) - 30.0
    b = math.log(eps_max * (1.0 - 1e-12))

    def g(t):
        eps = math.exp(t)
        return math.log(_mu_on_level(alpha, eps, target)) - t

    invphi = 0.5 * (math.sqrt(5.0) - 1.0)
    c = b - invphi * (b - a)
    e = a + invphi * (b - a)
    gc, ge = g(c), g(e)
    for _ in range(200):
        if b - a < 1e-12:
            break
        if gc < ge:
            b, e, ge = e, c, gc
            c = b - invphi * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, e, ge
            e = a + invphi * (b - a)
            ge = g(e)
    t = 0.5 * (a + b)
    eps = math.exp(t)
    return eps, _mu_on_level(alpha, eps, target)


def _tail_slope_integral(p, k2):
    """int_{k2}^inf k |f'(k)| dk = int_{k2}^inf |slope(k)| f(k) dk."""
    def fn(k):
        return abs(float(p.slope(k))) * float(p.value(k))

    lo, hi = p.support
    top = min(hi, max(k2 * 1e10, k2 * 2.0))
    total = 0.0
    a = k2
    while a < top:
        b = min(top, 2.0 * a)
        piece, _ = quad(fn, a, b, limit=200)
        total += piece
        if piece <= 1e-14 * max(total, 1e-300) and b < top:
            break
        a = b
    return total


def _hr_constant(d, alpha, c12):
    """The Theorem-4 prefactor in terms of dimension, exponent and the
    larger of the two tail-quality ratios."""
    const = kernel_constants(d)
    if d >= 3:
        return (4.0 * (1.0 + (alpha + 1.0) * c12)
                * const.c_plus / const.c_minus)
    if d == 2:
        extra = max(4.0 * c12 / (const.c_plus * _PI**2),
                    (1.0 + c12) / const.c_plus)
        return (4.0 * (1.0 + (alpha - 1.0) * c12 + extra)
                * const.c_plus / const.c_minus)
    # d = 1: no positive lower kernel constant exists, the bound is void
    return math.inf


_T_FLOOR = 1e-6


def plan_dual_range(d, p, alpha, k1, k2):
    """Optimal (eps, mu) for mapping the spectral range [k1, k2] of f to the
    dual range (mu/k2, eps/k1) of WK_d[f]."""
    d = check_dim(d)
    alpha = float(alpha)
    if not 1.0 < alpha < 3.0:
        raise DomainError(f"alpha must lie in (1, 3), got {alpha}")
    k1 = float(k1)
    k2 = float(k2)
    if not 0.0 < k1 < k2:
        raise DomainError("need 0 < k1 < k2")

    rep = gauge_report(p, -alpha, k1, k2)
    if not (math.isfinite(rep.p_inf) and math.isfinite(rep.p_zero)):
        raise GaugeError(
            f"gauges of {getattr(p, 'label', 'profile')} are infinite on "
            f"[{k1}, {k2}]")

    f1 = float(p.value(k1))
    f2 = float(p.value(k2))
    if f1 <= 0.0 or f2 <= 0.0:
        raise DomainError("f must be positive at k1 and k2")
    c1 = p.head_mass(2, k1) / (k1**3 * f1)
    c2 = p.tail_mass(0, k2) / (k2 * f2)
    if d <= 2:
        c2 = max(c2, _tail_slope_integral(p, k2) / (k2 * f2))

    big_c = _hr_constant(d, alpha, max(c1, c2))
    raw_target = (big_c * rep.p_inf * math.exp(-rep.p_zero)
                  / (1.0 + c1 + c2)) if math.isfinite(big_c) else 0.0
    target = min(1.0, raw_target)
    floored = target < _T_FLOOR
    if floored:
        target = _T_FLOOR

    eps, mu = _golden_min_ratio(alpha, target)
    ratio = mu / eps
    feasible = bool(ratio < k2 / k1)
    sigma = sigma_alpha(alpha, eps, mu)
    rhs = rep.p_inf + (big_c * math.exp(rep.p_zero) * sigma
                       if math.isfinite(big_c) else math.inf)
    return RangePlan(
        d=d,
        alpha=alpha,
        spectral_interval=(k1, k2),
        eps=eps,
        mu=mu,
        sigma_value=sigma,
        dual_interval=(mu / k2, eps / k1),
        feasible=feasible,
        rhs_bound=rhs,
        meta={
            "target": target,
            "target_floored": floored,
            "raw_target": raw_target,
            "min_ratio": ratio,
            "c1": c1,
            "c2": c2,
            "big_c": big_c,
            "p_inf": rep.p_inf,
            "p_zero": rep.p_zero,
            "p_one": rep.p_one,
        },
    )
