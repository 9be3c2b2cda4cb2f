"""Command line front end.

Profiles are named by a small grammar `family:param,param,...`:

    truncated:alpha,k1,k2     power law k^-alpha on [k1, k2]
    two-regime:alpha,beta,k0  k^alpha rise, k^-beta tail, peak at k0
    three-regime              the fixed three-regime example shape
    multi-regime:a,b,k1,k2,k3 two power-law ranges inside a rise and a tail
    ode                       the fluctuating ODE solution (~ k^-3/2)

or read from a `k,f` CSV with --input.  Every CSV written carries a `#`
header with the dimension, family, tolerance and tool version, and output
is deterministic for a fixed configuration.
"""

import argparse
import math
import sys

import numpy as np

from . import __version__
from .errors import WKError
from .gauges import gauge_report
from .kernel import kernel_constants
from .profiles import (
    make_multi_regime,
    make_ode_fluctuation,
    make_three_regime,
    make_truncated_power,
    make_two_regime,
    read_spectrum_csv,
)
from .ranges import flat_sharp_gap, min_reynolds, plan_dual_range
from .transform import wk_curve, wk_point, wk_slope
from .verify import (
    all_passed,
    check_comparisons,
    check_kernel_tables,
    check_thm1,
    check_thm2,
    check_thm3,
    check_thm4,
    report_csv,
    report_text,
)

_FAMILIES = {
    "truncated": (make_truncated_power, 3, "alpha,k1,k2"),
    "two-regime": (make_two_regime, 3, "alpha,beta,k0"),
    "three-regime": (make_three_regime, 0, ""),
    "multi-regime": (make_multi_regime, 5, "alpha,beta,k1,k2,k3"),
    "ode": (make_ode_fluctuation, 0, ""),
}


class UsageError(Exception):
    pass


def parse_family(spec):
    name, _, rest = spec.partition(":")
    if name not in _FAMILIES:
        raise UsageError(
            f"unknown family {name!r}; known: {', '.join(sorted(_FAMILIES))}")
    maker, n_args, sig = _FAMILIES[name]
    params = [s for s in rest.split(",") if s] if rest else []
    if len(params) != n_args:
        raise UsageError(
            f"family {name} takes {n_args} parameters ({sig or 'none'}), "
            f"got {len(params)}")
    try:
        return maker(*[float(s) for s in params])
    except ValueError as exc:
        raise UsageError(f"bad family parameter: {exc}") from exc


def _load_profile(args):
    if getattr(args, "input", None):
        if getattr(args, "family", None):
            raise UsageError("give either --family or --input, not both")
        return read_spectrum_csv(args.input)
    if not getattr(args, "family", None):
        raise UsageError("a profile is required: --family or --input")
    return parse_family(args.family)


def _open_out(args):
    if args.out and args.out != "-":
        return open(args.out, "w", encoding="utf-8"), True
    return sys.stdout, False


def _csv_header(args, p, columns):
    fam = getattr(args, "family", None) or getattr(args, "input", "-")
    return (f"# wklib {__version__}\n"
            f"# d={getattr(args, 'd', '-')} family={fam} "
            f"tol={getattr(args, 'tol', '-')}\n"
            f"{columns}\n")


def cmd_transform(args):
    p = _load_profile(args)
    curve = wk_curve(args.d, p, args.lmin, args.lmax,
                     points_per_decade=args.ppd, tol=args.tol)
    fh, close = _open_out(args)
    try:
        fh.write(_csv_header(args, p, "lambda,value,slope,err"))
        for lam, v, s, e in zip(curve.lambda_grid, curve.values,
                                curve.slopes, curve.err_est):
            fh.write(f"{lam:.12g},{v:.12g},{s:.12g},{e:.3g}\n")
    finally:
        if close:
            fh.close()
    return 0


def cmd_slope(args):
    p = _load_profile(args)
    value, err = wk_point(args.d, p, args.lam, args.tol)
    slope = wk_slope(args.d, p, args.lam, args.tol)
    print(f"lambda={args.lam:g} value={value:.12g} slope={slope:.9g} "
          f"err={err:.3g}")
    return 0


def cmd_gauges(args):
    p = _load_profile(args)
    rep = gauge_report(p, args.alpha, args.a, args.b)
    print(f"profile: {p.label}")
    print(f"alpha:   {rep.alpha:g}")
    print(f"window:  ({rep.meta['window'][0]:g}, {rep.meta['window'][1]:g})")
    print(f"p_zero:  {rep.p_zero:.9g}{' (diverges)' if rep.p_zero_diverges else ''}")
    print(f"p_one:   {rep.p_one:.9g}{' (diverges)' if rep.p_one_diverges else ''}")
    print(f"p_inf:   {rep.p_inf:.9g}{' (diverges)' if rep.p_inf_diverges else ''}")
    print(f"c0:      {rep.c0:.9g}")
    print(f"witness: min at {rep.witness[0]:g}, max at {rep.witness[1]:g}")
    print(f"grid uncertainty: {rep.grid_uncertainty:.3g}")
    return 0


def cmd_thresholds(args):
    p = _load_profile(args)
    const = kernel_constants(args.d)
    delta = args.delta if args.delta is not None else const.delta0
    eta = args.eta if args.eta is not None else const.eta0
    kf, ks, ok = flat_sharp_gap(args.d, p, delta, eta)
    print(f"delta={delta:g} k_sharp={ks:.9g}")
    print(f"eta={eta:g} k_flat={kf:.9g}")
    print(f"gap_ok={ok}")
    return 0


def cmd_plan(args):
    if args.sweep_alpha:
        alphas = np.linspace(1.05, 2.95, args.sweep_points)
        fh, close = _open_out(args)
        try:
            fh.write(f"# wklib {__version__}\n# target={args.target}\n")
            fh.write("alpha,min_reynolds\n")
            for a in alphas:
                fh.write(f"{a:.12g},{min_reynolds(float(a), args.target):.12g}\n")
        finally:
            if close:
                fh.close()
        return 0
    p = _load_profile(args)
    plan = plan_dual_range(args.d, p, args.alpha, args.k1, args.k2)
    print(f"profile: {p.label}  d={plan.d}  alpha={plan.alpha:g}")
    print(f"spectral interval: [{plan.spectral_interval[0]:g}, "
          f"{plan.spectral_interval[1]:g}]")
    print(f"eps={plan.eps:.6g} mu={plan.mu:.6g} sigma={plan.sigma_value:.6g}")
    print(f"dual interval: ({plan.dual_interval[0]:.6g}, "
          f"{plan.dual_interval[1]:.6g})")
    print(f"feasible={plan.feasible} (min mu/eps = "
          f"{plan.meta['min_ratio']:.6g}, k2/k1 = "
          f"{plan.spectral_interval[1] / plan.spectral_interval[0]:.6g})")
    print(f"rhs_bound={plan.rhs_bound:.6g}")
    if plan.meta["target_floored"]:
        print("note: degenerate target floored at 1e-06")
    return 0


def cmd_verify(args):
    reports = []
    suite = args.suite
    if suite in ("all", "kernel"):
        reports += check_kernel_tables()
    if suite in ("all", "thm1", "thm2", "thm3", "thm4", "comparisons"):
        p = _load_profile(args) if (args.family or args.input) else None
        d = args.d
        const = kernel_constants(d)
        if suite in ("all", "thm1"):
            q = p if p is not None else make_ode_fluctuation()
            reports += check_thm1(d, q, 1.5)
        if suite in ("all", "thm2"):
            q = p if p is not None else make_two_regime(2.0, 4.0, 10.0)
            reports += check_thm2(d, q, [const.delta0, const.delta0 / 2])
        if suite in ("all", "thm3"):
            q = p if p is not None else make_two_regime(2.0, 4.0, 10.0)
            reports += check_thm3(d, q, [const.eta0, 10.0 * const.eta0,
                                         100.0 * const.eta0])
        if suite in ("all", "thm4"):
            q = p if p is not None else make_three_regime()
            reports += [check_thm4(d, q, 1.53, 1.0, 1e4)]
        if suite in ("all", "comparisons"):
            q = p if p is not None else make_two_regime(2.0, 4.0, 1.0)
            reports += check_comparisons(q)
    if not reports:
        raise UsageError(f"unknown suite {args.suite!r}")
    sys.stdout.write(report_text(reports))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report_csv(reports))
    return 0 if all_passed(reports) else 1


def cmd_families(args):
    for name in sorted(_FAMILIES):
        _, n_args, sig = _FAMILIES[name]
        print(f"{name}: {sig or '(no parameters)'}")
    return 0


def _add_profile_args(sp):
    sp.add_argument("--family", help="profile spec, family:param,param,...")
    sp.add_argument("--input", help="CSV spectrum file with k,f rows")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="wklib",
        description="Wiener-Khinchin transforms of radial spectra")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("transform", help="transform curve as CSV")
    _add_profile_args(sp)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--lmin", type=float, default=1e-4)
    sp.add_argument("--lmax", type=float, default=1e2)
    sp.add_argument("--ppd", type=int, default=24,
                    help="points per decade (default 24)")
    sp.add_argument("--tol", type=float, default=1e-7)
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("slope", help="value and slope at one lambda")
    _add_profile_args(sp)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--lam", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-7)
    sp.set_defaults(func=cmd_slope)

    sp = sub.add_parser("gauges", help="power-law gauges of a profile")
    _add_profile_args(sp)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--a", type=float, default=0.0)
    sp.add_argument("--b", type=float, default=math.inf)
    sp.set_defaults(func=cmd_gauges)

    sp = sub.add_parser("thresholds", help="sharp and flat thresholds")
    _add_profile_args(sp)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--delta", type=float, default=None,
                    help="default: the largest admissible delta")
    sp.add_argument("--eta", type=float, default=None,
                    help="default: the smallest admissible eta")
    sp.set_defaults(func=cmd_thresholds)

    sp = sub.add_parser("plan", help="dual-range plan or reynolds sweep")
    _add_profile_args(sp)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--alpha", type=float, default=5.0 / 3.0)
    sp.add_argument("--k1", type=float, default=1.0)
    sp.add_argument("--k2", type=float, default=1e4)
    sp.add_argument("--sweep-alpha", action="store_true",
                    help="emit an alpha,min_reynolds CSV instead")
    sp.add_argument("--sweep-points", type=int, default=96)
    sp.add_argument("--target", type=float, default=1.0)
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("verify", help="run inequality checks")
    _add_profile_args(sp)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--suite", default="all",
                    choices=["all", "kernel", "thm1", "thm2", "thm3",
                             "thm4", "comparisons"])
    sp.add_argument("--out", default=None, help="also write a CSV report")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("families", help="list profile families")
    sp.set_defaults(func=cmd_families)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except WKError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
