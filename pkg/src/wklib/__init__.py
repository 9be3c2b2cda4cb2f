"""wklib: the d-dimensional Wiener-Khinchin transform of radial spectra.

WK_d[f](lam) = int_0^inf H_d(lam k) f(k) dk with the oscillatory kernel
H_d(s) = 1 - Gamma(d/2) (pi s)^{1-d/2} J_{d/2-1}(2 pi s), plus power-law
gauges, threshold frequencies, dual-range planning and a verification
harness for the structural inequalities tying them together.
"""

from .errors import (
    DivergenceError,
    DomainError,
    FormatError,
    GaugeError,
    ToleranceError,
    UnsupportedOrderError,
    WKError,
)
from .gauges import (
    GaugeReport,
    best_fit_constant,
    gauge_inf,
    gauge_one,
    gauge_report,
    gauge_zero,
    loglog_slope,
)
from .kernel import (
    KernelConstants,
    bessel_j,
    homogeneous_constant,
    kernel_asymptotic,
    kernel_constants,
    kernel_g,
    kernel_h,
    kernel_h_deriv,
    kernel_l,
)
from .profiles import (
    Profile,
    load_sampled,
    make_multi_regime,
    make_ode_fluctuation,
    make_three_regime,
    make_truncated_power,
    make_two_regime,
    moment,
    read_spectrum_csv,
)
from .ranges import (
    RangePlan,
    Thresholds,
    flat_sharp_gap,
    k_flat,
    k_sharp,
    min_reynolds,
    plan_dual_range,
    sigma_alpha,
)
from .transform import (
    TransformCurve,
    hankel_side,
    oscillation_probe,
    wk_curve,
    wk_point,
    wk_slope,
)
from .verify import (
    CheckReport,
    check_comparisons,
    check_kernel_tables,
    check_powerlaw_lower_bound,
    check_thm1,
    check_thm2,
    check_thm3,
    check_thm4,
    report_csv,
    report_text,
    wk_gauges,
)

__version__ = "0.1.0"

__all__ = [
    "WKError", "DomainError", "UnsupportedOrderError", "DivergenceError",
    "ToleranceError", "FormatError", "GaugeError",
    "bessel_j", "kernel_h", "kernel_h_deriv", "kernel_l", "kernel_g",
    "kernel_asymptotic", "kernel_constants", "KernelConstants",
    "homogeneous_constant",
    "Profile", "make_truncated_power", "make_two_regime",
    "make_three_regime", "make_multi_regime", "make_ode_fluctuation",
    "load_sampled", "read_spectrum_csv", "moment",
    "GaugeReport", "gauge_report", "gauge_inf", "gauge_one", "gauge_zero",
    "best_fit_constant", "loglog_slope",
    "wk_point", "wk_slope", "wk_curve", "hankel_side", "oscillation_probe",
    "TransformCurve",
    "Thresholds", "RangePlan", "k_sharp", "k_flat", "flat_sharp_gap",
    "sigma_alpha", "plan_dual_range", "min_reynolds",
    "CheckReport", "check_thm1", "check_thm2", "check_thm3", "check_thm4",
    "check_comparisons", "check_powerlaw_lower_bound", "check_kernel_tables",
    "report_text", "report_csv", "wk_gauges",
    "__version__",
]
