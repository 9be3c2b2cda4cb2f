"""Exception types shared across the library."""


class WKError(Exception):
    """Base class for all library errors."""


class DomainError(WKError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class UnsupportedOrderError(WKError, ValueError):
    """A Bessel order or dimension outside the covered set was requested."""


class DivergenceError(WKError, ArithmeticError):
    """An integral or gauge failed to converge (tail probes diverge)."""


class ToleranceError(WKError, ArithmeticError):
    """Panel refinement stalled before reaching the requested tolerance."""


class FormatError(WKError, ValueError):
    """Malformed tabular input (CSV rows, sample grids)."""


class GaugeError(WKError, ArithmeticError):
    """A gauge needed by a downstream computation is infinite or undefined."""
