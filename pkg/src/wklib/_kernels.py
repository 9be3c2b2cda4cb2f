"""Backend dispatch for the hot kernel evaluations.

The numba backend is used by default; set the environment variable
``WKLIB_NO_NUMBA=1`` (before import) to force the pure-numpy fallback.
``BACKEND`` records which one is active.
"""

import os

import numpy as np

_flag = os.environ.get("WKLIB_NO_NUMBA", "").strip().lower()
_want_numba = _flag not in ("1", "true", "yes", "on")

BACKEND = "numpy"
if _want_numba:
    try:
        from . import _kernels_nb as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _kernels_np as _impl
else:
    from . import _kernels_np as _impl


def _as1d(x):
    a = np.ascontiguousarray(x, dtype=np.float64)
    return a.ravel(), a.shape


def besselj_arr(nu, x):
    a, shape = _as1d(x)
    return _impl.besselj(float(nu), a).reshape(shape)


def h_arr(d, sigma):
    a, shape = _as1d(sigma)
    return _impl.h(int(d), a).reshape(shape)


def h_deriv_arr(d, sigma):
    a, shape = _as1d(sigma)
    return _impl.h_deriv(int(d), a).reshape(shape)


def l_arr(d, z):
    a, shape = _as1d(z)
    return _impl.l(int(d), a).reshape(shape)
