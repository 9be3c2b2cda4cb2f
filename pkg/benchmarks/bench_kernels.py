"""Benchmark the compiled kernel backend against the pure-numpy fallback.

The backend is chosen at import time from the WKLIB_NO_NUMBA environment
flag, so each side runs in its own subprocess.  Reported per case: best of
`repeat` timings for one pass over an `n`-point array, and a full transform
curve as an end-to-end workload.

Usage: python3 benchmarks/bench_kernels.py [--n 2000000] [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys

_WORKER = r"""
import json, sys, time
import numpy as np
from wklib._kernels import BACKEND, h_arr, h_deriv_arr
from wklib.profiles import make_two_regime
from wklib.transform import wk_curve

n = int(sys.argv[1])
repeat = int(sys.argv[2])
sigma = np.geomspace(1e-3, 1e3, n)

out = {"backend": BACKEND}
h_arr(3, sigma[:8]); h_deriv_arr(3, sigma[:8])  # trigger any compilation

for name, fn in (("h", h_arr), ("h_deriv", h_deriv_arr)):
    for d in (2, 3):
        best = min(
            (lambda t0=time.perf_counter(): (fn(d, sigma), time.perf_counter() - t0)[1])()
            for _ in range(repeat))
        out[f"{name}_d{d}_s"] = best

p = make_two_regime(2.0, 4.0, 1.0)
t0 = time.perf_counter()
wk_curve(3, p, 1e-3, 1e3, points_per_decade=8, tol=1e-7)
out["curve_s"] = time.perf_counter() - t0
print(json.dumps(out))
"""


def run_side(no_numba, n, repeat):
    env = dict(os.environ)
    if no_numba:
        env["WKLIB_NO_NUMBA"] = "1"
    else:
        env.pop("WKLIB_NO_NUMBA", None)
    res = subprocess.run(
        [sys.executable, "-c", _WORKER, str(n), str(repeat)],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2_000_000,
                    help="array length per kernel call")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    fast = run_side(False, args.n, args.repeat)
    slow = run_side(True, args.n, args.repeat)
    print(f"array length {args.n}, best of {args.repeat}")
    print(f"{'case':<14}{fast['backend']:>12}{slow['backend']:>12}{'speedup':>10}")
    for key in sorted(fast):
        if not key.endswith("_s"):
            continue
        a, b = fast[key], slow[key]
        print(f"{key[:-2]:<14}{a:>12.4f}{b:>12.4f}{b / a:>10.2f}x")


if __name__ == "__main__":
    main()
