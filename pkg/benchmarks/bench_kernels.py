"""Time the numba kernels against the numpy reference and check they agree.

    python benchmarks/bench_kernels.py [--repeat 5] [--j 14]
"""
import argparse
import time

import numpy as np

from oqhlab.kernels import numba_backend, numpy_backend
from oqhlab.multiplier import _panel_rule
from oqhlab.torus import float_to_turns, floats_to_turns


def best_of(fn, repeat):
    fn()  # warm-up (jit compile / caches)
    ts = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        ts.append(time.perf_counter() - t)
    return min(ts), out


def cases(j, rng):
    bts = floats_to_turns(rng.random(256))
    xt = int(float_to_turns(1e-6))
    vals = rng.standard_normal(4096) + 1j * rng.standard_normal(4096)
    kern = rng.standard_normal(8192) + 0j
    u, w = _panel_rule(512, 32)
    Y = rng.uniform(-50, 50, 200)
    absv = np.where(rng.random(4096) < 0.02, rng.random(4096), 0.0)
    return {
        f"mj_sum j={j}, 256 betas": lambda k: k.mj_sum(1, 3, xt, bts, j),
        f"mtrunc_sum N=2^{j}, 256 betas": lambda k: k.mtrunc_sum(1, 3, xt, bts, 1 << j),
        "conv_direct 4096 x 8192": lambda k: k.conv_direct(vals, kern, 4096),
        "osc_quad 512 panels, 200 y": lambda k: k.osc_quad(300.0, Y, u, w),
        "nudft 4096 pts, 256 betas": lambda k: k.nudft(vals, -2048, bts),
        "mhl 4096 window, 2% density": lambda k: k.mhl(absv, 0, -512, 4096),
        "gauss_exact Q=10007": lambda k: np.array([k.gauss_exact(3, 5, 10007)]),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--j", type=int, default=14)
    args = ap.parse_args()
    if numba_backend is None:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'numpy [s]':>11s} {'numba [s]':>11s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, fn in cases(args.j, rng).items():
        t_np, a = best_of(lambda: fn(numpy_backend), args.repeat)
        t_nb, b = best_of(lambda: fn(numba_backend), args.repeat)
        diff = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
        print(f"{name:34s} {t_np:11.4g} {t_nb:11.4g} {t_np / t_nb:8.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
