"""Benchmark the jitted kernels against their pure-numpy fallbacks.

Usage:  python benchmarks/bench_kernels.py [batch_size]

Times the four hot kernels (exponential-map forward/inverse, the spiral
log-coordinate map and its analytic Jacobian) on identical inputs and checks
both paths agree.  QCMAPS_NUMBA=0 only changes the package's default
dispatch; both implementations are always importable for benchmarking.
"""

import sys
import time

import numpy as np

from qcmaps import kernels


def timeit(fn, *args, repeat=7):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    m = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    if not kernels.HAVE_NUMBA:
        print("numba unavailable: nothing to compare")
        return
    rng = np.random.default_rng(0)
    n = 3
    y = rng.standard_normal((m, n)) * np.exp(rng.uniform(-1, 1, (m, 1)))
    x = kernels._zorich_inverse_np(y)
    good = x[np.max(np.abs(x[:, :-1]), axis=1) > 1e-6]

    kernels.warmup()
    print(f"batch {m}, n = {n}, threads = QCMAPS_THREADS or numba default")
    print(f"{'kernel':<14}{'numpy':>12}{'numba':>12}{'speedup':>10}{'max|diff|':>12}")
    cases = [
        ("forward", kernels._zorich_forward_np, kernels._zorich_forward_nb, (x,)),
        ("inverse", kernels._zorich_inverse_np, kernels._zorich_inverse_nb, (y,)),
        ("spiral_u", kernels._spiral_u_np, kernels._spiral_u_nb, (good, 2.0, 0.25)),
        (
            "spiral_jac",
            kernels._spiral_jac_np,
            kernels._spiral_jac_nb,
            (good, 2.0, 0.25),
        ),
    ]
    for name, f_np, f_nb, args in cases:
        t_np, out_np = timeit(f_np, *args)
        t_nb, out_nb = timeit(f_nb, *args)
        diff = np.abs(out_np - out_nb).max()
        print(
            f"{name:<14}{t_np * 1e3:>10.1f}ms{t_nb * 1e3:>10.1f}ms"
            f"{t_np / t_nb:>9.1f}x{diff:>12.2e}"
        )


if __name__ == "__main__":
    main()
