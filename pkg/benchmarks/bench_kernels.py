"""Time the numba kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 5] [--rows 20000] [--cols 256]

Each kernel is warmed up once (this triggers JIT compilation) and then timed
with the best of ``--repeat`` runs.  The script also checks that both
backends agree: uniforms bit for bit, normals, moments and Hermite values to rounding.
"""

import argparse
import time

import numpy as np

from wiener_radon import rng
from wiener_radon.kernels import backend_module


def best_time(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--rows", type=int, default=20_000)
    p.add_argument("--cols", type=int, default=256)
    args = p.parse_args(argv)

    numpy_k = backend_module("numpy")
    try:
        numba_k = backend_module("numba")
    except ImportError:
        print("numba is not installed; only the numpy backend can be timed")
        numba_k = None

    key = rng.stream_key(0)
    x = np.random.default_rng(0).normal(size=args.rows * args.cols)
    cases = {
        "counter_normals": lambda k: k.counter_normals(key, 0, args.rows, args.cols),
        "shifted_moments": lambda k: k.shifted_moments(x, 0.5),
        "hermite_values(n=8)": lambda k: k.hermite_values(8, x, 1.3),
    }

    print(f"{'kernel':<22}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, case in cases.items():
        t_np = best_time(lambda: case(numpy_k), args.repeat)
        if numba_k is None:
            print(f"{name:<22}{t_np * 1e3:>12.2f}{'-':>12}{'-':>10}")
            continue
        t_nb = best_time(lambda: case(numba_k), args.repeat)
        print(f"{name:<22}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>9.1f}x")

    if numba_k is not None:
        u = numpy_k.counter_uniforms(key, 0, args.rows * args.cols)
        assert np.array_equal(u, numba_k.counter_uniforms(key, 0, args.rows * args.cols))
        a, b = cases["counter_normals"](numpy_k), cases["counter_normals"](numba_k)
        rel = float(np.max(np.abs(a - b) / np.abs(a)))
        assert rel <= 1e-14, f"normal draws differ by {rel:.1e} relative"
        m1, m2 = cases["shifted_moments"](numpy_k), cases["shifted_moments"](numba_k)
        assert np.allclose(m1, m2, rtol=1e-10), (m1, m2)
        h1, h2 = cases["hermite_values(n=8)"](numpy_k), cases["hermite_values(n=8)"](numba_k)
        assert np.allclose(h1, h2, rtol=1e-12, atol=1e-12)
        print("backends agree")


if __name__ == "__main__":
    main()
