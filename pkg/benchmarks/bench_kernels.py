"""Time the compiled kernels against their plain-numpy ``py_func`` versions.

Usage: python benchmarks/bench_kernels.py [--sizes 16 32 64] [--repeat 3]
"""
import argparse
import time

import numpy as np

from krein_riccati import _kernels
from krein_riccati._accel import USE_NUMBA
from krein_riccati.dense import make_rng, random_complex


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def schur_run(kern_h, kern_qr, a):
    h, q = kern_h(a)
    kern_qr(h, q, 30 * a.shape[0])


def cases(n, rng):
    a = random_complex((n, n), rng)
    x = random_complex((n, 2), rng)
    zs = 1j * np.linspace(-50, 50, 64) + 3.0
    ws = np.full(zs.size, 0.1 + 0j)
    r = np.triu(random_complex((n, n), rng))
    return {
        "schur": (lambda h, qr: lambda: schur_run(h, qr, a),
                  (_kernels.hessenberg, _kernels.schur_qr)),
        "eigvecs": (lambda f: lambda: f(r), (_kernels.triangular_eigvecs,)),
        "resolvent_sum": (lambda f: lambda: f(a, x, zs, ws), (_kernels.weighted_resolvent_sum,)),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    rng = make_rng(0)
    print(f"numba enabled: {USE_NUMBA}")
    print(f"{'kernel':<15}{'n':>5}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for n in args.sizes:
        for name, (make, kerns) in cases(n, rng).items():
            fast = make(*kerns)
            slow = make(*(k.py_func for k in kerns))
            fast()  # compile outside the timing
            tf = best_of(fast, args.repeat)
            ts = best_of(slow, args.repeat)
            print(f"{name:<15}{n:>5}{tf:>12.4g}{ts:>12.4g}{ts / tf:>10.1f}")


if __name__ == "__main__":
    main()
