#!/usr/bin/env python3
"""Timing comparison of the numba kernels against their pure-numpy twins.

Covers the four hot kernels plus the end-to-end structured one-period
propagator, with the dense-exponential oracle as the reference row.

    python benchmarks/bench_backends.py --n-sites 8 12 --repeats 5
"""

import argparse
import time

import numpy as np

from dtcmorph import backend
from dtcmorph.floquet import fast_floquet_operator, floquet_operator
from dtcmorph.hamiltonians import default_params, sample_disorder


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def kernel_cases(n_sites, rng):
    d = 1 << n_sites
    mat = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    mat = np.ascontiguousarray(mat)
    gate2 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    gate4 = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    w = rng.uniform(0, 3, n_sites)
    params = default_params(n_sites, 0.5)
    disorder = sample_disorder(params, 1)
    return {
        "pair_coupling_diagonal": lambda: backend.pair_coupling_diagonal(n_sites, 0.45, 1.51),
        "field_diagonal": lambda: backend.field_diagonal(w),
        "apply_site_gate": lambda: backend.apply_site_gate(mat.copy(), n_sites // 2, gate2),
        "apply_pair_gate": lambda: backend.apply_pair_gate(mat.copy(), 2, gate4),
        "fast_floquet_operator": lambda: fast_floquet_operator(params, disorder),
        "dense_floquet_operator": lambda: floquet_operator(params, disorder),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-sites", type=int, nargs="+", default=[8, 10])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = ["numpy"]
    try:
        backend.set_backend("numba")
        backends.insert(0, "numba")
    except ImportError:
        print("numba unavailable; timing the numpy path only")

    for n_sites in args.n_sites:
        rng = np.random.default_rng(0)
        cases = kernel_cases(n_sites, rng)
        print(f"\nn_sites = {n_sites} (dimension {1 << n_sites})")
        print(f"{'kernel':<26}" + "".join(f"{b:>12}" for b in backends) + f"{'ratio':>10}")
        for name, fn in cases.items():
            if name == "dense_floquet_operator":
                # backend independent; time once for reference
                t = best_of(fn, args.repeats)
                print(f"{name:<26}" + f"{t * 1e3:>11.2f}ms" * len(backends))
                continue
            timings = []
            for b in backends:
                previous = backend.set_backend(b)
                try:
                    fn()  # warm up (jit compile, caches)
                    timings.append(best_of(fn, args.repeats))
                finally:
                    backend.set_backend(previous)
            row = "".join(f"{t * 1e3:>11.2f}ms" for t in timings)
            ratio = f"{timings[-1] / timings[0]:>9.2f}x" if len(timings) == 2 else ""
            print(f"{name:<26}{row}{ratio}")


if __name__ == "__main__":
    main()
