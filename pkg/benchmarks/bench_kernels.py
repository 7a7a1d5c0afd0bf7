"""Time the numba and numpy kernel paths side by side.

    python benchmarks/bench_kernels.py [--repeat R]

Each row reports the best of R runs per path and the speedup; the first numba
call is excluded since it includes JIT compilation.
"""
import argparse
import timeit

import numpy as np

from hbsmirnov._kernels import numba_kernels, numpy_kernels
from hbsmirnov.poly import Poly


def _horner_case(deg, npts, seed=0):
    r = np.random.default_rng(seed)
    c = r.normal(size=deg + 1) + 1j * r.normal(size=deg + 1)
    z = np.exp(2j * np.pi * r.uniform(size=npts))
    return c.astype(np.complex128), z.astype(np.complex128)


def _aberth_case(deg, seed=0):
    r = np.random.default_rng(seed)
    roots = 2 * r.uniform(size=deg) * np.exp(2j * np.pi * r.uniform(size=deg))
    c = Poly.from_roots(roots).coeffs
    z0 = 1.1 * np.exp(2j * np.pi * (np.arange(deg) + 0.25) / deg)
    return c, z0


def cases():
    for deg, npts in ((8, 4096), (64, 4096), (64, 65536)):
        c, z = _horner_case(deg, npts)
        yield f"horner   deg={deg:<3d} pts={npts}", "horner", (c, z)
        yield f"horner_d deg={deg:<3d} pts={npts}", "horner_d", (c, z)
    for deg in (10, 40, 120):
        c, z0 = _aberth_case(deg)
        yield f"aberth   deg={deg}", "aberth", (c, z0, 500, 1e-13)


def best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=7)
    args = ap.parse_args()
    print(f"{'case':34s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for label, name, cargs in cases():
        t_np = best(getattr(numpy_kernels, name), cargs, args.repeat)
        if numba_kernels is None:
            print(f"{label:34s} {1e3 * t_np:11.3f} {'n/a':>11s} {'':>8s}")
            continue
        fn = getattr(numba_kernels, name)
        fn(*cargs)  # compile
        t_nb = best(fn, cargs, args.repeat)
        print(f"{label:34s} {1e3 * t_np:11.3f} {1e3 * t_nb:11.3f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
