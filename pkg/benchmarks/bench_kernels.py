"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--points N]

Kernel timings call each backend directly on random jets; the end-to-end
timing runs the full verification suites with each backend swapped in.
"""

import argparse
import time
from contextlib import contextmanager

import numpy as np

from bmetric import cone_of, kernels, make_conformal_surface, s1_extension_of
from bmetric import _kernels_py as python_backend
from bmetric.curvature import verify_theorems
from bmetric.tensor import _geometry

FUNCS = ("inverse_metric", "christoffel", "curvature", "nabla_endomorphism")


def random_jet(rng, n=3):
    a = rng.normal(size=(n, n))
    g = a + a.T + np.diag([4.0, 4.0, -4.0][:n])
    dg = rng.normal(size=(n, n, n))
    dg = dg + np.transpose(dg, (0, 2, 1))
    ddg = rng.normal(size=(n, n, n, n))
    ddg = ddg + np.transpose(ddg, (1, 0, 2, 3)) + np.transpose(ddg, (0, 1, 3, 2))
    return g, dg, ddg


def time_call(fn, args, repeat):
    fn(*args)
    start = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - start) / repeat


@contextmanager
def use_backend(backend):
    saved = {name: getattr(kernels, name) for name in FUNCS}
    for name in FUNCS:
        setattr(kernels, name, getattr(backend, name))
    _geometry.cache_clear()
    try:
        yield
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)
        _geometry.cache_clear()


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=2000)
    parser.add_argument("--points", type=int, default=40)
    args = parser.parse_args(argv)

    backends = [("python", python_backend)]
    if kernels.compiled_backend is not None:
        backends.append(("compiled", kernels.compiled_backend))
    else:
        print("compiled backend not built; run `pip install -e .` first")

    rng = np.random.default_rng(0)
    g, dg, ddg = random_jet(rng)
    gamma = python_backend.christoffel(g, dg)[2]
    phi, dphi = rng.normal(size=(3, 3)), rng.normal(size=(3, 3, 3))
    calls = {
        "inverse_metric": (g,),
        "christoffel": (g, dg),
        "curvature": (g, dg, ddg),
        "nabla_endomorphism": (gamma, phi, dphi),
    }

    print(f"{'kernel':<22}" + "".join(f"{name:>14}" for name, _ in backends) + f"{'speedup':>10}")
    for fn_name, fn_args in calls.items():
        times = [time_call(getattr(b, fn_name), fn_args, args.repeat) for _, b in backends]
        speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else ""
        print(f"{fn_name:<22}" + "".join(f"{t * 1e6:12.2f}us" for t in times) + f" {speed}")

    surface = make_conformal_surface("0.3*u*v", "0.2*sin(u) + v^2")
    pts = [(0.5 + 0.05 * i, 0.01 * i, -0.02 * i) for i in range(args.points)]
    print(f"\nend-to-end verification, {args.points} points per construction")
    for name, backend in backends:
        with use_backend(backend):
            start = time.perf_counter()
            for build in (cone_of, s1_extension_of):
                report = verify_theorems(build(surface), pts)
                assert report.passed
            print(f"  {name:<10} {time.perf_counter() - start:8.3f}s")


if __name__ == "__main__":
    main()
