"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot kernels (Laplacian apply, gradient form) on square
lattices of increasing size, plus a fixed ground-state solve routed
through each backend. Run as::

    python benchmarks/bench_kernels.py [--sizes 100,200,400] [--repeats 20]
"""

import argparse
import time

import numpy as np

import graphbiharm as gb
from graphbiharm._kernels import _ref

try:
    from graphbiharm._kernels import _core
except ImportError:
    _core = None


def _time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(sizes, repeats):
    rows = []
    for n in sizes:
        g = gb.grid_graph(n, n)
        rng = np.random.default_rng(0)
        u = rng.standard_normal(g.n_vertices)
        v = rng.standard_normal(g.n_vertices)
        args = (g.indptr, g.indices, g.weights, g.row, g.mu)
        for name, mod in [("numpy", _ref)] + ([("cython", _core)] if _core else []):
            t_lap = _time(lambda: mod.laplacian(*args, u), repeats)
            t_gam = _time(lambda: mod.gradient_form(*args, u, v), repeats)
            rows.append((f"{n}x{n}", g.n_vertices, name, t_lap, t_gam))
    print(f"{'grid':>8} {'vertices':>9} {'backend':>8} {'laplacian':>12} {'grad_form':>12}")
    for grid, nv, name, t_lap, t_gam in rows:
        print(f"{grid:>8} {nv:>9} {name:>8} {t_lap * 1e6:>10.1f}us {t_gam * 1e6:>10.1f}us")
    if _core:
        by = {}
        for grid, nv, name, t_lap, t_gam in rows:
            by.setdefault(grid, {})[name] = (t_lap, t_gam)
        for grid, d in by.items():
            s_lap = d["numpy"][0] / d["cython"][0]
            s_gam = d["numpy"][1] / d["cython"][1]
            print(f"{grid}: cython speedup {s_lap:.1f}x (laplacian), {s_gam:.1f}x (grad_form)")
    else:
        print("compiled backend not built; numpy fallback only")


def bench_solve(n, repeats):
    import warnings

    import graphbiharm._kernels as kernels

    g = gb.grid_graph(n, n)
    well = {f"{i}_{j}" for i in range(n // 2 - 1, n // 2 + 2)
            for j in range(n // 2 - 1, n // 2 + 2)}
    a = gb.make_potential(g, {l: (0.0 if l in well else 1.0) for l in g.labels})
    params = gb.ProblemParams(a=a, lam=100.0, p=4.0)
    cfg = gb.SolverConfig(n_starts=2)
    backends = [("numpy", _ref)] + ([("cython", _core)] if _core else [])
    print(f"\nground-state solve on {n}x{n} (2 starts, lam=100):")
    for name, mod in backends:
        kernels.laplacian = mod.laplacian
        kernels.gradient_form = mod.gradient_form
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            t = _time(lambda: gb.solve_ground_state(g, params, cfg), max(1, repeats // 5))
        print(f"  {name:>8}: {t * 1e3:.1f} ms")
    # restore the default backend
    kernels.laplacian = kernels._impl.laplacian
    kernels.gradient_form = kernels._impl.gradient_form


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="50,100,200")
    ap.add_argument("--repeats", type=int, default=20)
    ap.add_argument("--solve-size", type=int, default=31)
    args = ap.parse_args()
    bench_kernels([int(s) for s in args.sizes.split(",")], args.repeats)
    bench_solve(args.solve_size, args.repeats)
