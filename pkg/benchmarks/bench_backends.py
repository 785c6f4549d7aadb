"""Time the numba kernels against their numpy (or plain Python) fallbacks.

Run with ``python3 benchmarks/bench_backends.py [--repeat R]``.  Both
variants are imported directly, so the RUNCUBE_BACKEND setting does not
matter here.  The first numba call per kernel is a warm-up and is excluded.
"""
import argparse
import time

import numpy as np

from runcube import kernels
from runcube.graph import build_graph
from runcube.strings import Family, enumerate_vertices


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    for n in (14, 18, 22):
        labels = enumerate_vertices(Family.RUN, n)
        yield f"up_edges n={n}", lambda l=labels, n=n: kernels.up_edges_nb(l, n), lambda l=labels, n=n: kernels.up_edges_np(l, n)
    for n in (14, 18):
        g = build_graph(Family.RUN, n)
        src = np.arange(0, g.num_vertices, max(1, g.num_vertices // 64), dtype=np.int64)
        yield (f"eccentricities n={n} ({src.size} sources)",
               lambda g=g, s=src: kernels.ecc_nb(g.indptr, g.indices, s),
               lambda g=g, s=src: kernels.ecc_np(g.indptr, g.indices, s))
    for n in (10, 12):
        g = build_graph(Family.RUN, n)
        yield f"apsp n={n}", lambda g=g: kernels.apsp_nb(g.indptr, g.indices), lambda g=g: kernels.apsp_np(g.indptr, g.indices)
    for n in (8, 10):
        g = build_graph(Family.RUN, n)
        d = g.distance_matrix
        ex, ey = np.ascontiguousarray(g.edges[:, 0]), np.ascontiguousarray(g.edges[:, 1])
        yield f"theta n={n}", lambda: kernels.theta_nb(d, ex, ey), lambda: kernels.theta_np(d, ex, ey)
    for n in (6, 8):
        d = build_graph(Family.RUN, n).distance_matrix
        yield f"median_scan n={n}", lambda d=d: kernels.median_scan_nb(d), lambda d=d: kernels.median_scan_np(d)
    g = build_graph(Family.RUN, 10)
    parity = (g.weights % 2).astype(np.int64)
    prio = np.arange(g.num_vertices, dtype=np.int64)
    path = np.full(g.num_vertices, -1, dtype=np.int64)

    def ham(fn):
        return lambda: fn(g.indptr, g.indices, parity, prio, np.int64(0), False, np.int64(200_000), path)

    yield "hamilton path n=10", ham(kernels.ham_search_nb), ham(kernels.ham_search_py)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':42s} {'numba ms':>10s} {'fallback ms':>12s} {'speedup':>8s}")
    for name, fast, slow in cases():
        a, b = best_of(fast, args.repeat), best_of(slow, args.repeat)
        print(f"{name:42s} {a * 1e3:10.2f} {b * 1e3:12.2f} {b / a:8.1f}x")


if __name__ == "__main__":
    main()
