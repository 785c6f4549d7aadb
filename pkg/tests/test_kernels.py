"""The numba and numpy kernel variants must agree exactly."""
import os
import subprocess
import sys

import numpy as np
import pytest

from runcube import kernels
from runcube.graph import build_graph
from runcube.strings import enumerate_vertices

CASES = [(fam, n) for fam in ("run", "fibcube") for n in (0, 1, 2, 5, 9, 13)]


@pytest.mark.parametrize("fam, n", CASES)
def test_up_edges(fam, n):
    labels = np.ascontiguousarray(enumerate_vertices(fam, n))
    a = kernels.up_edges_nb(labels, n)
    b = kernels.up_edges_np(labels, n)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@pytest.mark.parametrize("fam, n", CASES)
def test_bfs_ecc_apsp(fam, n):
    g = build_graph(fam, n)
    for s in {0, g.num_vertices - 1, g.num_vertices // 2}:
        assert np.array_equal(kernels.bfs_nb(g.indptr, g.indices, s), kernels.bfs_np(g.indptr, g.indices, s))
    src = np.arange(g.num_vertices, dtype=np.int64)
    e1, f1 = kernels.ecc_nb(g.indptr, g.indices, src)
    e2, f2 = kernels.ecc_np(g.indptr, g.indices, src)
    assert np.array_equal(e1, e2)
    D = kernels.apsp_nb(g.indptr, g.indices)
    assert np.array_equal(D, kernels.apsp_np(g.indptr, g.indices))
    # far vertices may differ on ties but must realise the eccentricity
    assert np.array_equal(D[src, f1], e1) and np.array_equal(D[src, f2], e2)


def test_bfs_marks_unreached():
    # two components: edge 0-1 and isolated vertex 2
    indptr = np.array([0, 1, 2, 2], dtype=np.int64)
    indices = np.array([1, 0], dtype=np.int32)
    for fn in (kernels.bfs_nb, kernels.bfs_np):
        assert fn(indptr, indices, 0).tolist() == [0, 1, kernels.UNREACHED]
    for fn in (kernels.ecc_nb, kernels.ecc_np):
        assert fn(indptr, indices, np.array([0], dtype=np.int64))[0][0] == -1


@pytest.mark.parametrize("fam, n", [("run", 4), ("run", 7), ("run", 9), ("fibcube", 6)])
def test_theta(fam, n):
    g = build_graph(fam, n)
    ex = np.ascontiguousarray(g.edges[:, 0])
    ey = np.ascontiguousarray(g.edges[:, 1])
    D = g.distance_matrix
    assert np.array_equal(kernels.theta_nb(D, ex, ey), kernels.theta_np(D, ex, ey))


@pytest.mark.parametrize("fam, n", [(f, n) for f in ("run", "fibcube") for n in range(1, 9)])
def test_median_scan(fam, n):
    D = build_graph(fam, n).distance_matrix
    a = tuple(int(v) for v in kernels.median_scan_nb(D))
    b = tuple(int(v) for v in kernels.median_scan_np(D))
    assert a == b


def test_csr_symmetric_sorted():
    g = build_graph("run", 8)
    for i in range(g.num_vertices):
        nb = g.neighbors(i)
        assert (np.diff(nb) > 0).all()


def _run(code, backend):
    env = dict(os.environ, RUNCUBE_BACKEND=backend)
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)


def test_env_flag_selects_backend():
    code = "import runcube.kernels as k; print(k.BACKEND, k.bfs is k.bfs_np, k.ham_search is k.ham_search_py)"
    assert _run(code, "numpy").stdout.split() == ["numpy", "True", "True"]
    assert _run(code, "numba").stdout.split() == ["numba", "False", "False"]
    bad = _run(code, "fortran")
    assert bad.returncode != 0 and "RUNCUBE_BACKEND" in bad.stderr


def test_numpy_backend_end_to_end():
    code = (
        "from runcube import build_graph, exact_diameter, is_partial_cube;"
        "g = build_graph('run', 9);"
        "print(g.edge_count, exact_diameter(g).diameter, is_partial_cube(g).is_partial_cube)"
    )
    out = _run(code, "numpy")
    assert out.returncode == 0, out.stderr
    assert out.stdout.split() == ["215", "8", "False"]
