"""Distances, diameters, degree statistics and limiting ratios."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapacityError
from .graph import CsrGraph, build_graph, edge_count_closed_form, fibcube_edge_count
from .series import BiPoly, IntPoly, fib
from .strings import Family, count_by_weight, enumerate_vertices, is_run_vertex, to_str

ALL_SOURCE_MAX_N = 14


def bfs_distances(g: CsrGraph, source: int) -> np.ndarray:
    """Hop distances from ``source``; unreachable vertices hold ``-1``."""
    return g.distances_from(source)


# --------------------------------------------------------------------------
# diameter
# --------------------------------------------------------------------------


@dataclass
class DiameterResult:
    n: int
    diameter: int
    witness: tuple[int, int]
    method: str
    eccentricities: np.ndarray | None = field(default=None, repr=False)
    radius: int | None = None
    bfs_runs: int = 0


def _ecc_chunks(g: CsrGraph, sources: np.ndarray, workers: int):
    sources = np.ascontiguousarray(sources, dtype=np.int64)
    if workers <= 1 or sources.size < 2 * workers:
        return kernels.eccentricities(g.indptr, g.indices, sources)
    chunks = np.array_split(sources, workers)
    with ThreadPoolExecutor(workers) as pool:
        parts = list(pool.map(lambda c: kernels.eccentricities(g.indptr, g.indices, c), chunks))
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def all_eccentricities(g: CsrGraph, workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    return _ecc_chunks(g, np.arange(g.num_vertices), workers)


def _diameter_all_source(g: CsrGraph, workers: int) -> DiameterResult:
    ecc, far = all_eccentricities(g, workers)
    if (ecc < 0).any():
        raise ValueError("graph is disconnected")
    u = int(np.argmax(ecc))
    return DiameterResult(
        g.n, int(ecc[u]), (u, int(far[u])), "all-source", ecc, int(ecc.min()), g.num_vertices
    )


def double_sweep(g: CsrGraph, start: int = 0) -> tuple[int, int, int]:
    """Lower bound from two BFS passes: returns (bound, a, b) with d(a, b) = bound."""
    d0 = g.distances_from(start)
    a = int(np.argmax(d0))
    da = g.distances_from(a)
    b = int(np.argmax(da))
    return int(da[b]), a, b


def _diameter_ifub(g: CsrGraph, workers: int, chunk: int = 64) -> DiameterResult:
    runs = 2
    lb, wa, wb = double_sweep(g)
    # root: midpoint of the sweep path is a good low-eccentricity guess
    da = g.distances_from(wa)
    db = g.distances_from(wb)
    mid = np.flatnonzero((da + db == lb) & (np.abs(da - db) <= 1))
    root = int(mid[0]) if mid.size else wa
    dist = g.distances_from(root)
    runs += 3
    if (dist < 0).any():
        raise ValueError("graph is disconnected")
    ecc_root = int(dist.max())
    if ecc_root > lb:
        lb, wa, wb = ecc_root, root, int(np.argmax(dist))
    degrees = g.degrees
    # Once every vertex beyond level i is done, unresolved pairs lie within
    # level i of the root and are at most 2i apart.
    i = ecc_root
    while i > 0 and lb < 2 * i:
        fringe = np.flatnonzero(dist == i)
        # descending degree, then index, for a deterministic visit order
        fringe = fringe[np.lexsort((fringe, -degrees[fringe]))]
        for s in range(0, fringe.size, chunk):
            block = fringe[s : s + chunk]
            ecc, far = _ecc_chunks(g, block, workers)
            runs += block.size
            k = int(np.argmax(ecc))
            if ecc[k] > lb:
                lb, wa, wb = int(ecc[k]), int(block[k]), int(far[k])
            if lb >= 2 * i:
                break
        i -= 1
    return DiameterResult(g.n, lb, (wa, wb), "ifub", bfs_runs=runs)


def exact_diameter(g: CsrGraph, workers: int = 1, method: str = "auto") -> DiameterResult:
    """Exact diameter.

    ``auto`` runs all-source BFS up to n = 14 (and then also reports the
    radius) and the iFUB fringe scheme beyond.
    """
    if g.num_vertices == 1:
        return DiameterResult(g.n, 0, (0, 0), "trivial", np.zeros(1, np.int32), 0, 0)
    if method == "auto":
        method = "all-source" if g.n <= ALL_SOURCE_MAX_N else "ifub"
    if method == "all-source":
        return _diameter_all_source(g, workers)
    if method == "ifub":
        return _diameter_ifub(g, workers)
    raise ValueError(f"unknown method {method!r}")


def _triangular_split(n: int) -> tuple[int, int]:
    """Largest ``r`` with ``(r^2 + 3r - 2)/2 <= n`` and the excess ``D``."""
    r = 1
    while ((r + 1) ** 2 + 3 * (r + 1) - 2) // 2 <= n:
        r += 1
    return r, n - (r * r + 3 * r - 2) // 2


def _alternating(r: int, first: str) -> str:
    other = "0" if first == "1" else "1"
    return "".join((first if j % 2 == 1 else other) * j for j in range(1, r + 1))


@dataclass(frozen=True)
class WitnessPair:
    u: str
    v: str
    claimed_distance: int
    r: int
    excess: int


def diameter_witness_pair(n: int) -> WitnessPair:
    """Two far-apart run vertices of length ``n`` from the staircase construction.

    Write ``n = (r^2 + 3r - 2)/2 + D`` with ``0 <= D <= r + 1``.  One word
    alternates blocks ``1 0^2 1^3 ...`` up to length ``r``, the other
    ``0 1^2 0^3 ...``; the word whose last block is ones gets a tail of
    ``D + r + 1`` zeros, the other a tail ``1^a 0^b`` with
    ``a = ceil((D + r - 1)/2)`` and ``b = floor((D + r + 3)/2)``.  Both words
    carry the trailing ``00``, which is dropped at the end.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    r, D = _triangular_split(n)
    a = (D + r) // 2  # ceil((D + r - 1) / 2)
    b = (D + r + 3) // 2
    zeros_tail = "0" * (D + r + 1)
    ones_tail = "1" * a + "0" * b
    starts_one = _alternating(r, "1")
    starts_zero = _alternating(r, "0")
    if r % 2 == 0:
        u, v = starts_one + ones_tail, starts_zero + zeros_tail
    else:
        u, v = starts_one + zeros_tail, starts_zero + ones_tail
    assert len(u) == len(v) == n + 2 and u.endswith("00") and v.endswith("00")
    return WitnessPair(u[:-2], v[:-2], n - (r + D - 1) // 2, r, D)


def conjectured_diameter(n: int) -> int:
    """``n - floor(sqrt(1 + n/2) - 3/4)`` in integer arithmetic.

    ``k <= sqrt(1 + n/2) - 3/4`` iff ``(4k + 3)^2 <= 16 + 8n``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k = (math.isqrt(16 + 8 * n) - 3) // 4
    return n - k


def diameter_lower_bound(n: int) -> float:
    return n - math.sqrt(2 * n)


# --------------------------------------------------------------------------
# degrees
# --------------------------------------------------------------------------


@dataclass
class DegreeProfile:
    up: np.ndarray
    down: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.up + self.down

    @staticmethod
    def _enumerator(values: np.ndarray) -> IntPoly:
        return IntPoly(np.bincount(values).tolist() if values.size else [])

    @property
    def down_enumerator(self) -> IntPoly:
        return self._enumerator(self.down)

    @property
    def up_enumerator(self) -> IntPoly:
        return self._enumerator(self.up)

    @property
    def degree_enumerator(self) -> IntPoly:
        return self._enumerator(self.total)

    @property
    def bivariate_enumerator(self) -> BiPoly:
        """Exponent pairs are ``(down, up)``."""
        out: dict[tuple[int, int], int] = {}
        for d, u in zip(self.down.tolist(), self.up.tolist()):
            out[(d, u)] = out.get((d, u), 0) + 1
        return BiPoly(out)


def degree_profile(g: CsrGraph) -> DegreeProfile:
    """Up/down degrees; each stored edge (lower, upper) is a 0->1 flip of the lower end."""
    nv = g.num_vertices
    src, dst = g.edges[:, 0], g.edges[:, 1]
    up = np.bincount(src, minlength=nv).astype(np.int64)
    down = np.bincount(dst, minlength=nv).astype(np.int64)
    return DegreeProfile(up, down)


def degree_profile_bitflip(g: CsrGraph) -> DegreeProfile:
    """Same profile by flipping every bit of every label and testing membership."""
    labels = g.labels
    up = np.zeros(labels.shape, dtype=np.int64)
    down = np.zeros(labels.shape, dtype=np.int64)
    for b in range(g.n):
        bit = np.int64(1) << np.int64(b)
        flipped = labels ^ bit
        pos = np.searchsorted(labels, flipped)
        pos = np.minimum(pos, labels.shape[0] - 1)
        member = labels[pos] == flipped
        has = (labels & bit) != 0
        down += member & has
        up += member & ~has
    return DegreeProfile(up, down)


# --------------------------------------------------------------------------
# parity and asymptotics
# --------------------------------------------------------------------------


def parity_imbalance(n: int) -> int:
    """Even-weight minus odd-weight vertex count of ``R_n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return sum((-1) ** w * count_by_weight(n, w) for w in range((n + 1) // 2 + 1))


def parity_imbalance_formula(n: int) -> int:
    if n % 3 == 1:
        return 0
    return -1 if n % 6 in (2, 3) else 1


def parity_imbalance_enumerated(n: int) -> int:
    labels = enumerate_vertices(Family.RUN, n)
    w = np.zeros(labels.shape, dtype=np.int64)
    for b in range(n):
        w += (labels >> b) & 1
    even = int((w % 2 == 0).sum())
    return even - (len(w) - even)


RATIO_MAX_N = 90
EDGE_RATIO_LIMIT = (3 * math.sqrt(5) - 5) / 2
FIBCUBE_DEGREE_LIMIT = 1 - 1 / math.sqrt(5)
RUN_DEGREE_LIMIT = 2 * (math.sqrt(5) - 2)


@dataclass
class RatioRow:
    n: int
    edge_ratio: float
    fibcube_avg_degree: float
    run_avg_degree: float


@dataclass
class RatioTable:
    rows: list[RatioRow]

    def gaps(self) -> dict[str, float]:
        last = self.rows[-1]
        return {
            "edge_ratio": abs(last.edge_ratio - EDGE_RATIO_LIMIT),
            "fibcube_avg_degree": abs(last.fibcube_avg_degree - FIBCUBE_DEGREE_LIMIT),
            "run_avg_degree": abs(last.run_avg_degree - RUN_DEGREE_LIMIT),
        }


def asymptotic_ratios(n_max: int) -> RatioTable:
    """Closed-form edge and average-degree ratios for ``1 <= n <= n_max``."""
    if n_max < 10:
        raise ValueError("n_max must be >= 10")
    if n_max > RATIO_MAX_N:
        raise CapacityError(f"n_max must be <= {RATIO_MAX_N} (int64 Fibonacci numbers)")
    rows = []
    for n in range(1, n_max + 1):
        e_run = edge_count_closed_form(n)
        e_fib = fibcube_edge_count(n)
        nv = fib(n + 2)
        rows.append(RatioRow(n, e_run / e_fib, 2 * e_fib / nv / n, 2 * e_run / nv / n))
    return RatioTable(rows)


def witness_strings(g: CsrGraph, res: DiameterResult) -> tuple[str, str]:
    a, b = res.witness
    return to_str(int(g.labels[a]), g.n), to_str(int(g.labels[b]), g.n)


def check_witness(pair: WitnessPair) -> bool:
    """Both words are run vertices and their Hamming distance is the claimed one."""
    ham = sum(x != y for x, y in zip(pair.u, pair.v))
    return is_run_vertex(pair.u) and is_run_vertex(pair.v) and ham == pair.claimed_distance
