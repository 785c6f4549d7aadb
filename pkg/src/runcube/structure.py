"""Partial cubes, median graphs, subcube census and independence number."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapacityError, DomainError
from .graph import CsrGraph
from .series import BiPoly
from .strings import Family, popcount, to_str

CENSUS_MAX_N = 18


def _edge(g: CsrGraph, e: int) -> tuple[int, int]:
    x, y = g.edges[e]
    return int(x), int(y)


def theta(g: CsrGraph, e1: int, e2: int, dist: np.ndarray | None = None) -> bool:
    """Djokovic-Winkler relation: ``d(x,u) = d(y,v)`` and ``d(x,v) = d(y,u)``."""
    x, y = _edge(g, e1)
    u, v = _edge(g, e2)
    if dist is None:
        dx, dy = g.distances_from(x), g.distances_from(y)
        return dx[u] == dy[v] and dx[v] == dy[u]
    return dist[x, u] == dist[y, v] and dist[x, v] == dist[y, u]


def theta_by_vertices(g: CsrGraph, xy: tuple[str, str], uv: tuple[str, str]) -> bool:
    x, y = (g.index_of(s) for s in xy)
    u, v = (g.index_of(s) for s in uv)
    if min(x, y, u, v) < 0 or not (g.has_edge(x, y) and g.has_edge(u, v)):
        raise DomainError("both pairs must be edges of the graph")
    D = g.distance_matrix
    return bool(D[x, u] == D[y, v] and D[x, v] == D[y, u])


def is_bipartite(g: CsrGraph) -> bool:
    # every edge flips exactly one bit, so Hamming-weight parity is a 2-colouring
    w = g.weights
    return bool((w[g.edges[:, 0]] % 2 != w[g.edges[:, 1]] % 2).all())


def theta_matrix(g: CsrGraph) -> np.ndarray:
    ex = np.ascontiguousarray(g.edges[:, 0])
    ey = np.ascontiguousarray(g.edges[:, 1])
    return kernels.theta_matrix(g.distance_matrix, ex, ey)


@dataclass
class PartialCubeResult:
    is_partial_cube: bool
    witness: tuple[int, int, int] | None = None  # edge ids e1 theta e2 theta e3, not e1 theta e3

    def witness_strings(self, g: CsrGraph) -> list[tuple[str, str]] | None:
        if self.witness is None:
            return None
        return [tuple(g.vset.string(v) for v in _edge(g, e)) for e in self.witness]


def is_partial_cube(g: CsrGraph) -> PartialCubeResult:
    """Bipartite and theta transitive, with a violating edge triple on failure."""
    if not is_bipartite(g):
        return PartialCubeResult(False)
    if g.edge_count == 0:
        return PartialCubeResult(True)
    M = theta_matrix(g)
    Mi = M.astype(np.int32)
    two_step = (Mi @ Mi) > 0
    bad = two_step & ~M
    if not bad.any():
        return PartialCubeResult(True)
    e1, e3 = (int(v) for v in np.argwhere(bad)[0])
    e2 = int(np.flatnonzero(M[e1] & M[:, e3])[0])
    return PartialCubeResult(False, (e1, e2, e3))


def is_hamming_isometric(g: CsrGraph) -> bool:
    """Graph distance equals Hamming distance of the labels for every pair."""
    lab = g.labels
    x = lab[:, None] ^ lab[None, :]
    ham = np.zeros(x.shape, dtype=np.int32)
    for b in range(g.n):
        ham += ((x >> b) & 1).astype(np.int32)
    return bool((ham == g.distance_matrix).all())


def median_count(g: CsrGraph, u: int, v: int, w: int) -> int:
    D = g.distance_matrix
    ok = (
        (D[u] + D[v] == D[u, v])
        & (D[v] + D[w] == D[v, w])
        & (D[u] + D[w] == D[u, w])
    )
    return int(ok.sum())


@dataclass
class MedianResult:
    is_median: bool
    witness: tuple[int, int, int] | None = None
    medians_at_witness: int | None = None
    method: str = "exhaustive"


def is_median_graph(g: CsrGraph, fast_path: bool = True) -> MedianResult:
    """Every vertex triple has exactly one median.

    When the labels embed isometrically in the hypercube, a triple's only
    possible median is the bitwise majority, so only its membership is
    checked.  Otherwise every candidate vertex is counted.
    """
    if not is_bipartite(g):
        raise DomainError("median test expects a bipartite graph")
    if fast_path and is_hamming_isometric(g):
        lab = g.labels
        nv = g.num_vertices
        members = set(lab.tolist())
        for i in range(nv):
            a = int(lab[i])
            for j in range(i + 1, nv):
                b = int(lab[j])
                for k in range(j + 1, nv):
                    c = int(lab[k])
                    maj = (a & b) | (a & c) | (b & c)
                    if maj not in members:
                        return MedianResult(False, (i, j, k), 0, "majority")
        return MedianResult(True, method="majority")
    u, v, w, count = kernels.median_scan(g.distance_matrix)
    if u < 0:
        return MedianResult(True)
    return MedianResult(False, (int(u), int(v), int(w)), int(count))


# --------------------------------------------------------------------------
# subcube census
# --------------------------------------------------------------------------


@dataclass
class CubeCensus:
    n: int
    counts: dict[tuple[int, int], int]  # (distance to 0^n, dimension) -> number of Q_k
    # same cubes keyed by (down-degree of the top vertex - k, k)
    slack_counts: dict[tuple[int, int], int] = field(default_factory=dict)
    structural_ok: bool = True
    notes: list[str] = field(default_factory=list)

    def polynomial(self) -> BiPoly:
        """Census as a polynomial in (q, x): exponent pair (distance, dimension)."""
        return BiPoly(self.counts)

    def slack_polynomial(self) -> BiPoly:
        return BiPoly(self.slack_counts)

    def by_dimension(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (_, k), c in self.counts.items():
            out[k] = out.get(k, 0) + c
        return dict(sorted(out.items()))

    def format(self, slack: bool = False) -> str:
        """Grouped by powers of x, e.g. ``1 + 3q + q^2 + (3 + 2q)x + x^2``."""
        return format_qx(self.slack_counts if slack else self.counts)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"q": d, "x": k, "count": c} for (d, k), c in sorted(self.counts.items())],
            "structural_ok": self.structural_ok,
        }


def format_qx(counts: dict[tuple[int, int], int]) -> str:
    """Render ``{(d, k): c}`` grouped by powers of x."""
    by_k: dict[int, dict[int, int]] = {}
    for (d, k), c in counts.items():
        by_k.setdefault(k, {})[d] = c
    out = []
    for k in sorted(by_k):
        inner = []
        for d in sorted(by_k[k]):
            c = by_k[k][d]
            if d == 0:
                inner.append(str(c))
            else:
                q = "q" if d == 1 else f"q^{d}"
                inner.append(q if c == 1 else f"{c}{q}")
        x = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        if k == 0:
            out.append(" + ".join(inner))
        elif len(inner) == 1:
            body = inner[0]
            out.append(x if body == "1" else f"{body}{x}")
        else:
            out.append(f"({' + '.join(inner)}){x}")
    return " + ".join(out)


def cube_census(g: CsrGraph) -> CubeCensus:
    """Count induced subcubes by brute force over (top vertex, flip set) pairs.

    A pair ``(v, S)`` spans a ``Q_|S|`` iff every way of clearing a subset of
    ``S`` in ``v`` lands on a vertex.  Subsets are grown by popcount and a set
    is only tested when all its one-smaller subsets passed.
    """
    if g.family is not Family.RUN:
        raise DomainError("the census is stated for the run family")
    if g.n > CENSUS_MAX_N:
        raise CapacityError(f"census limited to n <= {CENSUS_MAX_N}")
    members = set(int(b) for b in g.labels)
    counts: dict[tuple[int, int], int] = {}
    slack: dict[tuple[int, int], int] = {}
    structural_ok = True
    notes = []
    for v in sorted(members):
        ones = [1 << b for b in range(g.n) if v >> b & 1]
        w = len(ones)
        singles = [bit for bit in ones if v ^ bit in members]
        valid = {0}
        layer = {0}
        found = [0]
        while layer:
            nxt = set()
            for S in layer:
                for bit in ones:
                    if S & bit or (S | bit) in nxt:
                        continue
                    T = S | bit
                    if v ^ T not in members:
                        continue
                    rest = T
                    good = True
                    while rest:
                        low = rest & -rest
                        rest ^= low
                        if (T ^ low) not in valid:
                            good = False
                            break
                    if good:
                        nxt.add(T)
            valid |= nxt
            found.extend(nxt)
            layer = nxt
        for S in found:
            k = popcount(S)
            key = (w - k, k)
            counts[key] = counts.get(key, 0) + 1
            key = (len(singles) - k, k)
            slack[key] = slack.get(key, 0) + 1
        single_mask = sum(singles)
        # every valid flip set should be a subset of the individually flippable ones, and all of those subsets valid
        if any(S & ~single_mask for S in found) or len(found) != 1 << len(singles):
            structural_ok = False
            notes.append(to_str(v, g.n))
    return CubeCensus(g.n, counts, slack, structural_ok, notes)


# --------------------------------------------------------------------------
# independence number
# --------------------------------------------------------------------------


def _hopcroft_karp(adj: list[list[int]], n_right: int) -> int:
    """Maximum matching of a bipartite graph given as left-side adjacency lists."""
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    for u in range(n_left):  # greedy maximal start, fixed order
        for w in adj[u]:
            if match_r[w] < 0:
                match_l[u], match_r[w] = w, u
                break
    while True:
        dist = [-1] * n_left
        q = deque(u for u in range(n_left) if match_l[u] < 0)
        for u in q:
            dist[u] = 0
        free_reached = False
        while q:
            u = q.popleft()
            for w in adj[u]:
                m = match_r[w]
                if m < 0:
                    free_reached = True
                elif dist[m] < 0:
                    dist[m] = dist[u] + 1
                    q.append(m)
        if not free_reached:
            break
        ptr = [0] * n_left
        for root in range(n_left):
            if match_l[root] >= 0:
                continue
            stack, chosen = [root], []
            while stack:
                u = stack[-1]
                if ptr[u] == len(adj[u]):
                    dist[u] = -2  # dead for this phase
                    stack.pop()
                    if chosen:
                        chosen.pop()
                    continue
                w = adj[u][ptr[u]]
                ptr[u] += 1
                m = match_r[w]
                if m < 0:
                    chosen.append(w)
                    for a, b in zip(stack, chosen):
                        match_l[a], match_r[b] = b, a
                    break
                if dist[m] == dist[u] + 1:
                    chosen.append(w)
                    stack.append(m)
    return sum(1 for m in match_l if m >= 0)


def maximum_matching_size(g: CsrGraph) -> int:
    if not is_bipartite(g):
        raise DomainError("matching routine expects a bipartite graph")
    even = g.weights % 2 == 0
    left = np.flatnonzero(even)
    right = np.flatnonzero(~even)
    rank = np.full(g.num_vertices, -1, dtype=np.int64)
    rank[right] = np.arange(right.size)
    adj = [rank[g.neighbors(int(u))].tolist() for u in left]
    return _hopcroft_karp(adj, int(right.size))


def independence_number(g: CsrGraph) -> int:
    """``|V| - nu(G)`` (Konig), exact for bipartite graphs."""
    if not is_bipartite(g):
        raise DomainError("independence number via matching needs a bipartite graph")
    if g.n > 16:
        raise CapacityError("independence number is limited to n <= 16")
    return g.num_vertices - maximum_matching_size(g)
