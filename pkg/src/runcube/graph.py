"""Explicit Fibonacci-run graphs and Fibonacci cubes."""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import CapacityError, DecompositionError, DomainError
from .series import fib
from .strings import Family, apex, enumerate_vertices, run_prefix, to_str

MAX_GRAPH_N = 30


@dataclass(frozen=True)
class VertexSet:
    family: Family
    n: int
    labels: np.ndarray

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def index(self, bits: int) -> int:
        """Rank of a label, or -1 when it is not a vertex."""
        pos = int(np.searchsorted(self.labels, bits))
        if pos < len(self) and int(self.labels[pos]) == bits:
            return pos
        return -1

    def __contains__(self, bits: int) -> bool:
        return self.index(int(bits)) >= 0

    def string(self, i: int) -> str:
        return to_str(int(self.labels[i]), self.n)


@dataclass(frozen=True, eq=False)
class CsrGraph:
    """Immutable adjacency; ``edges`` lists each edge once as (lower, upper) index."""

    vset: VertexSet
    indptr: np.ndarray
    indices: np.ndarray
    edges: np.ndarray = field(repr=False)

    @property
    def family(self) -> Family:
        return self.vset.family

    @property
    def n(self) -> int:
        return self.vset.n

    @property
    def num_vertices(self) -> int:
        return len(self.vset)

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @property
    def labels(self) -> np.ndarray:
        return self.vset.labels

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def weights(self) -> np.ndarray:
        """Hamming weight of every vertex label."""
        lab = self.labels
        w = np.zeros(lab.shape, dtype=np.int64)
        for b in range(self.n):
            w += (lab >> b) & 1
        return w

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        k = int(np.searchsorted(nb, j))
        return k < nb.shape[0] and int(nb[k]) == j

    def index_of(self, s: str) -> int:
        if len(s) != self.n:
            return -1
        return self.vset.index(int(s, 2) if s else 0)

    def distances_from(self, source: int) -> np.ndarray:
        return kernels.bfs(self.indptr, self.indices, source)

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        return kernels.apsp(self.indptr, self.indices)

    # -- export ------------------------------------------------------------

    def to_dot(self) -> str:
        name = "R" if self.family is Family.RUN else "Gamma"
        out = io.StringIO()
        out.write(f"graph {name}_{self.n} {{\n")
        for i in range(self.num_vertices):
            out.write(f'  "{self.vset.string(i)}";\n')
        for i, j in self.edges:
            out.write(f'  "{self.vset.string(int(i))}" -- "{self.vset.string(int(j))}";\n')
        out.write("}\n")
        return out.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "family": self.family.value,
                "n": self.n,
                "vertices": [self.vset.string(i) for i in range(self.num_vertices)],
                "edges": self.edges.tolist(),
            }
        )

    def to_csv(self) -> str:
        return "".join(
            f"{self.vset.string(int(i))},{self.vset.string(int(j))}\n" for i, j in self.edges
        )


def build_graph(family: Family | str, n: int) -> CsrGraph:
    """Induced subgraph of the ``n``-cube on the family's vertex set."""
    family = Family.parse(family)
    if n < 0:
        raise DomainError("n must be non-negative")
    if n > MAX_GRAPH_N:
        raise CapacityError(f"graphs are supported up to n = {MAX_GRAPH_N}")
    labels = enumerate_vertices(family, n)
    src, dst = kernels.up_edges(labels, n)
    indptr, indices = kernels.csr_from_edges(labels.shape[0], src, dst)
    edges = np.stack([src, dst], axis=1) if src.size else np.zeros((0, 2), dtype=np.int64)
    for arr in (indptr, indices, edges):
        arr.setflags(write=False)
    return CsrGraph(VertexSet(family, n, labels), indptr, indices, edges)


# --------------------------------------------------------------------------
# edge counts
# --------------------------------------------------------------------------


def fibcube_edge_count(n: int) -> int:
    """``|E(Gamma_n)| = (2(n+1) f_n + n f_(n+1)) / 5``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    num = 2 * (n + 1) * fib(n) + n * fib(n + 1)
    assert num % 5 == 0
    return num // 5


_SMALL_RUN_EDGES = {1: 1, 2: 2, 3: 5, 4: 10}


def edge_count_closed_form(n: int) -> int:
    """``|E(R_n)|`` from ``(3n + 4) f_(n-6) + (5n + 6) f_(n-5)`` (tabulated below 5)."""
    if n < 1:
        raise DomainError("closed form is defined for n >= 1")
    if n in _SMALL_RUN_EDGES:
        return _SMALL_RUN_EDGES[n]
    return (3 * n + 4) * fib(n - 6) + (5 * n + 6) * fib(n - 5)


def edge_count_difference(n: int) -> int:
    """``|E(Gamma_n)| - |E(Gamma_(n-4))|``, valid for n >= 5."""
    return fibcube_edge_count(n) - fibcube_edge_count(n - 4)


@dataclass
class RecursionReport:
    n_max: int
    counts: dict[int, int]
    first_failure: int | None = None

    @property
    def ok(self) -> bool:
        return self.first_failure is None


def edge_recursion_check(n_max: int, counts: dict[int, int] | None = None) -> RecursionReport:
    """Check ``e_n = e_(n-1) + e_(n-2) + f_(n-1) + f_(n-3)`` on brute-force edge counts."""
    if n_max < 4:
        raise DomainError("n_max must be at least 4")
    counts = dict(counts or {})
    for n in range(2, n_max + 1):
        if n not in counts:
            counts[n] = build_graph(Family.RUN, n).edge_count
    report = RecursionReport(n_max, counts)
    for n in range(4, n_max + 1):
        if counts[n] != counts[n - 1] + counts[n - 2] + fib(n - 1) + fib(n - 3):
            report.first_failure = n
            break
    return report


# --------------------------------------------------------------------------
# decomposition
# --------------------------------------------------------------------------


@dataclass
class Part:
    k: int
    prefix: str
    size: int
    rest: int  # the part is prefix + R_rest


@dataclass
class DecompositionReport:
    n: int
    parts: list[Part]
    apex: str
    apex_neighbors: list[str]
    internal_edges: dict[int, int]
    cross_edges: dict[tuple[int, int], int]
    edge_count: int

    def formula(self) -> str:
        """The partition written as ``0R_{n-1} + 100R_{n-3} + ... + apexR_0``."""
        terms = [f"{p.prefix}R_{p.rest}" for p in self.parts]
        terms.append(f"{self.apex}R_0")
        return " + ".join(terms)


APEX = -1  # part id used for the apex vertex


def _part_of(bits: int, n: int) -> int:
    if bits == apex(n):
        return APEX
    k = 0
    while k < n and (bits >> (n - 1 - k)) & 1:
        k += 1
    return k


def decompose(g: CsrGraph) -> DecompositionReport:
    """Split ``R_n`` by leading block ``1^k 0^(k+1)`` and audit every count.

    Raises :class:`DecompositionError` if any part size, cross-edge count or
    the apex neighbourhood disagrees with the predicted structure.
    """
    if g.family is not Family.RUN:
        raise DomainError("decomposition applies to the run family")
    n = g.n
    if n < 1:
        raise DomainError("decomposition needs n >= 1")
    top = (n + 1) // 2
    labels = g.labels
    part_ids = np.array([_part_of(int(b), n) for b in labels], dtype=np.int64)

    parts = []
    for k in range(top):
        rest = n - 2 * k - 1
        prefix = "0" if k == 0 else "1" * k + "0" * (k + 1)
        size = int((part_ids == k).sum())
        expected = fib(rest + 2)
        if size != expected:
            raise DecompositionError(f"part {k} ({prefix}) has {size} vertices, expected {expected}")
        # every member must literally carry the prefix
        members = labels[part_ids == k]
        want = 0 if k == 0 else run_prefix(k)
        if ((members >> rest) != want).any():
            raise DecompositionError(f"part {k} contains a vertex without prefix {prefix}")
        parts.append(Part(k, prefix, size, rest))
    if (part_ids == APEX).sum() != 1:
        raise DecompositionError("apex vertex missing")
    if sum(p.size for p in parts) + 1 != g.num_vertices:
        raise DecompositionError("parts do not cover the vertex set")

    internal: dict[int, int] = {}
    cross: dict[tuple[int, int], int] = {}
    for i, j in g.edges:
        a, b = int(part_ids[i]), int(part_ids[j])
        if a == b:
            internal[a] = internal.get(a, 0) + 1
        else:
            key = (min(a, b), max(a, b)) if APEX not in (a, b) else (APEX, a if b == APEX else b)
            cross[key] = cross.get(key, 0) + 1

    def _fail(msg):
        raise DecompositionError(msg, parts)

    for p in parts:
        want = build_edge_count(p.rest)
        if internal.get(p.k, 0) != want:
            _fail(f"part {p.k} has {internal.get(p.k, 0)} internal edges, expected {want}")

    expected_cross: dict[tuple[int, int], int] = {}
    for k in range(1, top):
        expected_cross[(0, k)] = expected_cross.get((0, k), 0) + fib(n - 2 * k + 1)
        if k + 1 < top:
            expected_cross[(k, k + 1)] = fib(n - 2 * k - 1)

    a_bits = apex(n)
    c, f = top, n // 2
    named = {((1 << (c - 1)) - 1) << (f + 1), ((1 << (c - 1)) - 1) << f}
    apex_nb = sorted(int(labels[j]) for j in g.neighbors(g.vset.index(a_bits)))
    if set(apex_nb) != named:
        _fail(f"apex neighbours {apex_nb} differ from {sorted(named)}")
    for nb in named:
        part = _part_of(nb, n)
        expected_cross[(APEX, part)] = expected_cross.get((APEX, part), 0) + 1

    if cross != expected_cross:
        bad = sorted(k for k in set(cross) | set(expected_cross) if cross.get(k) != expected_cross.get(k))
        _fail(f"cross-edge counts disagree on part pairs {bad}")

    total = sum(internal.values()) + sum(cross.values())
    if total != g.edge_count:
        _fail("edge totals do not add up")

    return DecompositionReport(
        n=n,
        parts=parts,
        apex=to_str(a_bits, n),
        apex_neighbors=[to_str(b, n) for b in apex_nb],
        internal_edges=internal,
        cross_edges=cross,
        edge_count=g.edge_count,
    )


def build_edge_count(n: int) -> int:
    """Brute-force ``|E(R_n)|`` (``0`` for ``n = 0``)."""
    return build_graph(Family.RUN, n).edge_count


def decomposition_edge_total(n: int) -> int:
    """Edge total assembled from the part sizes: internal + cross + two apex edges.

    Uses brute-force counts for the smaller graphs, so it checks the
    assembly rather than re-deriving the same number.
    """
    if n < 5:
        raise DomainError("the assembled total is stated for n >= 5")
    top = (n + 1) // 2
    total = sum(build_edge_count(n - 2 * k - 1) for k in range(top))
    total += fib(n - 1)  # |V(R_(n-3))|
    total += 2 * sum(fib(n - 2 * k + 1) for k in range(2, top))
    return total + 2


# --------------------------------------------------------------------------
# the injection into 0R_(n-1)
# --------------------------------------------------------------------------


@dataclass
class InjectionResult:
    ok: bool
    counterexample: tuple[str, ...] | None = None


def injection_image(bits: int, n: int) -> int:
    """Image of a vertex with leading 1: the same word with that 1 cleared."""
    return bits & ~(1 << (n - 1))


def injection_phi_check(g: CsrGraph) -> InjectionResult:
    """Exhaustively audit the map from vertices with a leading 1 into ``0R_(n-1)``."""
    if g.family is not Family.RUN:
        raise DomainError("the injection is defined on the run family")
    n = g.n
    if n < 2:
        raise DomainError("needs n >= 2")
    top = (n + 1) // 2
    labels = g.labels
    lead = 1 << (n - 1)
    domain = [i for i in range(g.num_vertices) if int(labels[i]) & lead]
    image: dict[int, int] = {}
    seen: dict[int, int] = {}
    for i in domain:
        bits = int(labels[i])
        if bits == apex(n):
            target = ((1 << (top - 1)) - 1) << (n // 2)
        else:
            k = _part_of(bits, n)
            rest_bits = bits & ((1 << (n - 2 * k - 1)) - 1)
            target = (((1 << (k - 1)) - 1) << (k + 1) << (n - 2 * k - 1)) | rest_bits
        j = g.vset.index(target)
        s = to_str(bits, n)
        if j < 0:
            return InjectionResult(False, (s, to_str(target, n), "image not a vertex"))
        if target & lead:
            return InjectionResult(False, (s, to_str(target, n), "image outside 0R_(n-1)"))
        if j in seen:
            return InjectionResult(False, (s, g.vset.string(seen[j]), "not injective"))
        if not g.has_edge(i, j):
            return InjectionResult(False, (s, to_str(target, n), "image not adjacent"))
        seen[j] = i
        image[i] = j
    for a in domain:
        for b in domain:
            if a < b and g.has_edge(a, b) != g.has_edge(image[a], image[b]):
                return InjectionResult(
                    False, (g.vset.string(a), g.vset.string(b), "adjacency not preserved")
                )
    return InjectionResult(True)


def bfs_connected(g: CsrGraph) -> bool:
    if g.num_vertices == 0:
        return True
    return bool((g.distances_from(0) >= 0).all())


def is_isomorphic_small(g: CsrGraph, h: CsrGraph, max_vertices: int = 16) -> bool:
    """Backtracking isomorphism test for tiny graphs, pruned by degree."""
    nv = g.num_vertices
    if nv != h.num_vertices or g.edge_count != h.edge_count:
        return False
    if nv > max_vertices:
        raise CapacityError(f"isomorphism test limited to {max_vertices} vertices")
    dg, dh = g.degrees, h.degrees
    if sorted(dg.tolist()) != sorted(dh.tolist()):
        return False
    order = sorted(range(nv), key=lambda v: -int(dg[v]))
    image = [-1] * nv
    used = [False] * nv

    def extend(pos: int) -> bool:
        if pos == nv:
            return True
        v = order[pos]
        for w in range(nv):
            if used[w] or dh[w] != dg[v]:
                continue
            if all(g.has_edge(v, u) == h.has_edge(w, image[u]) for u in order[:pos]):
                image[v], used[w] = w, True
                if extend(pos + 1):
                    return True
                image[v], used[w] = -1, False
        return False

    return extend(0)
