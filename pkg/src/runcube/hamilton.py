"""Hamiltonian cycles and paths by pruned backtracking."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .analysis import parity_imbalance
from .graph import CsrGraph

YES, NO, TIMEOUT = "yes", "no", "timeout"
DEFAULT_BUDGET = 10**9
_FIRST_SLICE = 4096


def default_budget() -> int:
    raw = os.environ.get("RUNCUBE_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass
class HamiltonResult:
    n: int
    has_cycle: str | None = None
    has_path: str | None = None
    certificate: list[int] | None = None
    obstruction: str | None = None
    expansions: int = 0
    starts_tried: int = 0
    labels: list[str] = field(default_factory=list, repr=False)

    @property
    def mode(self) -> str:
        return "cycle" if self.has_cycle is not None else "path"

    @property
    def answer(self) -> str:
        return self.has_cycle if self.has_cycle is not None else self.has_path

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "answer": self.answer,
            "obstruction": self.obstruction,
            "expansions": self.expansions,
            "certificate": self.labels or None,
        }


def _parity(g: CsrGraph) -> np.ndarray:
    return (g.weights % 2).astype(np.int64)


def _finish(g: CsrGraph, res: HamiltonResult, path: np.ndarray) -> HamiltonResult:
    res.certificate = [int(v) for v in path]
    res.labels = [g.vset.string(v) for v in res.certificate]
    return res


def _rounds(g: CsrGraph, variants, cycle: bool, budget: int):
    """Round-robin the searches in ``variants`` with a doubling allowance.

    Each variant is a ``(start, prio)`` pair and is a complete search on its
    own, so one exhausted variant settles ``no`` for the cycle question.
    Returns ``(status, path, expansions, variants_run)``.
    """
    parity = _parity(g)
    path = np.full(g.num_vertices, -1, dtype=np.int64)
    pending = list(variants)
    spent, allowance, ran = 0, _FIRST_SLICE, set()
    while pending and spent < budget:
        survivors = []
        for idx, (start, prio) in pending:
            grant = min(allowance, budget - spent)
            if grant <= 0:
                survivors.append((idx, (start, prio)))
                continue
            status, used = kernels.ham_search(
                g.indptr, g.indices, parity, prio, np.int64(start), cycle, np.int64(grant), path
            )
            spent += int(used)
            ran.add(idx)
            if status == kernels.FOUND:
                return kernels.FOUND, path, spent, len(ran)
            if status == kernels.EXHAUSTED and cycle:
                return kernels.EXHAUSTED, None, spent, len(ran)
            if status == kernels.OUT_OF_BUDGET:
                survivors.append((idx, (start, prio)))
        pending = survivors
        allowance *= 2
    status = kernels.OUT_OF_BUDGET if pending else kernels.EXHAUSTED
    return status, None, spent, len(ran)


def _by_degree(g: CsrGraph, members: np.ndarray) -> np.ndarray:
    return members[np.lexsort((members, g.degrees[members]))]


def hamiltonian_cycle(
    g: CsrGraph, budget: int | None = None, variants: int = 32, seed: int = 0
) -> HamiltonResult:
    """Decide whether ``g`` has a Hamiltonian cycle.

    Unequal parity classes settle the question at once.  Otherwise several
    complete searches, rooted at low-degree vertices and with shuffled
    tie-breaking, share the budget; the first to finish decides.
    ``timeout`` means none finished.
    """
    budget = default_budget() if budget is None else int(budget)
    res = HamiltonResult(g.n, has_cycle=NO)
    delta = parity_imbalance(g.n)
    if delta != 0:
        res.obstruction = f"parity classes differ by {delta}"
        return res
    nv = g.num_vertices
    if nv < 3:
        res.obstruction = "fewer than three vertices"
        return res
    roots = _by_degree(g, np.arange(nv))
    rng = np.random.default_rng(seed)
    pool = []
    for i in range(min(variants, nv)):
        prio = np.arange(nv, dtype=np.int64) if i == 0 else rng.permutation(nv).astype(np.int64)
        pool.append((i, (int(roots[i]), prio)))
    status, path, res.expansions, res.starts_tried = _rounds(g, pool, True, budget)
    if status == kernels.FOUND:
        res.has_cycle = YES
        return _finish(g, res, path)
    res.has_cycle = NO if status == kernels.EXHAUSTED else TIMEOUT
    return res


def hamiltonian_path(g: CsrGraph, budget: int | None = None) -> HamiltonResult:
    """Decide whether ``g`` has a Hamiltonian path.

    Every Hamiltonian path has an endpoint in one known parity class: the
    larger class when they differ, the even class otherwise.  A search is
    rooted at each vertex of that class, and ``no`` needs all of them
    exhausted.
    """
    budget = default_budget() if budget is None else int(budget)
    res = HamiltonResult(g.n, has_path=NO)
    delta = parity_imbalance(g.n)
    if abs(delta) > 1:
        res.obstruction = f"parity classes differ by {abs(delta)}"
        return res
    nv = g.num_vertices
    if nv == 1:
        res.has_path = YES
        return _finish(g, res, np.zeros(1, dtype=np.int64))
    cls = 0 if delta >= 0 else 1
    starts = _by_degree(g, np.flatnonzero(g.weights % 2 == cls))
    prio = np.arange(nv, dtype=np.int64)
    pool = [(i, (int(s), prio)) for i, s in enumerate(starts)]
    status, path, res.expansions, res.starts_tried = _rounds(g, pool, False, budget)
    if status == kernels.FOUND:
        res.has_path = YES
        return _finish(g, res, path)
    res.has_path = NO if status == kernels.EXHAUSTED else TIMEOUT
    return res


def certificate_verify(g: CsrGraph, result: HamiltonResult) -> bool:
    """Check the certificate against the graph's adjacency, ignoring the search."""
    cert = result.certificate
    if not cert:
        return False
    nv = g.num_vertices
    if len(cert) != nv or len(set(cert)) != nv or min(cert) < 0 or max(cert) >= nv:
        return False
    pairs = list(zip(cert, cert[1:]))
    if result.mode == "cycle":
        if nv < 3:
            return False
        pairs.append((cert[-1], cert[0]))
    return all(g.has_edge(a, b) for a, b in pairs)
