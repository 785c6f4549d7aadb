"""Hot inner loops.

Every kernel exists twice: a loop form compiled with numba (``*_nb``) and a
numpy form (``*_np``).  The unsuffixed names dispatch on
:data:`runcube._backend.BACKEND`.  The Hamiltonian search has no sensible
vectorised form, so its numpy fallback is the same loop run by the
interpreter.
"""
from __future__ import annotations

import numpy as np

from ._backend import BACKEND, njit

UNREACHED = -1

# --------------------------------------------------------------------------
# adjacency
# --------------------------------------------------------------------------


def _up_edges_loop(labels, n):
    nv = labels.shape[0]
    cap = 16
    src = np.empty(cap, dtype=np.int64)
    dst = np.empty(cap, dtype=np.int64)
    m = 0
    for i in range(nv):
        x = labels[i]
        lo = i + 1
        for b in range(n):
            bit = np.int64(1) << b
            if x & bit:
                continue
            y = x | bit
            # y > x, so search right of i; bits ascend so y ascends too.
            hi = nv
            while lo < hi:
                mid = (lo + hi) >> 1
                if labels[mid] < y:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < nv and labels[lo] == y:
                if m == cap:
                    cap *= 2
                    src2 = np.empty(cap, dtype=np.int64)
                    dst2 = np.empty(cap, dtype=np.int64)
                    src2[:m] = src[:m]
                    dst2[:m] = dst[:m]
                    src, dst = src2, dst2
                src[m] = i
                dst[m] = lo
                m += 1
    return src[:m].copy(), dst[:m].copy()


up_edges_nb = njit(_up_edges_loop)


def up_edges_np(labels: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    labels = np.asarray(labels, dtype=np.int64)
    srcs, dsts = [], []
    for b in range(n):
        bit = np.int64(1) << np.int64(b)
        lower = np.flatnonzero((labels & bit) == 0)
        target = labels[lower] | bit
        pos = np.searchsorted(labels, target)
        hit = pos < labels.shape[0]
        hit[hit] = labels[pos[hit]] == target[hit]
        srcs.append(lower[hit])
        dsts.append(pos[hit])
    src = np.concatenate(srcs) if srcs else np.empty(0, np.int64)
    dst = np.concatenate(dsts) if dsts else np.empty(0, np.int64)
    order = np.lexsort((dst, src))
    return src[order].astype(np.int64), dst[order].astype(np.int64)


def csr_from_edges(nv: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric CSR with sorted neighbour lists."""
    a = np.concatenate([src, dst])
    b = np.concatenate([dst, src])
    order = np.lexsort((b, a))
    a, b = a[order], b[order]
    indptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(np.bincount(a, minlength=nv), out=indptr[1:])
    return indptr, b.astype(np.int32)


# --------------------------------------------------------------------------
# breadth-first search
# --------------------------------------------------------------------------


def _bfs_loop(indptr, indices, source):
    nv = indptr.shape[0] - 1
    dist = np.full(nv, -1, dtype=np.int32)
    queue = np.empty(nv, dtype=np.int32)
    dist[source] = 0
    queue[0] = source
    head, tail = 0, 1
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v] + 1
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if dist[w] < 0:
                dist[w] = dv
                queue[tail] = w
                tail += 1
    return dist


bfs_nb = njit(_bfs_loop)


def bfs_np(indptr: np.ndarray, indices: np.ndarray, source: int) -> np.ndarray:
    nv = indptr.shape[0] - 1
    dist = np.full(nv, UNREACHED, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        # Flattened gather of every neighbour slice in the frontier.
        offsets = np.repeat(starts - np.cumsum(counts) + counts, counts) + np.arange(total)
        nbrs = np.unique(indices[offsets])
        nbrs = nbrs[dist[nbrs] < 0]
        level += 1
        dist[nbrs] = level
        frontier = nbrs.astype(np.int64)
    return dist


def _ecc_loop(indptr, indices, sources):
    """Eccentricity and one farthest vertex for each source."""
    nv = indptr.shape[0] - 1
    ns = sources.shape[0]
    ecc = np.empty(ns, dtype=np.int32)
    far = np.empty(ns, dtype=np.int32)
    dist = np.empty(nv, dtype=np.int32)
    queue = np.empty(nv, dtype=np.int32)
    for s in range(ns):
        src = sources[s]
        for i in range(nv):
            dist[i] = -1
        dist[src] = 0
        queue[0] = src
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v] + 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dv
                    queue[tail] = w
                    tail += 1
        last = queue[tail - 1]
        far[s] = last
        ecc[s] = dist[last] if tail == nv else -1
    return ecc, far


ecc_nb = njit(_ecc_loop)


def ecc_np(indptr: np.ndarray, indices: np.ndarray, sources: np.ndarray):
    ecc = np.empty(len(sources), dtype=np.int32)
    far = np.empty(len(sources), dtype=np.int32)
    for k, s in enumerate(sources):
        dist = bfs_np(indptr, indices, int(s))
        far[k] = int(np.argmax(dist))
        ecc[k] = dist[far[k]] if (dist >= 0).all() else -1
    return ecc, far


def _apsp_loop(indptr, indices):
    nv = indptr.shape[0] - 1
    out = np.empty((nv, nv), dtype=np.int32)
    for s in range(nv):
        out[s] = bfs_nb(indptr, indices, s)
    return out


apsp_nb = njit(_apsp_loop)


def apsp_np(indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    nv = indptr.shape[0] - 1
    return np.stack([bfs_np(indptr, indices, s) for s in range(nv)]) if nv else np.zeros((0, 0), np.int32)


# --------------------------------------------------------------------------
# Djokovic-Winkler relation and medians
# --------------------------------------------------------------------------


def _theta_loop(dist, ex, ey):
    m = ex.shape[0]
    out = np.zeros((m, m), dtype=np.bool_)
    for i in range(m):
        x, y = ex[i], ey[i]
        for j in range(m):
            u, v = ex[j], ey[j]
            out[i, j] = dist[x, u] == dist[y, v] and dist[x, v] == dist[y, u]
    return out


theta_nb = njit(_theta_loop)


def theta_np(dist: np.ndarray, ex: np.ndarray, ey: np.ndarray) -> np.ndarray:
    xu = dist[np.ix_(ex, ex)]
    yv = dist[np.ix_(ey, ey)]
    xv = dist[np.ix_(ex, ey)]
    yu = dist[np.ix_(ey, ex)]
    return (xu == yv) & (xv == yu)


def _median_scan_loop(dist):
    """First triple ``u < v < w`` whose median count is not 1, as (u, v, w, count)."""
    nv = dist.shape[0]
    for u in range(nv):
        for v in range(u + 1, nv):
            duv = dist[u, v]
            for w in range(v + 1, nv):
                dvw = dist[v, w]
                duw = dist[u, w]
                count = 0
                for x in range(nv):
                    if (
                        dist[u, x] + dist[x, v] == duv
                        and dist[v, x] + dist[x, w] == dvw
                        and dist[u, x] + dist[x, w] == duw
                    ):
                        count += 1
                        if count > 1:
                            break
                if count != 1:
                    return u, v, w, count
    return -1, -1, -1, 1


median_scan_nb = njit(_median_scan_loop)


def median_scan_np(dist: np.ndarray):
    nv = dist.shape[0]
    d = dist.astype(np.int64)
    # between[a, b, x]: x lies on a shortest a-b path
    between = d[:, None, :] + d[None, :, :] == d[:, :, None]
    for u in range(nv):
        counts = (between[u][:, None, :] & between[u][None, :, :] & between).sum(axis=2)
        for v in range(u + 1, nv):
            row = counts[v, v + 1 :]
            bad = np.flatnonzero(row != 1)
            if bad.size:
                w = v + 1 + int(bad[0])
                return u, v, w, min(int(row[bad[0]]), 2)
    return -1, -1, -1, 1


# --------------------------------------------------------------------------
# Hamiltonian search
# --------------------------------------------------------------------------

FOUND, EXHAUSTED, OUT_OF_BUDGET = 1, 0, -1


def _ham_loop(indptr, indices, parity, prio, start, cycle, budget, path):
    """Depth-first Hamiltonian cycle/path search from ``start``.

    Returns ``(status, expansions)``; on FOUND, ``path`` holds the vertex order.
    Neighbours are tried by fewest unvisited neighbours, ties broken by ``prio``.
    Pruning: parity balance of the remainder, residual degree, forced moves
    and connectivity of the unvisited vertices.
    """
    nv = indptr.shape[0] - 1
    maxdeg = 0
    for v in range(nv):
        if indptr[v + 1] - indptr[v] > maxdeg:
            maxdeg = indptr[v + 1] - indptr[v]
    visited = np.zeros(nv, dtype=np.bool_)
    avail = np.empty(nv, dtype=np.int64)
    for v in range(nv):
        avail[v] = indptr[v + 1] - indptr[v]
    adj_start = np.zeros(nv, dtype=np.bool_)
    for p in range(indptr[start], indptr[start + 1]):
        adj_start[indices[p]] = True
    adj_cur = np.zeros(nv, dtype=np.int64)
    stamp = np.zeros(nv, dtype=np.int64)
    queue = np.empty(nv, dtype=np.int64)
    cand = np.empty((nv, maxdeg + 1), dtype=np.int64)
    ncand = np.zeros(nv, dtype=np.int64)
    ci = np.zeros(nv, dtype=np.int64)
    rem = np.zeros(2, dtype=np.int64)
    for v in range(nv):
        rem[parity[v]] += 1

    expansions = 0
    depth = 0
    path[0] = start
    visited[start] = True
    rem[parity[start]] -= 1
    for p in range(indptr[start], indptr[start + 1]):
        avail[indices[p]] -= 1
    tick = 0

    if nv == 1:
        return (EXHAUSTED if cycle else FOUND), 0

    # Set up candidates for the current depth (the prune/branch step).
    while True:
        cur = path[depth]
        m = nv - depth - 1
        ok = True
        if m > 0:
            pc = parity[cur]
            need_other = (m + 1) // 2
            if rem[1 - pc] != need_other or rem[pc] != m - need_other:
                ok = False
            if ok and cycle:
                last_par = pc if m % 2 == 0 else 1 - pc
                if last_par == parity[start]:
                    ok = False
            tick += 1
            for p in range(indptr[cur], indptr[cur + 1]):
                adj_cur[indices[p]] = tick
            forced = -1
            nforced = 0
            ones = 0
            if ok:
                for w in range(nv):
                    if visited[w]:
                        continue
                    near = 1 if adj_cur[w] == tick else 0
                    eff = avail[w] + near
                    if cycle and adj_start[w]:
                        eff += 1
                    if cycle:
                        if eff < 2 and m > 1:
                            ok = False
                            break
                        if near == 1 and m > 1:
                            rest = avail[w] + (1 if adj_start[w] else 0)
                            if rest <= 1:
                                nforced += 1
                                forced = w
                    else:
                        if eff == 0:
                            ok = False
                            break
                        if eff == 1:
                            ones += 1
                            if ones > 1:
                                ok = False
                                break
                        if near == 1 and avail[w] == 0 and m > 1:
                            ok = False
                            break
                if nforced > 1:
                    ok = False
            if ok:
                # every unvisited vertex reachable from cur through unvisited ones
                tick2 = tick
                stamp[cur] = tick2
                queue[0] = cur
                head, tail = 0, 1
                reached = 0
                while head < tail:
                    v = queue[head]
                    head += 1
                    for p in range(indptr[v], indptr[v + 1]):
                        w = indices[p]
                        if not visited[w] and stamp[w] != tick2:
                            stamp[w] = tick2
                            queue[tail] = w
                            tail += 1
                            reached += 1
                if reached != m:
                    ok = False
            nc = 0
            if ok:
                if nforced == 1:
                    cand[depth, 0] = forced
                    nc = 1
                else:
                    for p in range(indptr[cur], indptr[cur + 1]):
                        w = indices[p]
                        if visited[w]:
                            continue
                        k = nc
                        while k > 0 and (
                            avail[cand[depth, k - 1]] > avail[w]
                            or (
                                avail[cand[depth, k - 1]] == avail[w]
                                and prio[cand[depth, k - 1]] > prio[w]
                            )
                        ):
                            cand[depth, k] = cand[depth, k - 1]
                            k -= 1
                        cand[depth, k] = w
                        nc += 1
            ncand[depth] = nc
            ci[depth] = 0
        else:
            if (not cycle) or (nv >= 3 and adj_start[cur]):
                return FOUND, expansions
            ncand[depth] = 0
            ci[depth] = 0

        # advance: take next candidate, backtracking as needed
        while True:
            if ci[depth] < ncand[depth]:
                nxt = cand[depth, ci[depth]]
                ci[depth] += 1
                expansions += 1
                if expansions > budget:
                    return OUT_OF_BUDGET, expansions
                depth += 1
                path[depth] = nxt
                visited[nxt] = True
                rem[parity[nxt]] -= 1
                for p in range(indptr[nxt], indptr[nxt + 1]):
                    avail[indices[p]] -= 1
                break
            if depth == 0:
                return EXHAUSTED, expansions
            v = path[depth]
            visited[v] = False
            rem[parity[v]] += 1
            for p in range(indptr[v], indptr[v + 1]):
                avail[indices[p]] += 1
            depth -= 1


ham_search_nb = njit(_ham_loop)
ham_search_py = _ham_loop


if BACKEND == "numba":
    up_edges = up_edges_nb
    bfs = bfs_nb
    eccentricities = ecc_nb
    apsp = apsp_nb
    theta_matrix = theta_nb
    median_scan = median_scan_nb
    ham_search = ham_search_nb
else:
    up_edges = up_edges_np
    bfs = bfs_np
    eccentricities = ecc_np
    apsp = apsp_np
    theta_matrix = theta_np
    median_scan = median_scan_np
    ham_search = ham_search_py
