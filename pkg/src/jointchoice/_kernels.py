"""Hot loops over boolean relation matrices and menu key arrays.

Each kernel has a numba version and a pure-numpy version computing the same
result (identical outputs, not just equivalent ones). The numba versions are
used when numba imports and ``JOINTCHOICE_DISABLE_NUMBA`` is unset or ``0``.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("JOINTCHOICE_DISABLE_NUMBA", "0") in ("", "0")


# --- pure numpy -------------------------------------------------------------


def revealed_matrix_np(n, feas_ptr, feas_idx, chosen_ptr, chosen_idx):
    M = np.zeros((n, n), dtype=np.bool_)
    for m in range(len(feas_ptr) - 1):
        feas = feas_idx[feas_ptr[m] : feas_ptr[m + 1]]
        chosen = chosen_idx[chosen_ptr[m] : chosen_ptr[m + 1]]
        M[np.ix_(chosen, feas)] = True
    np.fill_diagonal(M, True)
    return M


def maximal_mask_np(strict, idx):
    sub = strict[np.ix_(idx, idx)]
    return ~sub.any(axis=0)


def strict_part_np(M):
    return M & ~M.T


def find_cycle_np(strict):
    n = strict.shape[0]
    alive = np.ones(n, dtype=np.bool_)
    indeg = strict.sum(axis=0).astype(np.int64)
    frontier = np.flatnonzero(indeg == 0)
    while frontier.size:
        alive[frontier] = False
        indeg -= strict[frontier].sum(axis=0)
        indeg[~alive] = -1
        frontier = np.flatnonzero(indeg == 0)
    if not alive.any():
        return np.empty(0, dtype=np.int64)
    return _walk_np(strict, alive)


def _walk_np(strict, alive):
    n = strict.shape[0]
    seen = np.full(n, -1, dtype=np.int64)
    path = []
    v = int(np.flatnonzero(alive)[0])
    while seen[v] < 0:
        seen[v] = len(path)
        path.append(v)
        v = int(np.flatnonzero(strict[:, v] & alive)[0])
    loop = path[seen[v] :]
    return np.array(loop[::-1], dtype=np.int64)


def betweenness_violation_np(key_i, key_s, key_t):
    present = np.zeros((key_s.max() + 1, key_t.max() + 1), dtype=np.bool_)
    present[key_s, key_t] = True
    for i in range(key_i.shape[0]):
        rest = slice(i + 1, None)
        bad = (key_i[rest] == key_i[i]) & ~present[key_s[i], key_t[rest]] & ~present[key_s[rest], key_t[i]]
        hits = np.flatnonzero(bad)
        if hits.size:
            return i, i + 1 + int(hits[0])
    return -1, -1


# --- numba --------------------------------------------------------------------

if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def revealed_matrix_nb(n, feas_ptr, feas_idx, chosen_ptr, chosen_idx):
        M = np.zeros((n, n), dtype=np.bool_)
        for m in range(feas_ptr.shape[0] - 1):
            for a in range(chosen_ptr[m], chosen_ptr[m + 1]):
                c = chosen_idx[a]
                for b in range(feas_ptr[m], feas_ptr[m + 1]):
                    M[c, feas_idx[b]] = True
        for i in range(n):
            M[i, i] = True
        return M

    @numba.njit(cache=True)
    def maximal_mask_nb(strict, idx):
        k = idx.shape[0]
        out = np.ones(k, dtype=np.bool_)
        for b in range(k):
            x = idx[b]
            for a in range(k):
                if strict[idx[a], x]:
                    out[b] = False
                    break
        return out

    @numba.njit(cache=True)
    def strict_part_nb(M):
        n = M.shape[0]
        S = np.zeros((n, n), dtype=np.bool_)
        for i in range(n):
            for j in range(n):
                S[i, j] = M[i, j] and not M[j, i]
        return S

    @numba.njit(cache=True)
    def find_cycle_nb(strict):
        n = strict.shape[0]
        alive = np.ones(n, dtype=np.bool_)
        indeg = np.zeros(n, dtype=np.int64)
        for u in range(n):
            for v in range(n):
                if strict[u, v]:
                    indeg[v] += 1
        # peel in rounds so the surviving set matches the numpy path exactly
        while True:
            frontier = np.empty(n, dtype=np.int64)
            k = 0
            for v in range(n):
                if alive[v] and indeg[v] == 0:
                    frontier[k] = v
                    k += 1
            if k == 0:
                break
            for a in range(k):
                alive[frontier[a]] = False
            for a in range(k):
                u = frontier[a]
                for v in range(n):
                    if strict[u, v]:
                        indeg[v] -= 1
        start = -1
        for v in range(n):
            if alive[v]:
                start = v
                break
        if start < 0:
            return np.empty(0, dtype=np.int64)
        seen = np.full(n, -1, dtype=np.int64)
        path = np.empty(n + 1, dtype=np.int64)
        length = 0
        v = start
        while seen[v] < 0:
            seen[v] = length
            path[length] = v
            length += 1
            for u in range(n):
                if alive[u] and strict[u, v]:
                    v = u
                    break
        loop = path[seen[v] : length]
        return loop[::-1].copy()

    @numba.njit(cache=True)
    def betweenness_violation_nb(key_i, key_s, key_t):
        m = key_i.shape[0]
        present = np.zeros((key_s.max() + 1, key_t.max() + 1), dtype=np.bool_)
        for e in range(m):
            present[key_s[e], key_t[e]] = True
        for i in range(m):
            for j in range(i + 1, m):
                if key_i[j] == key_i[i] and not present[key_s[i], key_t[j]] and not present[key_s[j], key_t[i]]:
                    return i, j
        return -1, -1


def _pick(name):
    if USE_NUMBA:
        return globals()[name + "_nb"]
    return globals()[name + "_np"]


revealed_matrix = _pick("revealed_matrix")
maximal_mask = _pick("maximal_mask")
strict_part = _pick("strict_part")
find_cycle = _pick("find_cycle")
betweenness_violation = _pick("betweenness_violation")

BACKEND = "numba" if USE_NUMBA else "numpy"
