"""Pure-Python implementations of the hot loops.

The compiled twin lives in ``_kernels.pyx`` and must stay behaviourally
identical; ``kernels.py`` picks one of the two at import time.
"""

from __future__ import annotations

from itertools import combinations

BACKEND = "python"


def convolve(a: list, b: list, n: int) -> list:
    """Cauchy product of two coefficient lists, truncated to indices ``0..n``."""
    out = [0] * (n + 1)
    nz_b = [(j, bj) for j, bj in enumerate(b[: n + 1]) if bj]
    if not nz_b:
        return out
    for i, ai in enumerate(a[: n + 1]):
        if not ai:
            continue
        lim = n - i
        for j, bj in nz_b:
            if j > lim:
                break
            out[i + j] += ai * bj
    return out


def dot(a: list, b: list, k: int, lo: int, hi: int):
    """Return ``sum(a[j] * b[k - j] for j in lo..hi)``."""
    total = 0
    for j in range(lo, hi + 1):
        aj = a[j]
        if aj:
            total += aj * b[k - j]
    return total


def _edge_list(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _connected(n: int, adj: list[int]) -> bool:
    full = (1 << n) - 1
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        f = frontier
        while f:
            v = (f & -f).bit_length() - 1
            f &= f - 1
            nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == full


def _blocks(n: int, adj: list[int]) -> list[tuple[int, int]]:
    """Biconnected blocks of a connected graph as ``(vertex_mask, edge_count)``."""
    disc = [-1] * n
    low = [0] * n
    blocks = []
    estack: list[tuple[int, int]] = []
    disc[0] = low[0] = 0
    clock = 1
    stack = [[0, -1, adj[0]]]
    while stack:
        frame = stack[-1]
        u, p, rem = frame
        if rem:
            w = (rem & -rem).bit_length() - 1
            frame[2] = rem & (rem - 1)
            if w == p:
                continue
            if disc[w] == -1:
                estack.append((u, w))
                disc[w] = low[w] = clock
                clock += 1
                stack.append([w, u, adj[w]])
            elif disc[w] < disc[u]:
                estack.append((u, w))
                if disc[w] < low[u]:
                    low[u] = disc[w]
        else:
            stack.pop()
            if p < 0:
                continue
            if low[u] < low[p]:
                low[p] = low[u]
            if low[u] >= disc[p]:
                vm = 0
                ec = 0
                while True:
                    x, y = estack.pop()
                    vm |= (1 << x) | (1 << y)
                    ec += 1
                    if x == p and y == u:
                        break
                blocks.append((vm, ec))
    return blocks


def cactus_census(n: int) -> list[tuple[int, int, tuple[int, ...]]]:
    """All labeled connected cacti on vertices ``0..n-1``.

    Each entry is ``(edge_mask, bridge_count, cycle_lengths)`` where bit ``e`` of
    the mask refers to the ``e``-th pair of ``[(i, j) for i < j]``.
    """
    if n <= 0:
        return []
    if n == 1:
        return [(0, 0, ())]
    edges = _edge_list(n)
    out = []
    max_edges = (3 * (n - 1)) // 2
    for m in range(n - 1, max_edges + 1):
        for combo in combinations(range(len(edges)), m):
            adj = [0] * n
            mask = 0
            for e in combo:
                i, j = edges[e]
                adj[i] |= 1 << j
                adj[j] |= 1 << i
                mask |= 1 << e
            if not _connected(n, adj):
                continue
            bridges = 0
            cycles = []
            ok = True
            for vm, ec in _blocks(n, adj):
                if ec == 1:
                    bridges += 1
                    continue
                size = bin(vm).count("1")
                if ec != size:
                    ok = False
                    break
                cycles.append(size)
            if ok:
                out.append((mask, bridges, tuple(sorted(cycles))))
    out.sort()
    return out
