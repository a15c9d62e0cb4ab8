# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_kernels_py``; same signatures, same results."""

BACKEND = "cython"


def convolve(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t i, j, k, la, lb, lim, nnz
    cdef list out = [0] * (n + 1)
    cdef list nz_idx = []
    cdef list nz_val = []
    cdef object ai, bj
    lb = min(len(b), n + 1)
    for j in range(lb):
        bj = b[j]
        if bj:
            nz_idx.append(j)
            nz_val.append(bj)
    nnz = len(nz_idx)
    if nnz == 0:
        return out
    la = min(len(a), n + 1)
    for i in range(la):
        ai = a[i]
        if not ai:
            continue
        lim = n - i
        for k in range(nnz):
            j = <Py_ssize_t>nz_idx[k]
            if j > lim:
                break
            out[i + j] = out[i + j] + ai * nz_val[k]
    return out


def dot(list a, list b, Py_ssize_t k, Py_ssize_t lo, Py_ssize_t hi):
    cdef Py_ssize_t j
    cdef object total = 0
    cdef object aj
    for j in range(lo, hi + 1):
        aj = a[j]
        if aj:
            total = total + aj * b[k - j]
    return total


cdef int _popcount(unsigned int x):
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef int _lowbit(unsigned int x):
    cdef int i = 0
    while not (x & 1):
        x >>= 1
        i += 1
    return i


cdef bint _connected(int n, unsigned int *adj):
    cdef unsigned int full = (1u << n) - 1
    cdef unsigned int seen = 1, frontier = 1, nxt, f
    cdef int v
    while frontier:
        nxt = 0
        f = frontier
        while f:
            v = _lowbit(f)
            f &= f - 1
            nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == full


cdef int _classify(int n, unsigned int *adj, int *cycles, int *ncycles):
    """Return bridge count, or -1 when some block is neither an edge nor a cycle."""
    cdef int disc[8]
    cdef int low[8]
    cdef int st_u[8]
    cdef int st_p[8]
    cdef unsigned int st_rem[8]
    cdef int es_a[32]
    cdef int es_b[32]
    cdef int sp = 0, esp = 0, clock = 1, bridges = 0
    cdef int u, p, w, x, y, ec, size
    cdef unsigned int rem, vm
    for u in range(n):
        disc[u] = -1
        low[u] = 0
    ncycles[0] = 0
    disc[0] = 0
    low[0] = 0
    st_u[0] = 0
    st_p[0] = -1
    st_rem[0] = adj[0]
    sp = 1
    while sp > 0:
        u = st_u[sp - 1]
        p = st_p[sp - 1]
        rem = st_rem[sp - 1]
        if rem:
            w = _lowbit(rem)
            st_rem[sp - 1] = rem & (rem - 1)
            if w == p:
                continue
            if disc[w] == -1:
                es_a[esp] = u
                es_b[esp] = w
                esp += 1
                disc[w] = clock
                low[w] = clock
                clock += 1
                st_u[sp] = w
                st_p[sp] = u
                st_rem[sp] = adj[w]
                sp += 1
            elif disc[w] < disc[u]:
                es_a[esp] = u
                es_b[esp] = w
                esp += 1
                if disc[w] < low[u]:
                    low[u] = disc[w]
        else:
            sp -= 1
            if p < 0:
                continue
            if low[u] < low[p]:
                low[p] = low[u]
            if low[u] >= disc[p]:
                vm = 0
                ec = 0
                while True:
                    esp -= 1
                    x = es_a[esp]
                    y = es_b[esp]
                    vm |= (1u << x) | (1u << y)
                    ec += 1
                    if x == p and y == u:
                        break
                if ec == 1:
                    bridges += 1
                else:
                    size = _popcount(vm)
                    if ec != size:
                        return -1
                    cycles[ncycles[0]] = size
                    ncycles[0] += 1
    return bridges


def cactus_census(int n):
    cdef int E, i, j, e, m, lo, hi, bridges, nc, t
    cdef unsigned long mask, top
    cdef unsigned int adj[8]
    cdef int ei[28]
    cdef int ej[28]
    cdef int cycles[8]
    if n <= 0:
        return []
    if n == 1:
        return [(0, 0, ())]
    if n > 7:
        raise ValueError("cactus_census supports n <= 7")
    E = 0
    for i in range(n):
        for j in range(i + 1, n):
            ei[E] = i
            ej[E] = j
            E += 1
    lo = n - 1
    hi = (3 * (n - 1)) // 2
    top = 1ul << E
    out = []
    for mask in range(top):
        m = _popcount(<unsigned int>mask)
        if m < lo or m > hi:
            continue
        for i in range(n):
            adj[i] = 0
        for e in range(E):
            if (mask >> e) & 1:
                adj[ei[e]] |= 1u << ej[e]
                adj[ej[e]] |= 1u << ei[e]
        if not _connected(n, adj):
            continue
        bridges = _classify(n, adj, cycles, &nc)
        if bridges < 0:
            continue
        out.append((mask, bridges, tuple(sorted([cycles[t] for t in range(nc)]))))
    out.sort()
    return out
