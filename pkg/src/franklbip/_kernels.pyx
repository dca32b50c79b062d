# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-scan kernels; pure-Python twin in _pykernels.py.

Same depth-first walk and prunes as the fallback: coverage of the other
side only grows down the tree, so a left-out vertex whose neighbourhood is
fully covered kills its subtree, and re-checking left-out vertices whenever
coverage grows makes accepted leaves final without a closing scan.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memcpy

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


ctypedef unsigned long long u64


ctypedef struct ScanCtx:
    int s
    int t
    int W
    const u64* adj
    u64* nbstack
    const u64* fullmask
    unsigned char* in_a
    int* chosen
    long long sel_k
    long long sel_f
    u64 total
    u64 sel_count
    u64* k_hist
    u64* f_hist
    u64* scan_counts
    u64* other_counts


cdef void _stats_visit(ScanCtx* c, int u, int k) nogil:
    cdef int W = c.W
    cdef u64* nb = c.nbstack + u * W
    cdef u64* nxt
    cdef const u64* row
    cdef u64 x, fw
    cdef int wd, w, i, f, grown, alive, covered
    if u == c.s:
        f = 0
        for wd in range(W):
            f += __builtin_popcountll(c.fullmask[wd] & ~nb[wd])
        c.total += 1
        c.k_hist[k] += 1
        c.f_hist[f] += 1
        for i in range(k):
            c.scan_counts[c.chosen[i]] += 1
        for wd in range(W):
            x = c.fullmask[wd] & ~nb[wd]
            while x:
                c.other_counts[(wd << 6) + __builtin_ctzll(x)] += 1
                x &= x - 1
        if k == c.sel_k and f == c.sel_f:
            c.sel_count += 1
        return
    row = c.adj + u * W
    nxt = c.nbstack + (u + 1) * W
    grown = 0
    for wd in range(W):
        x = nb[wd] | row[wd]
        nxt[wd] = x
        if x != nb[wd]:
            grown = 1
    alive = 1
    if grown:
        for w in range(u):
            if not c.in_a[w]:
                covered = 1
                for wd in range(W):
                    if c.adj[w * W + wd] & ~nxt[wd]:
                        covered = 0
                        break
                if covered:
                    alive = 0
                    break
    if alive:
        c.in_a[u] = 1
        c.chosen[k] = u
        _stats_visit(c, u + 1, k + 1)
        c.in_a[u] = 0
    alive = 0
    for wd in range(W):
        if row[wd] & ~nb[wd]:
            alive = 1
            break
    if alive:
        for wd in range(W):
            nxt[wd] = nb[wd]
        _stats_visit(c, u + 1, k)


cdef void _free_hist_visit(int u, int k, int s, int t, int W, int lo_k,
                           const u64* adj, u64* nbstack, u64* freq) nogil:
    cdef u64* nb = nbstack + u * W
    cdef u64* nxt
    cdef int wd, f
    if k + (s - u) < lo_k:
        return
    if u == s:
        f = t
        for wd in range(W):
            f -= __builtin_popcountll(nb[wd])
        freq[f] += 1
        return
    nxt = nbstack + (u + 1) * W
    for wd in range(W):
        nxt[wd] = nb[wd] | adj[u * W + wd]
    _free_hist_visit(u + 1, k + 1, s, t, W, lo_k, adj, nbstack, freq)
    for wd in range(W):
        nxt[wd] = nb[wd]
    _free_hist_visit(u + 1, k, s, t, W, lo_k, adj, nbstack, freq)


cdef u64* _pack_rows(rows, int s, int W) except NULL:
    cdef u64* adj = <u64*> calloc(s * W if s * W else 1, sizeof(u64))
    if adj == NULL:
        raise MemoryError()
    cdef int u, i
    cdef bytes blob
    cdef const unsigned char* src
    cdef u64 word
    for u in range(s):
        blob = int(rows[u]).to_bytes(W * 8, "little")
        src = blob
        for i in range(W * 8):
            word = src[i]
            adj[u * W + (i >> 3)] |= word << ((i & 7) << 3)
    return adj


def scan_stats(rows, int s, int t, long long sel_k=-1, long long sel_f=-1):
    """Compiled counterpart of _pykernels.scan_stats (same contract)."""
    if s != len(rows):
        raise ValueError("row count does not match scan side size")
    if s > 62:
        raise ValueError("scan side too large for 64-bit counters")
    cdef int W = (t + 63) >> 6
    cdef ScanCtx c
    cdef int wd
    c.s = s
    c.t = t
    c.W = W
    c.sel_k = sel_k
    c.sel_f = sel_f
    c.total = 0
    c.sel_count = 0
    cdef u64* adj = _pack_rows(rows, s, W)
    cdef u64* nbstack = <u64*> calloc((s + 1) * W, sizeof(u64))
    cdef u64* fullmask = <u64*> calloc(W, sizeof(u64))
    cdef u64* k_hist = <u64*> calloc(s + 1, sizeof(u64))
    cdef u64* f_hist = <u64*> calloc(t + 1, sizeof(u64))
    cdef u64* scan_counts = <u64*> calloc(s if s else 1, sizeof(u64))
    cdef u64* other_counts = <u64*> calloc(t if t else 1, sizeof(u64))
    cdef unsigned char* in_a = <unsigned char*> calloc(s if s else 1, 1)
    cdef int* chosen = <int*> calloc(s if s else 1, sizeof(int))
    try:
        if (nbstack == NULL or fullmask == NULL or k_hist == NULL or f_hist == NULL
                or scan_counts == NULL or other_counts == NULL or in_a == NULL
                or chosen == NULL):
            raise MemoryError()
        for wd in range(t):
            fullmask[wd >> 6] |= (<u64> 1) << (wd & 63)
        c.adj = adj
        c.nbstack = nbstack
        c.fullmask = fullmask
        c.in_a = in_a
        c.chosen = chosen
        c.k_hist = k_hist
        c.f_hist = f_hist
        c.scan_counts = scan_counts
        c.other_counts = other_counts
        with nogil:
            _stats_visit(&c, 0, 0)
        return (
            int(c.total),
            [int(k_hist[i]) for i in range(s + 1)],
            [int(f_hist[i]) for i in range(t + 1)],
            [int(scan_counts[i]) for i in range(s)],
            [int(other_counts[i]) for i in range(t)],
            int(c.sel_count),
        )
    finally:
        free(adj)
        free(nbstack)
        free(fullmask)
        free(k_hist)
        free(f_hist)
        free(scan_counts)
        free(other_counts)
        free(in_a)
        free(chosen)


def scan_free_hist(rows, int s, int t, int lo_k=0):
    """Compiled counterpart of _pykernels.scan_free_hist (same contract)."""
    if s != len(rows):
        raise ValueError("row count does not match scan side size")
    if s > 62:
        raise ValueError("scan side too large for 64-bit counters")
    cdef int W = (t + 63) >> 6
    cdef u64* adj = _pack_rows(rows, s, W)
    cdef u64* nbstack = <u64*> calloc((s + 1) * W, sizeof(u64))
    cdef u64* freq = <u64*> calloc(t + 1, sizeof(u64))
    try:
        if nbstack == NULL or freq == NULL:
            raise MemoryError()
        with nogil:
            _free_hist_visit(0, 0, s, t, W, lo_k, adj, nbstack, freq)
        return [int(freq[i]) for i in range(t + 1)]
    finally:
        free(adj)
        free(nbstack)
        free(freq)
