# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) kernels: packed-row elimination, TODD pair scan, coset search.

Contracts match ``topt._purepy`` exactly, including tie-breaking.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

cnp.import_array()

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int getbit(const uint64_t* row, Py_ssize_t j) noexcept nogil:
    return <int>((row[j >> 6] >> (j & 63)) & 1)


cdef inline Py_ssize_t lowbit(const uint64_t* row, Py_ssize_t W) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(W):
        if row[k]:
            return (k << 6) + __builtin_ctzll(row[k])
    return -1


cdef inline void xor_into(uint64_t* dst, const uint64_t* src, Py_ssize_t W) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(W):
        dst[k] ^= src[k]


cdef Py_ssize_t insert_row(uint64_t* basis, Py_ssize_t* pivots, Py_ssize_t rank,
                           uint64_t* row, Py_ssize_t W, long long* ops) noexcept nogil:
    """Reduce ``row`` against a fully reduced basis and append it if nonzero.

    Returns the new rank.
    """
    cdef Py_ssize_t i, p
    for i in range(rank):
        if getbit(row, pivots[i]):
            xor_into(row, basis + i * W, W)
            ops[0] += 1
    p = lowbit(row, W)
    if p < 0:
        return rank
    for i in range(rank):
        if getbit(basis + i * W, p):
            xor_into(basis + i * W, row, W)
            ops[0] += 1
    memcpy(basis + rank * W, row, W * sizeof(uint64_t))
    pivots[rank] = p
    return rank + 1


def rref(cnp.ndarray rows_in, Py_ssize_t ncols):
    cdef cnp.ndarray[cnp.uint64_t, ndim=2, mode="c"] rows = np.ascontiguousarray(rows_in, dtype=np.uint64)
    cdef Py_ssize_t R = rows.shape[0]
    cdef Py_ssize_t W = rows.shape[1] if rows.shape[1] else max(1, (ncols + 63) // 64)
    cdef Py_ssize_t cap = min(R, ncols) + 1
    cdef uint64_t* basis = <uint64_t*> malloc(cap * W * sizeof(uint64_t))
    cdef uint64_t* tmp = <uint64_t*> malloc(W * sizeof(uint64_t))
    cdef Py_ssize_t* pivots = <Py_ssize_t*> malloc(cap * sizeof(Py_ssize_t))
    cdef Py_ssize_t rank = 0, i
    cdef long long ops = 0
    try:
        if rows.shape[1]:
            for i in range(R):
                memcpy(tmp, &rows[i, 0], W * sizeof(uint64_t))
                rank = insert_row(basis, pivots, rank, tmp, W, &ops)
        order = sorted(range(rank), key=lambda k: pivots[k])
        out = np.zeros((rank, W), dtype=np.uint64)
        piv = np.zeros(rank, dtype=np.int64)
        for i, k in enumerate(order):
            for j in range(W):
                out[i, j] = basis[k * W + j]
            piv[i] = pivots[k]
        return out, piv
    finally:
        free(basis)
        free(tmp)
        free(pivots)


def todd_scan(cnp.ndarray rows_in, Py_ssize_t m):
    """First column pair (a, b) with a null vector y of [A; chi(A, z)], y_a != y_b.

    Returns ``(hit, pairs_scanned, row_ops)`` where ``hit`` is ``(a, b, y)`` or None.
    """
    cdef cnp.ndarray[cnp.uint64_t, ndim=2, mode="c"] rows = np.ascontiguousarray(rows_in, dtype=np.uint64)
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t W = rows.shape[1]
    if n == 0 or m < 2:
        return None, 0, 0
    cdef Py_ssize_t npairs = n * (n - 1) // 2
    cdef uint64_t* base = <uint64_t*> malloc((m + 1) * W * sizeof(uint64_t))
    cdef Py_ssize_t* base_piv = <Py_ssize_t*> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef uint64_t* basis = <uint64_t*> malloc((m + 1) * W * sizeof(uint64_t))
    cdef Py_ssize_t* piv = <Py_ssize_t*> malloc((m + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* pivrow = <Py_ssize_t*> malloc(m * sizeof(Py_ssize_t))
    cdef uint64_t* prods = <uint64_t*> malloc((npairs + 1) * W * sizeof(uint64_t))
    cdef Py_ssize_t* pidx = <Py_ssize_t*> malloc(n * n * sizeof(Py_ssize_t))
    cdef uint64_t* row = <uint64_t*> malloc(W * sizeof(uint64_t))
    cdef char* z = <char*> malloc(n)
    cdef Py_ssize_t base_rank = 0, rank, a, b, al, be, ga, i, k, f, t
    cdef int ya, yb, anyz, found = 0
    cdef Py_ssize_t ra = -1, rb = -1, rf = -1
    cdef long long ops = 0, pairs = 0
    try:
        for i in range(n):
            memcpy(row, &rows[i, 0], W * sizeof(uint64_t))
            base_rank = insert_row(base, base_piv, base_rank, row, W, &ops)
        t = 0
        for be in range(n):
            for ga in range(be + 1, n):
                for k in range(W):
                    prods[t * W + k] = rows[be, k] & rows[ga, k]
                pidx[be * n + ga] = t
                t += 1
        with nogil:
            for a in range(m):
                if found:
                    break
                for b in range(a + 1, m):
                    pairs += 1
                    anyz = 0
                    for i in range(n):
                        z[i] = getbit(&rows[i, 0], a) ^ getbit(&rows[i, 0], b)
                        anyz |= z[i]
                    memcpy(basis, base, base_rank * W * sizeof(uint64_t))
                    memcpy(piv, base_piv, base_rank * sizeof(Py_ssize_t))
                    rank = base_rank
                    if anyz and rank < m:
                        for al in range(n):
                            if rank == m:
                                break
                            for be in range(al + 1, n):
                                if rank == m:
                                    break
                                for ga in range(be + 1, n):
                                    if not (z[al] | z[be] | z[ga]):
                                        continue
                                    memset(row, 0, W * sizeof(uint64_t))
                                    if z[al]:
                                        xor_into(row, prods + pidx[be * n + ga] * W, W)
                                    if z[be]:
                                        xor_into(row, prods + pidx[al * n + ga] * W, W)
                                    if z[ga]:
                                        xor_into(row, prods + pidx[al * n + be] * W, W)
                                    rank = insert_row(basis, piv, rank, row, W, &ops)
                                    if rank == m:
                                        break
                    if rank == m:
                        continue
                    for f in range(m):
                        pivrow[f] = -1
                    for i in range(rank):
                        pivrow[piv[i]] = i
                    for f in range(m):
                        if pivrow[f] >= 0:
                            continue
                        if a == f:
                            ya = 1
                        elif pivrow[a] >= 0:
                            ya = getbit(basis + pivrow[a] * W, f)
                        else:
                            ya = 0
                        if b == f:
                            yb = 1
                        elif pivrow[b] >= 0:
                            yb = getbit(basis + pivrow[b] * W, f)
                        else:
                            yb = 0
                        if ya != yb:
                            found = 1
                            ra = a
                            rb = b
                            rf = f
                            break
                    if found:
                        break
        if not found:
            return None, pairs, ops
        y = np.zeros(m, dtype=np.uint8)
        y[rf] = 1
        for i in range(rank):
            y[piv[i]] = getbit(basis + i * W, rf)
        return (ra, rb, y), pairs, ops
    finally:
        free(base)
        free(base_piv)
        free(basis)
        free(piv)
        free(pivrow)
        free(prods)
        free(pidx)
        free(row)
        free(z)


def coset_min(uint64_t y0, gens_in):
    """Minimum Hamming weight over ``y0 + span(gens)``; ties go to the lowest index.

    Index ``i`` denotes ``y0 ^ XOR(gens[k] for bit k set in i)``.
    """
    cdef cnp.ndarray[cnp.uint64_t, ndim=1, mode="c"] gens = np.ascontiguousarray(gens_in, dtype=np.uint64)
    cdef Py_ssize_t kk = gens.shape[0]
    cdef uint64_t cur = y0, idx = 0, best_i = 0, t, total
    cdef int w, best_w = __builtin_popcountll(y0), bit
    if kk > 62:
        raise ValueError("too many generators")
    total = (<uint64_t>1) << kk
    with nogil:
        t = 1
        while t < total:
            bit = __builtin_ctzll(t)
            cur ^= gens[bit]
            idx ^= (<uint64_t>1) << bit
            w = __builtin_popcountll(cur)
            if w < best_w or (w == best_w and idx < best_i):
                best_w = w
                best_i = idx
            t += 1
    return best_w, best_i
