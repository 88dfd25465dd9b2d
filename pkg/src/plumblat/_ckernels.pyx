# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; ``_purekernels`` holds the reference behaviour."""

from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memcpy, memset
from libc.stdint cimport uint64_t, int64_t


cdef extern from *:
    int __builtin_ctzll(unsigned long long x) nogil


def subset_min(list kvals, list q, long long forced):
    cdef Py_ssize_t m = len(kvals)
    if m > 62:
        raise ValueError("subset_min supports at most 62 vertices")
    cdef int64_t *kv = <int64_t *> malloc(m * sizeof(int64_t))
    cdef int64_t *qq = <int64_t *> malloc((m * m + 1) * sizeof(int64_t))
    cdef int64_t *rowsum = <int64_t *> calloc(m + 1, sizeof(int64_t))
    cdef int *free_idx = <int *> malloc((m + 1) * sizeof(int))
    cdef Py_ssize_t i, j, x, nfree = 0
    cdef int64_t cur = 0, best
    cdef unsigned long long t, total, member = <unsigned long long> forced
    try:
        for i in range(m):
            kv[i] = kvals[i]
            row = q[i]
            for j in range(m):
                qq[i * m + j] = row[j]
        for j in range(m):
            if (forced >> j) & 1:
                cur += kv[j] + 2 * rowsum[j] + qq[j * m + j]
                for x in range(m):
                    rowsum[x] += qq[j * m + x]
            else:
                free_idx[nfree] = j
                nfree += 1
        best = cur
        total = (<unsigned long long> 1) << nfree
        with nogil:
            t = 1
            while t < total:
                j = free_idx[__builtin_ctzll(t)]
                if (member >> j) & 1:
                    member ^= (<unsigned long long> 1) << j
                    for x in range(m):
                        rowsum[x] -= qq[j * m + x]
                    cur -= kv[j] + 2 * rowsum[j] + qq[j * m + j]
                else:
                    cur += kv[j] + 2 * rowsum[j] + qq[j * m + j]
                    member |= (<unsigned long long> 1) << j
                    for x in range(m):
                        rowsum[x] += qq[j * m + x]
                if cur < best:
                    best = cur
                t += 1
        return best
    finally:
        free(kv)
        free(qq)
        free(rowsum)
        free(free_idx)


cdef inline Py_ssize_t _lowest(uint64_t *v, Py_ssize_t nw) nogil:
    cdef Py_ssize_t w
    for w in range(nw):
        if v[w]:
            return w * 64 + __builtin_ctzll(v[w])
    return -1


def f2_reduce(list cols):
    cdef Py_ssize_t n = len(cols)
    if n == 0:
        return [], []
    cdef Py_ssize_t nbits = 1, b
    for col in cols:
        b = (<object> col).bit_length()
        if b > nbits:
            nbits = b
    cdef Py_ssize_t nw = (nbits + 63) // 64
    cdef Py_ssize_t cw = (n + 63) // 64
    cdef uint64_t *vals = <uint64_t *> calloc(n * nw, sizeof(uint64_t))
    cdef uint64_t *comb = <uint64_t *> calloc(n * cw, sizeof(uint64_t))
    cdef Py_ssize_t *owner = <Py_ssize_t *> malloc(nbits * sizeof(Py_ssize_t))
    cdef Py_ssize_t c, k, w, low
    cdef bytes raw
    cdef uint64_t *vc
    cdef uint64_t *vk
    try:
        for b in range(nbits):
            owner[b] = -1
        for c in range(n):
            raw = (<object> cols[c]).to_bytes(nw * 8, "little")
            memcpy(&vals[c * nw], <char *> raw, nw * 8)
            comb[c * cw + c // 64] = (<uint64_t> 1) << (c % 64)
        with nogil:
            for c in range(n):
                vc = &vals[c * nw]
                while True:
                    low = _lowest(vc, nw)
                    if low < 0:
                        break
                    k = owner[low]
                    if k < 0:
                        owner[low] = c
                        break
                    vk = &vals[k * nw]
                    for w in range(nw):
                        vc[w] ^= vk[w]
                    for w in range(cw):
                        comb[c * cw + w] ^= comb[k * cw + w]
        reduced = [int.from_bytes((<char *> &vals[c * nw])[:nw * 8], "little") for c in range(n)]
        combos = [int.from_bytes((<char *> &comb[c * cw])[:cw * 8], "little") for c in range(n)]
        return reduced, combos
    finally:
        free(vals)
        free(comb)
        free(owner)
