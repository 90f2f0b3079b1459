# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: structured statevector ops and the bitset clique search.

Same call contracts as _pykernels; see there for the reference semantics.
"""

from libc.stdint cimport int8_t, uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


def diagonal_phase(const int8_t[::1] signs, const double complex[::1] vec):
    cdef Py_ssize_t d = vec.shape[0]
    out = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    for i in range(d):
        o[i] = vec[i] * <double> signs[i]
    return out


def pair_swap(
    const Py_ssize_t[::1] idx_a,
    const Py_ssize_t[::1] idx_b,
    const double complex[::1] vec,
):
    cdef Py_ssize_t d = vec.shape[0]
    out = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    for i in range(d):
        o[i] = vec[i]
    for i in range(idx_a.shape[0]):
        o[idx_a[i]] = vec[idx_b[i]]
        o[idx_b[i]] = vec[idx_a[i]]
    return out


def rotation_block(double c, double s, const double complex[::1] vec):
    cdef Py_ssize_t d = vec.shape[0]
    out = np.empty(d, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    for i in range(2, d):
        o[i] = vec[i]
    o[0] = c * vec[0] - s * vec[1]
    o[1] = s * vec[0] + c * vec[1]
    return out


def dense_matvec(const double complex[:, ::1] mat, const double complex[::1] vec):
    cdef Py_ssize_t d = vec.shape[0]
    out = np.zeros(d, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i, j
    cdef double complex acc
    for i in range(d):
        acc = 0
        for j in range(d):
            acc = acc + mat[i, j] * vec[j]
        o[i] = acc
    return out


cdef inline Py_ssize_t _first_set(const uint64_t* bits, Py_ssize_t words) nogil:
    cdef Py_ssize_t w
    for w in range(words):
        if bits[w]:
            return 64 * w + __builtin_ctzll(bits[w])
    return -1


cdef inline Py_ssize_t _popcount(const uint64_t* bits, Py_ssize_t words) nogil:
    cdef Py_ssize_t w, total = 0
    for w in range(words):
        total += __builtin_popcountll(bits[w])
    return total


cdef int _expand(
    const uint64_t* adjm,
    Py_ssize_t words,
    const uint64_t* cand,
    int* stack,
    int depth,
    int* best_size,
    int* best_members,
) except -1 nogil:
    cdef Py_ssize_t cnt = _popcount(cand, words)
    cdef int* verts = <int*> malloc(cnt * sizeof(int))
    cdef int* bounds = <int*> malloc(cnt * sizeof(int))
    cdef uint64_t* work = <uint64_t*> malloc(4 * words * sizeof(uint64_t))
    if verts == NULL or bounds == NULL or work == NULL:
        free(verts); free(bounds); free(work)
        with gil:
            raise MemoryError()
    cdef uint64_t* uncol = work
    cdef uint64_t* avail = work + words
    cdef uint64_t* local = work + 2 * words
    cdef uint64_t* sub = work + 3 * words

    # greedy coloring: same-color vertices are pairwise non-adjacent
    memcpy(uncol, cand, words * sizeof(uint64_t))
    cdef Py_ssize_t idx = 0, v, w
    cdef int color = 0
    cdef uint64_t nonzero
    while True:
        v = _first_set(uncol, words)
        if v < 0:
            break
        color += 1
        memcpy(avail, uncol, words * sizeof(uint64_t))
        while v >= 0:
            verts[idx] = <int> v
            bounds[idx] = color
            idx += 1
            uncol[v >> 6] &= ~((<uint64_t> 1) << (v & 63))
            for w in range(words):
                avail[w] &= ~adjm[v * words + w]
            avail[v >> 6] &= ~((<uint64_t> 1) << (v & 63))
            v = _first_set(avail, words)

    memcpy(local, cand, words * sizeof(uint64_t))
    cdef Py_ssize_t i
    cdef int j, vv
    for i in range(cnt - 1, -1, -1):
        if depth + bounds[i] <= best_size[0]:
            break
        vv = verts[i]
        stack[depth] = vv
        nonzero = 0
        for w in range(words):
            sub[w] = local[w] & adjm[vv * words + w]
            nonzero |= sub[w]
        if nonzero:
            _expand(adjm, words, sub, stack, depth + 1, best_size, best_members)
        elif depth + 1 > best_size[0]:
            best_size[0] = depth + 1
            for j in range(depth + 1):
                best_members[j] = stack[j]
        local[vv >> 6] &= ~((<uint64_t> 1) << (vv & 63))
    free(verts)
    free(bounds)
    free(work)
    return 0


def max_clique(adj_words, Py_ssize_t n):
    """Maximum clique over little-endian uint64 bitset adjacency rows.

    Mirrors the pure implementation exactly: vertices are renumbered by
    descending degree (ties by index) before the search, so both backends
    explore in the same order and return the same witness.
    """
    if n == 0:
        return 0, np.empty(0, dtype=np.int64)
    arr = np.ascontiguousarray(adj_words, dtype=np.uint64)
    cdef Py_ssize_t words = arr.shape[1]
    dense = np.unpackbits(
        arr.view(np.uint8), axis=1, bitorder="little", count=n
    ).astype(bool)
    deg = dense.sum(axis=1)
    order = np.lexsort((np.arange(n), -deg)).astype(np.int64)
    perm = dense[np.ix_(order, order)]
    packed = np.packbits(perm, axis=1, bitorder="little")
    pad = words * 8 - packed.shape[1]
    if pad > 0:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    packed = np.ascontiguousarray(packed).view("<u8")

    cdef const uint64_t[:, ::1] adjm = packed
    cdef uint64_t* cand = <uint64_t*> malloc(words * sizeof(uint64_t))
    cdef int* stack = <int*> malloc(n * sizeof(int))
    cdef int* best_members = <int*> malloc(n * sizeof(int))
    if cand == NULL or stack == NULL or best_members == NULL:
        free(cand); free(stack); free(best_members)
        raise MemoryError()
    cdef Py_ssize_t w
    for w in range(words):
        cand[w] = 0
    for w in range(n):
        cand[w >> 6] |= (<uint64_t> 1) << (w & 63)
    cdef int best_size = 0
    try:
        with nogil:
            _expand(&adjm[0, 0], words, cand, stack, 0, &best_size, best_members)
        members = np.array(
            sorted(int(order[best_members[j]]) for j in range(best_size)),
            dtype=np.int64,
        )
    finally:
        free(cand)
        free(stack)
        free(best_members)
    return int(best_size), members
