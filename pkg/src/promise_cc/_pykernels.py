"""Pure-Python/numpy kernels.

Fallback implementations of the hot inner loops; the compiled extension in
_core.pyx exports the same call signatures.  Vectors are complex128 arrays,
bitset adjacency rows are little-endian uint64 words (bit v of row u set iff
u and v are compatible).
"""

import sys

import numpy as np


def diagonal_phase(signs, vec):
    """Multiply amplitude i by signs[i] (entries are +-1)."""
    return vec * signs


def pair_swap(idx_a, idx_b, vec):
    """Exchange amplitudes at idx_a[j] and idx_b[j] for every j."""
    out = vec.copy()
    out[idx_a] = vec[idx_b]
    out[idx_b] = vec[idx_a]
    return out


def rotation_block(c, s, vec):
    """Apply the real block ((c, -s), (s, c)) to amplitudes 0 and 1."""
    out = vec.copy()
    out[0] = c * vec[0] - s * vec[1]
    out[1] = s * vec[0] + c * vec[1]
    return out


def dense_matvec(mat, vec):
    return mat @ vec


def _rows_to_ints(adj_words, n):
    return [int.from_bytes(adj_words[i].tobytes(), "little") for i in range(n)]


def max_clique(adj_words, n):
    """Maximum clique by branch and bound with greedy-coloring upper bounds.

    Vertices are renumbered by descending degree before the search; candidate
    sets live in arbitrary-precision ints used as bitsets.  Returns
    (size, sorted member labels).  Deterministic for a fixed input.
    """
    if n == 0:
        return 0, np.empty(0, dtype=np.int64)
    rows = _rows_to_ints(adj_words, n)
    order = sorted(range(n), key=lambda v: (-rows[v].bit_count(), v))
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    adj = [0] * n
    for new_u, old_u in enumerate(order):
        m = rows[old_u]
        a = 0
        while m:
            lsb = m & -m
            a |= 1 << pos[lsb.bit_length() - 1]
            m ^= lsb
        adj[new_u] = a

    best_size = 0
    best_members: list[int] = []
    stack: list[int] = []

    def expand(cand):
        nonlocal best_size, best_members
        # Greedy coloring of the candidate set; vertices with the same color
        # are pairwise non-adjacent, so depth + color bounds any clique below.
        verts = []
        bounds = []
        uncolored = cand
        color = 0
        while uncolored:
            color += 1
            avail = uncolored
            while avail:
                lsb = avail & -avail
                v = lsb.bit_length() - 1
                verts.append(v)
                bounds.append(color)
                uncolored ^= lsb
                avail &= ~(adj[v] | lsb)
        for i in range(len(verts) - 1, -1, -1):
            if len(stack) + bounds[i] <= best_size:
                return
            v = verts[i]
            stack.append(v)
            sub = cand & adj[v]
            if sub:
                expand(sub)
            elif len(stack) > best_size:
                best_size = len(stack)
                best_members = stack.copy()
            stack.pop()
            cand &= ~(1 << v)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, n + 128))
    try:
        expand((1 << n) - 1)
    finally:
        sys.setrecursionlimit(old_limit)
    members = np.array(sorted(order[v] for v in best_members), dtype=np.int64)
    return best_size, members
