# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: twins of kernels.pure with identical tie-breaking."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int32_t, uint64_t

ENGINE = "c"

cdef int32_t _INF = 1 << 30


def lcs_length(a, b):
    """Length of a longest common subsequence of two int sequences."""
    cdef Py_ssize_t m = len(a), n = len(b)
    if m == 0 or n == 0:
        return 0
    if n > m:
        a, b = b, a
        m, n = n, m
    cdef int32_t *bb = <int32_t *> malloc(n * sizeof(int32_t))
    cdef int32_t *prev = <int32_t *> malloc((n + 1) * sizeof(int32_t))
    cdef int32_t *cur = <int32_t *> malloc((n + 1) * sizeof(int32_t))
    if bb == NULL or prev == NULL or cur == NULL:
        free(bb); free(prev); free(cur)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef int32_t ai, up, left, result
    cdef int32_t *tmp
    try:
        for j in range(n):
            bb[j] = b[j]
        for j in range(n + 1):
            prev[j] = 0
            cur[j] = 0
        for i in range(1, m + 1):
            ai = a[i - 1]
            for j in range(1, n + 1):
                if ai == bb[j - 1]:
                    cur[j] = prev[j - 1] + 1
                else:
                    up = prev[j]
                    left = cur[j - 1]
                    cur[j] = up if up >= left else left
            tmp = prev; prev = cur; cur = tmp
        result = prev[n]
    finally:
        free(bb); free(prev); free(cur)
    return result


def lcs_match_mask(ref, cand):
    """Positions in ``ref`` matched by one canonical LCS against ``cand``.

    Same traceback rule as the pure twin: diagonal on equal tokens, else up
    when dp[i-1][j] >= dp[i][j-1], else left.
    """
    cdef Py_ssize_t m = len(ref), n = len(cand)
    if m == 0 or n == 0:
        return []
    cdef int32_t *rr = <int32_t *> malloc(m * sizeof(int32_t))
    cdef int32_t *cc = <int32_t *> malloc(n * sizeof(int32_t))
    cdef int32_t *dp = <int32_t *> malloc((m + 1) * (n + 1) * sizeof(int32_t))
    if rr == NULL or cc == NULL or dp == NULL:
        free(rr); free(cc); free(dp)
        raise MemoryError()
    cdef Py_ssize_t i, j, w = n + 1
    cdef int32_t ri, up, left
    matched = []
    try:
        for i in range(m):
            rr[i] = ref[i]
        for j in range(n):
            cc[j] = cand[j]
        for j in range(w):
            dp[j] = 0
        for i in range(1, m + 1):
            ri = rr[i - 1]
            dp[i * w] = 0
            for j in range(1, n + 1):
                if ri == cc[j - 1]:
                    dp[i * w + j] = dp[(i - 1) * w + j - 1] + 1
                else:
                    up = dp[(i - 1) * w + j]
                    left = dp[i * w + j - 1]
                    dp[i * w + j] = up if up >= left else left
        i = m
        j = n
        while i > 0 and j > 0:
            if rr[i - 1] == cc[j - 1]:
                matched.append(i - 1)
                i -= 1
                j -= 1
            elif dp[(i - 1) * w + j] >= dp[i * w + j - 1]:
                i -= 1
            else:
                j -= 1
    finally:
        free(rr); free(cc); free(dp)
    matched.reverse()
    return matched


def min_cover_dp(masks, n_units):
    """Minimum-cardinality cover over bitmask states; twin of pure version."""
    cdef int nu = n_units
    if nu == 0:
        return []
    if nu >= 26:
        raise ValueError("dp table too large; use branch-and-bound")
    cdef Py_ssize_t n_sent = len(masks)
    cdef uint64_t full = (<uint64_t> 1 << nu) - 1
    cdef Py_ssize_t size = <Py_ssize_t> full + 1
    cdef uint64_t *cmasks = <uint64_t *> malloc(n_sent * sizeof(uint64_t))
    cdef int32_t *dist = <int32_t *> malloc(size * sizeof(int32_t))
    cdef uint64_t *parent = <uint64_t *> malloc(size * sizeof(uint64_t))
    cdef int32_t *choice = <int32_t *> malloc(size * sizeof(int32_t))
    # covering lists flattened: cov_idx[u]..cov_idx[u+1] slice of cov_flat
    cdef int32_t *cov_count = <int32_t *> malloc(nu * sizeof(int32_t))
    cdef int32_t *cov_start = <int32_t *> malloc((nu + 1) * sizeof(int32_t))
    cdef int32_t *cov_flat = NULL
    if (cmasks == NULL or dist == NULL or parent == NULL or choice == NULL
            or cov_count == NULL or cov_start == NULL):
        free(cmasks); free(dist); free(parent); free(choice)
        free(cov_count); free(cov_start)
        raise MemoryError()
    cdef Py_ssize_t s, state, total
    cdef int u
    cdef uint64_t mask, rem, new
    cdef int32_t d, nd
    cdef Py_ssize_t k, start, end
    try:
        for s in range(n_sent):
            cmasks[s] = masks[s]
        for u in range(nu):
            cov_count[u] = 0
        total = 0
        for s in range(n_sent):
            rem = cmasks[s]
            u = 0
            while rem:
                if rem & 1:
                    cov_count[u] += 1
                    total += 1
                rem >>= 1
                u += 1
        cov_start[0] = 0
        for u in range(nu):
            if cov_count[u] == 0:
                raise ValueError(f"unit {u} is covered by no sentence")
            cov_start[u + 1] = cov_start[u] + cov_count[u]
        cov_flat = <int32_t *> malloc(total * sizeof(int32_t))
        if cov_flat == NULL:
            raise MemoryError()
        for u in range(nu):
            cov_count[u] = 0  # reuse as a fill cursor
        for s in range(n_sent):
            rem = cmasks[s]
            u = 0
            while rem:
                if rem & 1:
                    cov_flat[cov_start[u] + cov_count[u]] = <int32_t> s
                    cov_count[u] += 1
                rem >>= 1
                u += 1
        for state in range(size):
            dist[state] = _INF
            parent[state] = 0
            choice[state] = -1
        dist[0] = 0
        for state in range(size - 1):
            d = dist[state]
            if d == _INF:
                continue
            rem = (~(<uint64_t> state)) & full
            u = 0
            while not (rem & 1):
                rem >>= 1
                u += 1
            nd = d + 1
            start = cov_start[u]
            end = cov_start[u + 1]
            for k in range(start, end):
                s = cov_flat[k]
                new = (<uint64_t> state) | cmasks[s]
                if nd < dist[new]:
                    dist[new] = nd
                    parent[new] = <uint64_t> state
                    choice[new] = <int32_t> s
        selection = []
        mask = full
        while mask:
            selection.append(choice[mask])
            mask = parent[mask]
    finally:
        free(cmasks); free(dist); free(parent); free(choice)
        free(cov_count); free(cov_start); free(cov_flat)
    selection.sort()
    return selection
