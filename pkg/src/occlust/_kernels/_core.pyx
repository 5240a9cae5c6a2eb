# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for exact enumeration and local search.

Mirrors ``_fallback`` exactly, including tie-breaking.
"""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free, calloc

cnp.import_array()

ctypedef long long i64


cdef struct Search:
    int t
    const signed char* s       # row-major t x t
    int* rgs
    int* best_rgs
    i64* neg
    i64* sums                 # t x (t + 1) scratch, one row per depth
    i64 best
    i64 visited


cdef void _dfs(Search* st, int v, int nblocks, i64 profit) noexcept nogil:
    cdef int t = st.t
    cdef int u, b
    cdef i64 base
    cdef i64* sums
    cdef const signed char* row
    if v == t:
        st.visited += 1
        if profit > st.best:
            st.best = profit
            for u in range(t):
                st.best_rgs[u] = st.rgs[u]
        return
    sums = st.sums + v * (t + 1)
    for b in range(nblocks + 1):
        sums[b] = 0
    row = st.s + v * t
    for u in range(v):
        sums[st.rgs[u]] += row[u]
    base = profit + st.neg[v]
    for b in range(nblocks):
        st.rgs[v] = b
        _dfs(st, v + 1, nblocks, base + sums[b])
    st.rgs[v] = nblocks
    _dfs(st, v + 1, nblocks + 1, base)


def enumerate_best(signs):
    cdef cnp.ndarray[cnp.int8_t, ndim=2, mode="c"] s = np.ascontiguousarray(signs, dtype=np.int8)
    cdef int t = s.shape[0]
    cdef int v, u
    cdef Search st
    if t == 0:
        return [], 0, 1
    st.t = t
    st.s = <const signed char*> s.data
    st.rgs = <int*> calloc(t, sizeof(int))
    st.best_rgs = <int*> calloc(t, sizeof(int))
    st.neg = <i64*> calloc(t, sizeof(i64))
    st.sums = <i64*> calloc(t * (t + 1), sizeof(i64))
    if st.rgs == NULL or st.best_rgs == NULL or st.neg == NULL or st.sums == NULL:
        free(st.rgs); free(st.best_rgs); free(st.neg); free(st.sums)
        raise MemoryError()
    try:
        for v in range(t):
            for u in range(v):
                if st.s[v * t + u] < 0:
                    st.neg[v] += 1
        st.best = -1
        st.visited = 0
        with nogil:
            _dfs(&st, 1, 1, 0)
        rgs = [st.best_rgs[v] for v in range(t)]
        return rgs, st.best, st.visited
    finally:
        free(st.rgs); free(st.best_rgs); free(st.neg); free(st.sums)


cdef int _canonical(int* labels, int t, int* scratch) noexcept nogil:
    # scratch needs t + 1 slots; returns the number of clusters
    cdef int v, k = 0
    for v in range(t + 1):
        scratch[v] = -1
    for v in range(t):
        if scratch[labels[v]] < 0:
            scratch[labels[v]] = k
            k += 1
        labels[v] = scratch[labels[v]]
    return k


def local_search(signs, labels):
    cdef cnp.ndarray[cnp.int8_t, ndim=2, mode="c"] s = np.ascontiguousarray(signs, dtype=np.int8)
    cdef int t = s.shape[0]
    cdef int v, u, c, x, y, k, own, kind, a, b
    cdef i64 delta, best, leave
    cdef int* lab
    cdef int* scratch
    cdef int* sizes
    cdef i64* aff
    cdef i64* between
    if len(labels) != t:
        raise ValueError("labels and signs disagree on t")
    if t == 0:
        return []
    for v in range(t):
        if labels[v] < 0 or labels[v] > t:
            raise ValueError("labels must lie in [0, t]")
    lab = <int*> malloc(t * sizeof(int))
    scratch = <int*> malloc((t + 1) * sizeof(int))
    sizes = <int*> malloc((t + 1) * sizeof(int))
    aff = <i64*> malloc(t * (t + 1) * sizeof(i64))
    between = <i64*> malloc((t + 1) * (t + 1) * sizeof(i64))
    if lab == NULL or scratch == NULL or sizes == NULL or aff == NULL or between == NULL:
        free(lab); free(scratch); free(sizes); free(aff); free(between)
        raise MemoryError()
    try:
        for v in range(t):
            lab[v] = labels[v]
        with nogil:
            k = _canonical(lab, t, scratch)
            while True:
                for c in range(k):
                    sizes[c] = 0
                for v in range(t):
                    sizes[lab[v]] += 1
                    for c in range(k):
                        aff[v * (t + 1) + c] = 0
                for v in range(t):
                    for u in range(t):
                        if u != v:
                            aff[v * (t + 1) + lab[u]] += s[v, u]
                best = 0
                kind = -1
                a = -1
                b = -1
                for v in range(t):
                    own = lab[v]
                    leave = aff[v * (t + 1) + own]
                    for c in range(k + 1):
                        if c == own:
                            continue
                        if c == k:
                            if sizes[own] == 1:
                                continue
                            delta = -leave
                        else:
                            delta = aff[v * (t + 1) + c] - leave
                        if delta > best:
                            best = delta
                            kind = 0
                            a = v
                            b = c
                for x in range(k):
                    for y in range(k):
                        between[x * (t + 1) + y] = 0
                for v in range(t):
                    x = lab[v]
                    for y in range(k):
                        between[x * (t + 1) + y] += aff[v * (t + 1) + y]
                for x in range(k):
                    for y in range(x + 1, k):
                        delta = between[x * (t + 1) + y]
                        if delta > best:
                            best = delta
                            kind = 1
                            a = x
                            b = y
                if kind < 0:
                    break
                if kind == 0:
                    lab[a] = b
                else:
                    for v in range(t):
                        if lab[v] == b:
                            lab[v] = a
                k = _canonical(lab, t, scratch)
        return [lab[v] for v in range(t)]
    finally:
        free(lab); free(scratch); free(sizes); free(aff); free(between)
