# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Mirrors ``_pykernels`` exactly in signature and tie rules.

All loops release the GIL so callers may run independent kernels on threads.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log2, INFINITY
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline double _dist(const double[:, ::1] A, Py_ssize_t i,
                         const double[:, ::1] B, Py_ssize_t j, Py_ssize_t d) noexcept nogil:
    cdef double acc = 0.0, t
    cdef Py_ssize_t a
    for a in range(d):
        t = A[i, a] - B[j, a]
        acc += t * t
    return sqrt(acc)


def pairwise(const double[:, ::1] P, const double[:, ::1] Q):
    cdef Py_ssize_t n = P.shape[0], m = Q.shape[0], d = P.shape[1], i, j
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            for j in range(m):
                o[i, j] = _dist(P, i, Q, j, d)
    return out


def nearest_center(const double[:, ::1] P, const double[:, ::1] C):
    cdef Py_ssize_t n = P.shape[0], m = C.shape[0], d = P.shape[1], i, j, arg
    cdef double best, v
    labels = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] lab = labels
    cdef double[::1] dd = dist
    with nogil:
        for i in range(n):
            best = INFINITY
            arg = 0
            for j in range(m):
                v = _dist(P, i, C, j, d)
                if v < best:
                    best = v
                    arg = j
            lab[i] = arg
            dd[i] = best
    return labels, dist


cdef inline double _divisor(double size, bint fitting) noexcept nogil:
    cdef double lg
    if fitting:
        return size + 1.0
    lg = log2(size + 1.0)
    return lg * lg


def best_subset(const double[:, ::1] dist, const double[::1] weights, int k,
                bint fitting, int size_mode):
    """Lexicographic scan over k-subsets of candidate columns of `dist`.

    size_mode: 0 member count, 1 weight mass floored at 1, 2 certified
    (mass floored at the count, weighted sum floored at the unweighted sum).
    """
    cdef Py_ssize_t n = dist.shape[0], i, j, c, arg
    cdef Py_ssize_t *idx = <Py_ssize_t *> malloc(k * sizeof(Py_ssize_t))
    cdef Py_ssize_t *best_idx = <Py_ssize_t *> malloc(k * sizeof(Py_ssize_t))
    cdef double *wsum = <double *> malloc(k * sizeof(double))
    cdef double *mass = <double *> malloc(k * sizeof(double))
    cdef double *psum = <double *> malloc(k * sizeof(double))
    cdef Py_ssize_t *cnt = <Py_ssize_t *> malloc(k * sizeof(Py_ssize_t))
    cdef double best_loss = INFINITY, loss, v, bv, size, num
    if idx == NULL or best_idx == NULL or wsum == NULL or mass == NULL or psum == NULL or cnt == NULL:
        free(idx); free(best_idx); free(wsum); free(mass); free(psum); free(cnt)
        raise MemoryError()
    try:
        with nogil:
            for c in range(k):
                idx[c] = c
                best_idx[c] = c
            while True:
                for c in range(k):
                    wsum[c] = 0.0
                    mass[c] = 0.0
                    psum[c] = 0.0
                    cnt[c] = 0
                for i in range(n):
                    bv = dist[i, idx[0]]
                    arg = 0
                    for c in range(1, k):
                        v = dist[i, idx[c]]
                        if v < bv:
                            bv = v
                            arg = c
                    wsum[arg] += weights[i] * bv
                    mass[arg] += weights[i]
                    psum[arg] += bv
                    cnt[arg] += 1
                loss = 0.0
                for c in range(k):
                    if cnt[c] > 0:
                        num = wsum[c]
                        if size_mode == 1:
                            size = mass[c] if mass[c] > 1.0 else 1.0
                        elif size_mode == 2:
                            size = mass[c] if mass[c] > <double> cnt[c] else <double> cnt[c]
                            if psum[c] > num:
                                num = psum[c]
                        else:
                            size = <double> cnt[c]
                        loss += num / _divisor(size, fitting)
                if loss < best_loss:
                    best_loss = loss
                    for c in range(k):
                        best_idx[c] = idx[c]
                # next combination in lexicographic order
                c = k - 1
                while c >= 0 and idx[c] == n - k + c:
                    c -= 1
                if c < 0:
                    break
                idx[c] += 1
                for j in range(c + 1, k):
                    idx[j] = idx[j - 1] + 1
        result = tuple(int(best_idx[c]) for c in range(k))
    finally:
        free(idx); free(best_idx); free(wsum); free(mass); free(psum); free(cnt)
    return result, best_loss


cdef void _select(double *a, Py_ssize_t n, Py_ssize_t kth) noexcept nogil:
    # in-place quickselect: a[:kth + 1] holds the kth + 1 smallest values
    cdef Py_ssize_t lo = 0, hi = n - 1, i, j
    cdef double pivot, t
    while lo < hi:
        pivot = a[(lo + hi) // 2]
        i = lo
        j = hi
        while i <= j:
            while a[i] < pivot:
                i += 1
            while a[j] > pivot:
                j -= 1
            if i <= j:
                t = a[i]
                a[i] = a[j]
                a[j] = t
                i += 1
                j -= 1
        if kth <= j:
            hi = j
        elif kth >= i:
            lo = i
        else:
            return


def median_scores(const double[:, ::1] S, Py_ssize_t keep):
    """For every point p of S: sum of its `keep` smallest distances within S, over keep+1."""
    cdef Py_ssize_t m = S.shape[0], d = S.shape[1], i, j
    cdef double acc
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef double *row = <double *> malloc(m * sizeof(double))
    if row == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(m):
                for j in range(m):
                    row[j] = _dist(S, i, S, j, d)
                if keep < m:
                    _select(row, m, keep - 1)
                acc = 0.0
                for j in range(keep):
                    acc += row[j]
                o[i] = acc / (keep + 1.0)
    finally:
        free(row)
    return out
