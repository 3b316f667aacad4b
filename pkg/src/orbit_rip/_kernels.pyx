# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels; ``orbit_rip._fallback`` holds the numpy twins."""
from libc.math cimport fabs, sqrt, hypot
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_lapack cimport zheev

# pruning must be strictly safe: a pruned support never ties the running best
cdef double PRUNE_SLACK = 1.0 + 1e-12


cdef inline double _dev2(double complex[:, ::1] g, int i, int j) noexcept nogil:
    # ||[[a-1, b], [conj b, d-1]]||_2 = |centre| + radius
    cdef double a = g[i, i].real, d = g[j, j].real
    cdef double half_sum = 0.5 * (a + d) - 1.0
    cdef double half_diff = 0.5 * (a - d)
    cdef double complex b = g[i, j]
    return fabs(half_sum) + sqrt(half_diff * half_diff + b.real * b.real + b.imag * b.imag)


cdef inline double _gershgorin(double complex[:, ::1] g, int *idx, int s) noexcept nogil:
    cdef double bound = 0.0, row
    cdef int r, c
    for r in range(s):
        row = fabs(g[idx[r], idx[r]].real - 1.0)
        for c in range(s):
            if c != r:
                row += hypot(g[idx[r], idx[c]].real, g[idx[r], idx[c]].imag)
        if row > bound:
            bound = row
    return bound


cdef inline bint _next_combination(int *idx, int s, int n) noexcept nogil:
    cdef int i = s - 1, r
    while i >= 0 and idx[i] == n - s + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    for r in range(i + 1, s):
        idx[r] = idx[r - 1] + 1
    return True


def rip_search(double complex[:, ::1] gram, int s):
    """Max over size-``s`` supports S (lexicographic) of ``||gram[S,S] - I||_2``.

    Returns ``(delta, support, count)``; ties keep the first support found.
    """
    cdef int n = gram.shape[0]
    if s < 1 or s > n:
        raise ValueError("need 1 <= s <= n")
    cdef int i, r, c, info = 0
    cdef int lwork = 64 * s
    cdef long long count = 0
    cdef double best = -1.0, dev, lo, hi
    cdef int *idx = <int *> malloc(s * sizeof(int))
    cdef int *best_idx = <int *> malloc(s * sizeof(int))
    cdef double complex *a = <double complex *> malloc(s * s * sizeof(double complex))
    cdef double complex *work = <double complex *> malloc(lwork * sizeof(double complex))
    cdef double *w = <double *> malloc(s * sizeof(double))
    cdef double *rwork = <double *> malloc((3 * s) * sizeof(double))
    cdef char jobz = b'N'
    cdef char uplo = b'U'
    try:
        if not (idx and best_idx and a and work and w and rwork):
            raise MemoryError()
        with nogil:
            for i in range(s):
                idx[i] = i
                best_idx[i] = i
            while True:
                count += 1
                if s == 1:
                    dev = fabs(gram[idx[0], idx[0]].real - 1.0)
                elif s == 2:
                    dev = _dev2(gram, idx[0], idx[1])
                elif _gershgorin(gram, idx, s) * PRUNE_SLACK < best:
                    dev = -1.0
                else:
                    for c in range(s):
                        for r in range(c + 1):
                            a[r + c * s] = gram[idx[r], idx[c]]
                        a[c + c * s] = a[c + c * s] - 1.0
                    zheev(&jobz, &uplo, &s, a, &s, w, work, &lwork, rwork, &info)
                    if info != 0:
                        break
                    lo = fabs(w[0])
                    hi = fabs(w[s - 1])
                    dev = hi if hi > lo else lo
                if dev > best:
                    best = dev
                    for i in range(s):
                        best_idx[i] = idx[i]
                if not _next_combination(idx, s, n):
                    break
        if info != 0:
            raise ArithmeticError(f"zheev failed with info={info}")
        support = tuple(best_idx[i] for i in range(s))
    finally:
        free(idx); free(best_idx); free(a); free(work); free(w); free(rwork)
    return best, support, count
