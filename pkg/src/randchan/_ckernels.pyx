# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair-histogram kernel for the exact moment sums."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def pair_histogram(const signed char[:, ::1] perms,
                   const signed char[:, ::1] invperms,
                   const signed char[::1] e1,
                   const signed char[::1] e2,
                   const signed char[::1] e3,
                   const short[::1] class_lookup,
                   int ncls):
    """Count ``H[e1[a], e2[a], e3[b], class(a^-1 b)]`` over all pairs ``(a, b)``."""
    cdef Py_ssize_t P = perms.shape[0]
    cdef int p = perms.shape[1]
    cdef int base = p + 1
    out = np.zeros((base, base, base, ncls), dtype=np.int64)
    cdef long long[:, :, :, ::1] H = out
    cdef Py_ssize_t a, b
    cdef int i, j, r, x1, x2
    cdef long key
    cdef signed char comp[32]
    cdef signed char seen[32]
    cdef long powers[32]
    powers[0] = 1
    for i in range(1, p):
        powers[i] = powers[i - 1] * base
    with nogil:
        for a in range(P):
            x1 = e1[a]
            x2 = e2[a]
            for b in range(P):
                for i in range(p):
                    comp[i] = invperms[a, perms[b, i]]
                    seen[i] = 0
                key = 0
                for i in range(p):
                    if seen[i]:
                        continue
                    r = 0
                    j = i
                    while not seen[j]:
                        seen[j] = 1
                        j = comp[j]
                        r += 1
                    key += powers[r - 1]
                H[x1, x2, e3[b], class_lookup[key]] += 1
    return out
