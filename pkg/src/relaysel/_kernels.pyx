# cython: language_level=3
"""Compiled kernels.  ``_fallback.py`` mirrors every function here."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


def hungarian_max(double[:, ::1] w):
    """Row -> column permutation maximising ``sum w[i, perm[i]]``.

    Shortest-augmenting-path Hungarian method with row/column potentials,
    O(n^3).  Runs on costs ``-w``.
    """
    cdef Py_ssize_t n = w.shape[0]
    if w.shape[1] != n:
        raise ValueError("matrix must be square")
    out = np.empty(n, dtype=np.intp)
    if n == 0:
        return out

    # 1-based arrays, slot 0 is the virtual root column/row
    cdef double[::1] u = np.zeros(n + 1)
    cdef double[::1] v = np.zeros(n + 1)
    cdef double[::1] minv = np.empty(n + 1)
    cdef Py_ssize_t[::1] p = np.zeros(n + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] way = np.zeros(n + 1, dtype=np.intp)
    cdef unsigned char[::1] used = np.zeros(n + 1, dtype=np.uint8)
    cdef Py_ssize_t[::1] res = out

    cdef Py_ssize_t i, j, i0, j0, j1
    cdef double delta, cur, ui0
    cdef const double* row

    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        for j in range(n + 1):
            minv[j] = INFINITY
            used[j] = 0
        while True:
            used[j0] = 1
            i0 = p[j0]
            ui0 = u[i0]
            row = &w[i0 - 1, 0]
            delta = INFINITY
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = -row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            if j1 == 0:
                raise ValueError("matrix must be finite")
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break

    for j in range(1, n + 1):
        res[p[j] - 1] = j - 1
    return out
