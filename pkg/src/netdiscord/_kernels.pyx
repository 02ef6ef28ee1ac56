# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Same signatures as ``netdiscord._pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef double _off_norm(double[:, ::1] a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += a[i, j] * a[i, j]
    return sqrt(acc)


def jacobi_eigh(a_in, schedule, double tol, int max_sweeps):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a_arr = np.array(a_in, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a_arr.shape[0]
    # eigenvectors are accumulated as rows for contiguous access
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v_arr = np.eye(n)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] v = v_arr
    cdef cnp.ndarray[cnp.intp_t, ndim=3] sched = np.ascontiguousarray(schedule, dtype=np.intp)
    cdef const Py_ssize_t[:, :, ::1] sc = sched
    cdef Py_ssize_t rounds = sched.shape[0]
    cdef Py_ssize_t m = sched.shape[1]
    cdef Py_ssize_t r, k, i, p, q
    cdef double apq, app, aqq, theta, t, c, s, x, y
    cdef int sweeps = 0
    cdef double off

    with nogil:
        off = _off_norm(a, n)
        while off > tol and sweeps < max_sweeps:
            for r in range(rounds):
                for k in range(m):
                    p = sc[r, k, 0]
                    q = sc[r, k, 1]
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    app = a[p, p]
                    aqq = a[q, q]
                    theta = (aqq - app) / (2.0 * apq)
                    if theta == 0.0:
                        t = 1.0
                    elif theta > 0.0:
                        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    # symmetric: rotate rows p, q then mirror into the columns
                    for i in range(n):
                        if i == p or i == q:
                            continue
                        x = a[p, i]
                        y = a[q, i]
                        x, y = c * x - s * y, s * x + c * y
                        a[p, i] = x
                        a[q, i] = y
                        a[i, p] = x
                        a[i, q] = y
                    a[p, p] = app - t * apq
                    a[q, q] = aqq + t * apq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for i in range(n):
                        x = v[p, i]
                        y = v[q, i]
                        v[p, i] = c * x - s * y
                        v[q, i] = s * x + c * y
            sweeps += 1
            off = _off_norm(a, n)
    return np.diag(a_arr).copy(), np.ascontiguousarray(v_arr.T), sweeps, off


def agent_payoffs(g_in, a_in, f_in, double beta):
    cdef const double[:, ::1] g = np.ascontiguousarray(g_in, dtype=np.float64)
    cdef const double[::1] a = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef const double[::1] f = np.ascontiguousarray(f_in, dtype=np.float64)
    cdef Py_ssize_t n = g.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double acc, d, dist
    with nogil:
        for i in range(n):
            acc = 0.0
            dist = (a[i] - f[i]) * (a[i] - f[i])
            for j in range(n):
                d = a[i] - a[j]
                acc += g[i, j] * (-beta * d * d - (1.0 - beta) * dist)
            out[i] = acc
    return out_arr
