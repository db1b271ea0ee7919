# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled pursuit inner-loop kernels.

Same contract as blockpursuit._pykernels; that module is the readable
reference.  These loops matter because the per-call matrices are tiny
(an 8x8 block against a 24-atom bank) and the pursuit executes them once
per selection step and once per block at startup.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


cdef inline void _bank_times_block(const double[:, ::1] bank_t,
                                   const double[:, ::1] block,
                                   double[:, ::1] tmp) noexcept nogil:
    cdef Py_ssize_t m = bank_t.shape[0]
    cdef Py_ssize_t n = bank_t.shape[1]
    cdef Py_ssize_t p, i, j
    cdef double w
    for p in range(m):
        for j in range(n):
            tmp[p, j] = 0.0
        for i in range(n):
            w = bank_t[p, i]
            for j in range(n):
                tmp[p, j] += w * block[i, j]


def correlations(const double[:, ::1] bank_t, const double[:, ::1] block):
    cdef Py_ssize_t m = bank_t.shape[0]
    cdef Py_ssize_t n = bank_t.shape[1]
    tmp_arr = np.empty((m, n), dtype=np.float64)
    out_arr = np.empty((m, m), dtype=np.float64)
    cdef double[:, ::1] tmp = tmp_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t p, q, j
    cdef double acc
    with nogil:
        _bank_times_block(bank_t, block, tmp)
        for p in range(m):
            for q in range(m):
                acc = 0.0
                for j in range(n):
                    acc += tmp[p, j] * bank_t[q, j]
                out[p, q] = acc
    return out_arr


def best_correlation(const double[:, ::1] bank_t, const double[:, ::1] block):
    cdef Py_ssize_t m = bank_t.shape[0]
    cdef Py_ssize_t n = bank_t.shape[1]
    tmp_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] tmp = tmp_arr
    cdef Py_ssize_t p, q, j
    cdef Py_ssize_t best_p = 0, best_q = 0
    cdef double acc, mag, best_mag = -1.0, best_val = 0.0
    with nogil:
        _bank_times_block(bank_t, block, tmp)
        for p in range(m):
            for q in range(m):
                acc = 0.0
                for j in range(n):
                    acc += tmp[p, j] * bank_t[q, j]
                mag = acc if acc >= 0.0 else -acc
                if mag > best_mag:
                    best_mag = mag
                    best_val = acc
                    best_p = p
                    best_q = q
    return best_p, best_q, best_val


def batch_best_correlation(const double[:, ::1] bank_t, const double[:, :, ::1] blocks):
    cdef Py_ssize_t nblocks = blocks.shape[0]
    ps_arr = np.empty(nblocks, dtype=np.int64)
    qs_arr = np.empty(nblocks, dtype=np.int64)
    vals_arr = np.empty(nblocks, dtype=np.float64)
    cdef Py_ssize_t b
    for b in range(nblocks):
        p, q, v = best_correlation(bank_t, blocks[b])
        ps_arr[b] = p
        qs_arr[b] = q
        vals_arr[b] = v
    return ps_arr, qs_arr, vals_arr


def subtract_outer(double[:, ::1] block, double c, const double[::1] u, const double[::1] v):
    cdef Py_ssize_t n0 = block.shape[0]
    cdef Py_ssize_t n1 = block.shape[1]
    cdef Py_ssize_t i, j
    cdef double cu
    with nogil:
        for i in range(n0):
            cu = c * u[i]
            for j in range(n1):
                block[i, j] -= cu * v[j]


def orthogonalize(const double[:, ::1] basis, const double[::1] d):
    cdef Py_ssize_t k = basis.shape[0]
    cdef Py_ssize_t n = d.shape[0]
    u_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] u = u_arr
    cdef Py_ssize_t r, j, rep
    cdef double g, norm2
    with nogil:
        for j in range(n):
            u[j] = d[j]
        for rep in range(2):
            for r in range(k):
                g = 0.0
                for j in range(n):
                    g += basis[r, j] * u[j]
                for j in range(n):
                    u[j] -= g * basis[r, j]
        norm2 = 0.0
        for j in range(n):
            norm2 += u[j] * u[j]
    return u_arr, float(np.sqrt(norm2))


def update_duals(double[:, ::1] duals, const double[::1] d_new, const double[::1] b_new):
    cdef Py_ssize_t k = duals.shape[0]
    cdef Py_ssize_t n = duals.shape[1]
    cdef Py_ssize_t r, j
    cdef double g
    with nogil:
        for r in range(k):
            g = 0.0
            for j in range(n):
                g += duals[r, j] * d_new[j]
            for j in range(n):
                duals[r, j] -= g * b_new[j]
