# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled curvature kernels; same contracts as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp

from bmetric._kernels_py import DegenerateMetricError, DEGENERACY_TOL

cnp.import_array()


cdef double _inv(const double[:, ::1] g, double[:, ::1] out, Py_ssize_t n) except? -1.0:
    cdef double det
    if n == 2:
        det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
        if abs(det) < DEGENERACY_TOL:
            return det
        out[0, 0] = g[1, 1] / det
        out[1, 1] = g[0, 0] / det
        out[0, 1] = -g[0, 1] / det
        out[1, 0] = -g[1, 0] / det
        return det
    if n == 3:
        det = (g[0, 0] * (g[1, 1] * g[2, 2] - g[1, 2] * g[2, 1])
               - g[0, 1] * (g[1, 0] * g[2, 2] - g[1, 2] * g[2, 0])
               + g[0, 2] * (g[1, 0] * g[2, 1] - g[1, 1] * g[2, 0]))
        if abs(det) < DEGENERACY_TOL:
            return det
        out[0, 0] = (g[1, 1] * g[2, 2] - g[1, 2] * g[2, 1]) / det
        out[0, 1] = (g[0, 2] * g[2, 1] - g[0, 1] * g[2, 2]) / det
        out[0, 2] = (g[0, 1] * g[1, 2] - g[0, 2] * g[1, 1]) / det
        out[1, 0] = (g[1, 2] * g[2, 0] - g[1, 0] * g[2, 2]) / det
        out[1, 1] = (g[0, 0] * g[2, 2] - g[0, 2] * g[2, 0]) / det
        out[1, 2] = (g[0, 2] * g[1, 0] - g[0, 0] * g[1, 2]) / det
        out[2, 0] = (g[1, 0] * g[2, 1] - g[1, 1] * g[2, 0]) / det
        out[2, 1] = (g[0, 1] * g[2, 0] - g[0, 0] * g[2, 1]) / det
        out[2, 2] = (g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]) / det
        return det
    raise ValueError("compiled kernels support dimension 2 or 3")


def inverse_metric(g):
    cdef double[:, ::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef Py_ssize_t n = gv.shape[0]
    out = np.empty((n, n))
    cdef double det = _inv(gv, out, n)
    if abs(det) < DEGENERACY_TOL:
        raise DegenerateMetricError(f"degenerate metric: |det g| = {abs(det):.3e}")
    return out


cdef void _christoffel(const double[:, :, ::1] dg, const double[:, ::1] ginv,
                       double[:, :, ::1] g1, double[:, :, ::1] gam, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, k, l
    cdef double s
    for l in range(n):
        for i in range(n):
            for j in range(n):
                g1[l, i, j] = 0.5 * (dg[i, j, l] + dg[j, i, l] - dg[l, i, j])
    for k in range(n):
        for i in range(n):
            for j in range(n):
                s = 0.0
                for l in range(n):
                    s += ginv[k, l] * g1[l, i, j]
                gam[k, i, j] = s


def christoffel(g, dg):
    ginv = inverse_metric(g)
    cdef double[:, :, ::1] dgv = np.ascontiguousarray(dg, dtype=np.float64)
    cdef Py_ssize_t n = dgv.shape[0]
    gamma1 = np.empty((n, n, n))
    gamma = np.empty((n, n, n))
    _christoffel(dgv, ginv, gamma1, gamma, n)
    return ginv, gamma1, gamma


def curvature(g, dg, ddg):
    ginv = inverse_metric(g)
    cdef double[:, :, ::1] dgv = np.ascontiguousarray(dg, dtype=np.float64)
    cdef double[:, :, :, ::1] ddgv = np.ascontiguousarray(ddg, dtype=np.float64)
    cdef Py_ssize_t n = dgv.shape[0]
    gamma1_a = np.empty((n, n, n))
    gamma_a = np.empty((n, n, n))
    riemann_a = np.empty((n, n, n, n))
    cdef double[:, :, ::1] g1 = gamma1_a
    cdef double[:, :, ::1] gam = gamma_a
    cdef double[:, :, :, ::1] rm = riemann_a
    cdef Py_ssize_t i, j, k, l, m
    cdef double s
    _christoffel(dgv, ginv, g1, gam, n)
    with nogil:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        # d_i gamma1[l,j,k] - d_j gamma1[l,i,k]
                        s = 0.5 * (ddgv[i, j, k, l] + ddgv[i, k, j, l] - ddgv[i, l, j, k])
                        s -= 0.5 * (ddgv[j, i, k, l] + ddgv[j, k, i, l] - ddgv[j, l, i, k])
                        for m in range(n):
                            s += -dgv[i, m, l] * gam[m, j, k] + dgv[j, m, l] * gam[m, i, k]
                            s += gam[m, j, k] * g1[l, i, m] - gam[m, i, k] * g1[l, j, m]
                        rm[i, j, k, l] = s
    return ginv, gamma_a, riemann_a


def nabla_endomorphism(gamma, phi, dphi):
    cdef double[:, :, ::1] gam = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef double[:, ::1] ph = np.ascontiguousarray(phi, dtype=np.float64)
    out_a = np.array(dphi, dtype=np.float64, order="C", copy=True)
    cdef double[:, :, ::1] out = out_a
    cdef Py_ssize_t n = gam.shape[0]
    cdef Py_ssize_t a, b, c, d
    cdef double s
    with nogil:
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    s = 0.0
                    for d in range(n):
                        s += gam[b, a, d] * ph[d, c] - ph[b, d] * gam[d, a, c]
                    out[a, b, c] += s
    return out_a
