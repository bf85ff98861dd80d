# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: fused Crank-Nicolson stepping and heat-kernel sums.

The tridiagonal system is prefactored once (the matrices are constant in
time), so each step is a single forward/backward substitution; the
convolution loop skips kernel arguments below exp underflow.
"""

from libc.math cimport exp, sqrt

import numpy as np

NAME = "cython"

M_PI = 3.141592653589793238462643383279502884


def tridiag_steps(double[::1] v0, double[::1] a_sub, double[::1] a_diag,
                  double[::1] a_sup, double[::1] b_sub, double[::1] b_diag,
                  double[::1] b_sup, Py_ssize_t n_steps):
    """Iterate v <- A^{-1} (B v) with constant tridiagonal A (Thomas, prefactored)."""
    cdef Py_ssize_t n = v0.shape[0]
    out = np.array(v0, dtype=np.float64)
    cdef double[::1] v = out
    rhs_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] rhs = rhs_arr
    cp_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] cp = cp_arr
    inv_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] inv = inv_arr
    cdef Py_ssize_t i, step
    cdef double denom

    inv[0] = 1.0 / a_diag[0]
    cp[0] = a_sup[0] * inv[0]
    for i in range(1, n):
        denom = a_diag[i] - a_sub[i] * cp[i - 1]
        inv[i] = 1.0 / denom
        cp[i] = a_sup[i] * inv[i]

    for step in range(n_steps):
        rhs[0] = b_diag[0] * v[0] + b_sup[0] * v[1]
        for i in range(1, n - 1):
            rhs[i] = b_sub[i] * v[i - 1] + b_diag[i] * v[i] + b_sup[i] * v[i + 1]
        rhs[n - 1] = b_sub[n - 1] * v[n - 2] + b_diag[n - 1] * v[n - 1]

        v[0] = rhs[0] * inv[0]
        for i in range(1, n):
            v[i] = (rhs[i] - a_sub[i] * v[i - 1]) * inv[i]
        for i in range(n - 2, -1, -1):
            v[i] = v[i] - cp[i] * v[i + 1]
    return out


def gauss_conv(double[::1] y_out, double t, double[::1] s_nodes,
               double[::1] f_weighted):
    """out_i = sum_j f_weighted[j] * G(y_out[i] - s_nodes[j], t)."""
    cdef Py_ssize_t ny = y_out.shape[0]
    cdef Py_ssize_t ns = s_nodes.shape[0]
    out_arr = np.zeros(ny, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double norm = 1.0 / sqrt(4.0 * M_PI * t)
    cdef double inv4t = 1.0 / (4.0 * t)
    cdef Py_ssize_t i, j
    cdef double acc, d, arg

    for i in range(ny):
        acc = 0.0
        for j in range(ns):
            d = y_out[i] - s_nodes[j]
            arg = -d * d * inv4t
            if arg > -745.0:
                acc += f_weighted[j] * exp(arg)
        out[i] = acc * norm
    return out_arr
