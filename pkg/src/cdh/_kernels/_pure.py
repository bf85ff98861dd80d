"""Pure numpy/scipy implementations of the hot kernels.

Fallback backend used when the compiled extension is unavailable (or when
CDH_PURE is set); signatures and results match ``_core`` to rounding.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_banded

NAME = "pure"


def tridiag_steps(v, a_sub, a_diag, a_sup, b_sub, b_diag, b_sup, n_steps):
    """Iterate v <- A^{-1} (B v) with constant tridiagonal A and B.

    Diagonals are length-n arrays (sub/sup padded with a trailing/leading
    zero); this is one Crank-Nicolson or backward-Euler sweep per step on the
    interior unknowns of a Dirichlet problem.
    """
    v = np.array(v, dtype=float)
    n = v.size
    ab = np.zeros((3, n))
    ab[0, 1:] = a_sup[:-1]
    ab[1, :] = a_diag
    ab[2, :-1] = a_sub[1:]
    for _ in range(int(n_steps)):
        rhs = b_diag * v
        rhs[:-1] += b_sup[:-1] * v[1:]
        rhs[1:] += b_sub[1:] * v[:-1]
        v = solve_banded((1, 1), ab, rhs, overwrite_b=True, check_finite=False)
    return v


def gauss_conv(y_out, t, s_nodes, f_weighted, chunk=512):
    """out_i = sum_j f_weighted[j] * G(y_out[i] - s_nodes[j], t) with the heat kernel G."""
    y_out = np.asarray(y_out, dtype=float)
    s = np.asarray(s_nodes, dtype=float)
    fw = np.asarray(f_weighted, dtype=float)
    norm = 1.0 / math.sqrt(4.0 * math.pi * t)
    inv4t = 1.0 / (4.0 * t)
    out = np.empty_like(y_out)
    for lo in range(0, y_out.size, chunk):
        block = y_out[lo:lo + chunk, None] - s[None, :]
        np.multiply(block, block, out=block)
        np.multiply(block, -inv4t, out=block)
        np.exp(block, out=block)
        out[lo:lo + chunk] = block @ fw
    return norm * out
