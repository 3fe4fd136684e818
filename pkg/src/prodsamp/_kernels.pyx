# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Kronecker-factored apply and eigenvalue tables.

Same contract as the numpy fallback in _kernels_py; dispatch happens in
prodsamp.kernels.  The mode-product sweeps call BLAS dgemm directly on
row-major blocks, avoiding the temporaries of the broadcasting path.
"""

import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_blas cimport dgemm

cnp.import_array()

BACKEND = "compiled"

cdef int _KRONECKER = 0
cdef int _CARTESIAN = 1
cdef int _STRONG = 2

KIND_KRONECKER = _KRONECKER
KIND_CARTESIAN = _CARTESIAN
KIND_STRONG = _STRONG


cdef void _gemm_rowmajor(double* a, double* b, double* c,
                         int m, int k, int n) noexcept nogil:
    # Row-major C(m,n) = A(m,k) @ B(k,n) via column-major dgemm on the
    # transposed views: C^T = B^T A^T.
    cdef char no = b'N'
    cdef double one = 1.0, zero = 0.0
    dgemm(&no, &no, &n, &m, &k, &one, b, &n, a, &k, &zero, c, &n)


cdef void _gemm_rowmajor_bt(double* t, double* m_mat, double* c,
                            int rows, int q, int p) noexcept nogil:
    # Row-major C(rows,p) = T(rows,q) @ M(p,q)^T without materializing M^T:
    # column-major C^T(p,rows) = M(p,q) @ T^T(q,rows), with M supplied as
    # the transpose of its row-major view.
    cdef char tr = b'T'
    cdef char no = b'N'
    cdef double one = 1.0, zero = 0.0
    dgemm(&tr, &no, &p, &rows, &q, &one, m_mat, &q, t, &q, &zero, c, &p)


def kron_apply(mats, const double[::1] y):
    """Apply (M1 kron ... kron MJ) to y by J mode-product sweeps."""
    cdef Py_ssize_t n_factors = len(mats)
    cdef Py_ssize_t j, l
    cdef int p, q, lead, trail
    cdef const double[:, ::1] m_view
    cdef double[::1] cur = np.array(y, dtype=np.float64)
    cdef double[::1] nxt
    cdef Py_ssize_t cur_size = cur.shape[0]

    trail = 1
    for j in range(n_factors - 1, -1, -1):
        m_view = mats[j]
        p = <int> m_view.shape[0]
        q = <int> m_view.shape[1]
        lead = <int> (cur_size // (<Py_ssize_t> q * trail))
        nxt = np.empty(<Py_ssize_t> lead * p * trail, dtype=np.float64)
        with nogil:
            if trail == 1:
                # One fused call: rows of the (lead, q) slab hit M^T.
                _gemm_rowmajor_bt(&cur[0], <double*> &m_view[0, 0], &nxt[0], lead, q, p)
            else:
                for l in range(lead):
                    _gemm_rowmajor(<double*> &m_view[0, 0],
                                   &cur[0] + l * q * trail,
                                   &nxt[0] + l * p * trail,
                                   p, q, trail)
        cur = nxt
        cur_size = cur.shape[0]
        trail *= p
    return np.asarray(cur)


def eigenvalue_table(factor_eigenvalues, int kind):
    """Product-graph eigenvalues over all index tuples, in flat order."""
    cdef Py_ssize_t n_factors = len(factor_eigenvalues)
    cdef Py_ssize_t j, a, b, size, nj
    cdef const double[::1] lam
    cdef double[::1] table
    cdef double[::1] nxt
    cdef double v

    lam = np.ascontiguousarray(factor_eigenvalues[0], dtype=np.float64)
    size = lam.shape[0]
    table = np.empty(size, dtype=np.float64)
    for a in range(size):
        v = lam[a]
        table[a] = v + 1.0 if kind == _STRONG else v

    for j in range(1, n_factors):
        lam = np.ascontiguousarray(factor_eigenvalues[j], dtype=np.float64)
        nj = lam.shape[0]
        nxt = np.empty(size * nj, dtype=np.float64)
        with nogil:
            for a in range(size):
                v = table[a]
                for b in range(nj):
                    if kind == _CARTESIAN:
                        nxt[a * nj + b] = v + lam[b]
                    elif kind == _STRONG:
                        nxt[a * nj + b] = v * (lam[b] + 1.0)
                    else:
                        nxt[a * nj + b] = v * lam[b]
        table = nxt
        size = size * nj

    out = np.asarray(table)
    if kind == _STRONG:
        out = out - 1.0
    return out
