"""Pure numpy implementations of the hot kernels.

Selected at import time by :mod:`prodsamp.kernels` whenever the compiled
extension is unavailable (or disabled via PRODSAMP_PURE_PYTHON=1).  Inputs
are pre-validated by the dispatcher: float64, C-contiguous, consistent
shapes.
"""

import numpy as np

BACKEND = "python"

KIND_KRONECKER = 0
KIND_CARTESIAN = 1
KIND_STRONG = 2


def kron_apply(mats, y):
    """Apply (M1 kron ... kron MJ) to y by J mode-product sweeps.

    Sweeps run from the last factor to the first so the innermost stride
    stays contiguous under the flat-index convention.  Cost is
    sum_j p_j * (prod_{l<j} q_l) * (prod_{l>j} p_l) * q_j flops instead of
    (prod p_j) * (prod q_j) for the dense operator.
    """
    out = y
    trail = 1
    for m in reversed(mats):
        p, q = m.shape
        lead = out.size // (q * trail)
        out = np.matmul(m, out.reshape(lead, q, trail))
        trail *= p
    return np.ascontiguousarray(out.reshape(-1))


def eigenvalue_table(factor_eigenvalues, kind):
    """Product-graph eigenvalues over all index tuples, in flat order.

    kron: products; cart: sums; strong: prod(1 + lam) - 1.
    """
    if kind == KIND_CARTESIAN:
        table = factor_eigenvalues[0]
        for lam in factor_eigenvalues[1:]:
            table = np.add.outer(table, lam).reshape(-1)
        return table
    terms = factor_eigenvalues
    if kind == KIND_STRONG:
        terms = [lam + 1.0 for lam in terms]
    table = terms[0]
    for lam in terms[1:]:
        table = np.multiply.outer(table, lam).reshape(-1)
    if kind == KIND_STRONG:
        table = table - 1.0
    return np.ascontiguousarray(table)
