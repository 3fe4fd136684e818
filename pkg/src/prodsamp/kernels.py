"""Backend dispatch for the hot kernels.

The compiled extension (:mod:`prodsamp._kernels`, Cython over BLAS) is
preferred; the numpy fallback (:mod:`prodsamp._kernels_py`) is selected
when the extension is missing or when the environment variable
PRODSAMP_PURE_PYTHON is set to a non-empty value.  Both backends expose
the same contract and are cross-checked in the test suite and compared in
``prodsamp bench-kernels``.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import _kernels_py
from .errors import DimensionMismatchError

KIND_CODES = {"kron": 0, "cart": 1, "strong": 2}

_compiled = None
if not os.environ.get("PRODSAMP_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

_active = _compiled if _compiled is not None else _kernels_py


def backend_name() -> str:
    """Name of the backend in use: 'compiled' or 'python'."""
    return _active.BACKEND


def available_backends() -> dict:
    """All importable backends, keyed by name (for tests and benchmarks)."""
    out = {_kernels_py.BACKEND: _kernels_py}
    if _compiled is not None:
        out[_compiled.BACKEND] = _compiled
    return out


def _prep_mats(mats):
    prepped = [np.ascontiguousarray(m, dtype=np.float64) for m in mats]
    for m in prepped:
        if m.ndim != 2:
            raise DimensionMismatchError("kron_apply factors must be 2-d matrices")
    return prepped


def kron_apply(mats, y, backend=None) -> np.ndarray:
    """Compute (M1 kron M2 kron ... kron MJ) @ y without materializing.

    Parameters
    ----------
    mats : sequence of (p_j, q_j) arrays
    y : vector of length prod q_j
    backend : optional backend module override (used by benchmarks).

    Returns
    -------
    Vector of length prod p_j.
    """
    impl = backend or _active
    mats = _prep_mats(mats)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got ndim={y.ndim}")
    q_total = math.prod(m.shape[1] for m in mats)
    if y.size != q_total:
        raise DimensionMismatchError(
            f"operand length {y.size} does not match factor columns product {q_total}"
        )
    return impl.kron_apply(mats, y)


def eigenvalue_table(factor_eigenvalues, kind: str, backend=None) -> np.ndarray:
    """Eigenvalues of a product graph over all tuples, in flat (lex) order."""
    impl = backend or _active
    lams = [np.ascontiguousarray(l, dtype=np.float64) for l in factor_eigenvalues]
    for l in lams:
        if l.ndim != 1:
            raise DimensionMismatchError("factor eigenvalues must be vectors")
    return impl.eigenvalue_table(lams, KIND_CODES[kind])
