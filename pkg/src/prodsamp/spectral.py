"""Eigendecomposition, the graph Fourier transform, and product spectra.

The product spectrum is lazy: it stores only the per-factor eigenbases
and eigenvalues, and assembles product eigenpairs on demand.  Eigenvector
tuples are indexed exactly like product nodes (factor 1 most significant),
so the assembled basis agrees with the Kronecker product of the factor
bases column by column.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatchError,
    NotSymmetricError,
    NumericalFailureError,
    OutOfRangeError,
    TooLargeError,
)
from .graphs import Graph, ProductGraph, ProductKind

# Numerical guarantees checked after every eigendecomposition.
RESIDUAL_TOL = 1e-8
INVERSE_TOL = 1e-10

# product_eigenvector refuses to assemble vectors longer than this.
_MAX_VECTOR_LEN = 1 << 26


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigendecomposition A = V diag(lam) U of a symmetric graph shift.

    Columns of ``v`` are eigenvectors, ``u = v.T`` is the inverse basis,
    and ``eigenvalues`` is sorted descending.  Each column is sign-fixed so
    its largest-magnitude entry is positive, which makes decompositions
    deterministic enough to test against.
    """

    graph_n: int
    v: np.ndarray
    u: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self):
        self.v.setflags(write=False)
        self.u.setflags(write=False)
        self.eigenvalues.setflags(write=False)


def _fix_signs(v: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def _validate(shift: np.ndarray, v: np.ndarray, u: np.ndarray, lam: np.ndarray):
    resid = np.linalg.norm(shift @ v - v * lam, axis=0)
    bound = RESIDUAL_TOL * (1.0 + np.abs(lam)) * np.linalg.norm(v, axis=0)
    if np.any(resid > bound):
        raise NumericalFailureError("eigenpair residual exceeds tolerance")
    if np.max(np.abs(u @ v - np.eye(v.shape[0]))) > INVERSE_TOL:
        raise NumericalFailureError("inverse eigenbasis check failed")
    if np.max(np.abs(np.linalg.norm(v, axis=0) - 1.0)) > INVERSE_TOL:
        raise NumericalFailureError("eigenvector columns are not unit norm")


def eigendecompose(g: Graph) -> Spectrum:
    """Spectral decomposition of a symmetric graph shift.

    Eigenvalues come out sorted descending (the adjacency-shift convention
    where the largest eigenvalue is the smoothest frequency); ties keep
    LAPACK's order.  The result is validated against the residual and
    inverse invariants and :class:`NumericalFailureError` is raised if the
    solver did not deliver.

    Raises
    ------
    NotSymmetricError
        If the graph is not symmetric.
    NumericalFailureError
        If the eigensolver fails to converge or invariants do not hold.
    """
    if not g.symmetric:
        raise NotSymmetricError("eigendecompose requires a symmetric shift")
    try:
        lam, v = np.linalg.eigh(g.shift)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigensolver failed: {exc}") from exc
    order = np.argsort(-lam, kind="stable")
    lam = np.ascontiguousarray(lam[order])
    v = _fix_signs(np.ascontiguousarray(v[:, order]))
    u = np.ascontiguousarray(v.T)
    _validate(g.shift, v, u, lam)
    return Spectrum(graph_n=g.n, v=v, u=u, eigenvalues=lam)


def gft(s: Spectrum, x) -> np.ndarray:
    """Graph Fourier transform: expand x in the eigenvector basis (U @ x)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (s.graph_n,):
        raise DimensionMismatchError(
            f"signal has shape {x.shape}, graph has {s.graph_n} nodes"
        )
    return s.u @ x


def igft(s: Spectrum, xhat) -> np.ndarray:
    """Inverse graph Fourier transform: synthesize from coefficients (V @ xhat)."""
    xhat = np.asarray(xhat, dtype=np.float64)
    if xhat.shape != (s.graph_n,):
        raise DimensionMismatchError(
            f"coefficients have shape {xhat.shape}, graph has {s.graph_n} nodes"
        )
    return s.v @ xhat


@dataclass(frozen=True, eq=False)
class ProductSpectrum:
    """Per-factor spectra of a product graph; never materializes the basis."""

    factors: tuple[Spectrum, ...]
    kind: ProductKind

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(s.graph_n for s in self.factors)

    @property
    def n_total(self) -> int:
        out = 1
        for n in self.shape:
            out *= n
        return out


def product_spectrum(pg: ProductGraph) -> ProductSpectrum:
    """Eigendecompose every factor of a product graph."""
    return ProductSpectrum(
        factors=tuple(eigendecompose(g) for g in pg.factors), kind=pg.kind
    )


def _check_freq(ps: ProductSpectrum, f) -> tuple[int, ...]:
    f = tuple(int(i) for i in f)
    if len(f) != len(ps.factors):
        raise OutOfRangeError(
            f"frequency tuple has {len(f)} components, spectrum has {len(ps.factors)}"
        )
    for j, (i, nj) in enumerate(zip(f, ps.shape)):
        if not 0 <= i < nj:
            raise OutOfRangeError(f"component {j + 1} is {i}, valid range is [0, {nj})")
    return f


def product_eigenvalue(ps: ProductSpectrum, f) -> float:
    """Eigenvalue of the product graph at a frequency tuple.

    Kronecker products multiply factor eigenvalues, Cartesian products add
    them, and the strong product combines both: prod(1 + lam_j) - 1.
    """
    f = _check_freq(ps, f)
    lams = [s.eigenvalues[i] for s, i in zip(ps.factors, f)]
    if ps.kind is ProductKind.KRONECKER:
        out = 1.0
        for l in lams:
            out *= l
        return float(out)
    if ps.kind is ProductKind.CARTESIAN:
        return float(sum(lams))
    out = 1.0
    for l in lams:
        out *= 1.0 + l
    return float(out - 1.0)


def product_eigenvector(ps: ProductSpectrum, f) -> np.ndarray:
    """Assemble the product eigenvector for a frequency tuple.

    The Kronecker product of the indexed factor columns; entry placement
    follows the flat-index convention of :func:`prodsamp.graphs.flat_index`.
    """
    f = _check_freq(ps, f)
    if ps.n_total > _MAX_VECTOR_LEN:
        raise TooLargeError(
            f"product eigenvector would have {ps.n_total} entries"
        )
    out = ps.factors[0].v[:, f[0]]
    for s, i in zip(ps.factors[1:], f[1:]):
        out = np.kron(out, s.v[:, i])
    return out


def eigenvalue_table(ps: ProductSpectrum) -> np.ndarray:
    """All product eigenvalues, indexed by flat frequency order."""
    return kernels.eigenvalue_table(
        [s.eigenvalues for s in ps.factors], ps.kind.value
    )


def order_frequencies(ps: ProductSpectrum):
    """Iterate all frequency tuples sorted by product eigenvalue, descending.

    Ties break by lexicographic tuple order (equivalently, ascending flat
    index).  Yields lazily; only numeric arrays of the full length are ever
    held, not a list of tuples.
    """
    table = eigenvalue_table(ps)
    # Stable sort on the negated table keeps ascending flat order in ties.
    order = np.argsort(-table, kind="stable")
    shape = ps.shape

    def decode(flat):
        out = []
        for nj in reversed(shape):
            out.append(flat % nj)
            flat //= nj
        return tuple(reversed(out))

    return (decode(int(flat)) for flat in order)
