"""Weighted graphs and their Kronecker, Cartesian and strong products.

A graph is held as a dense shift matrix (weighted adjacency); a product
graph is an ordered list of factor graphs plus the product kind.  Nodes of
a product graph are tuples, one index per factor, mapped to flat indices
by a mixed-radix encoding with the first factor most significant.  That
encoding is exactly the block order of the Kronecker product, so gathers
on flat vectors agree entrywise with the materialized operators.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NonSquareError,
    NotSymmetricError,
    OutOfRangeError,
    TooLargeError,
)

# Largest node count for which materialize() will form a dense shift.
DEFAULT_DENSE_CAP = 4096

# Product node counts must stay addressable by a signed 64-bit index.
_MAX_NODES = 2**62


@dataclass(frozen=True, eq=False)
class Graph:
    """A weighted graph given by its dense shift matrix.

    Attributes
    ----------
    shift : np.ndarray
        n x n real matrix; entry (m, n) is the weight of the edge n -> m.
    n : int
        Node count.
    symmetric : bool
        True iff ``shift`` equals its transpose exactly as stored.
    """

    shift: np.ndarray
    n: int
    symmetric: bool

    def __post_init__(self):
        self.shift.setflags(write=False)


class ProductKind(enum.Enum):
    """The three supported graph product compositions."""

    KRONECKER = "kron"
    CARTESIAN = "cart"
    STRONG = "strong"


def make_graph(shift) -> Graph:
    """Wrap a square matrix as a :class:`Graph`.

    The symmetric flag is set by exact (bitwise) transpose comparison, not
    by tolerance: spectral operations refuse asymmetric input rather than
    silently approximating it.

    Raises
    ------
    NonSquareError
        If the matrix is not square.
    """
    a = np.array(shift, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareError(f"shift matrix must be square, got shape {a.shape}")
    if a.shape[0] < 1:
        raise NonSquareError("graph needs at least one node")
    return Graph(shift=a, n=a.shape[0], symmetric=bool(np.array_equal(a, a.T)))


@dataclass(frozen=True, eq=False)
class ProductGraph:
    """An ordered list of factor graphs composed under a product kind.

    All factors must be symmetric (the spectral machinery relies on real
    orthonormal eigenbases) and the total node count must stay indexable.
    """

    factors: tuple[Graph, ...]
    kind: ProductKind
    n_total: int = field(init=False)

    def __post_init__(self):
        if len(self.factors) < 1:
            raise OutOfRangeError("a product graph needs at least one factor")
        for j, g in enumerate(self.factors):
            if not g.symmetric:
                raise NotSymmetricError(f"factor {j + 1} is not symmetric")
        n = math.prod(g.n for g in self.factors)
        if n > _MAX_NODES:
            raise TooLargeError(f"product node count {n} exceeds the index range")
        object.__setattr__(self, "n_total", n)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(g.n for g in self.factors)

    @property
    def j_factors(self) -> int:
        return len(self.factors)


def product_graph(factors, kind: ProductKind | str) -> ProductGraph:
    """Compose factor graphs into a :class:`ProductGraph`."""
    if isinstance(kind, str):
        kind = ProductKind(kind)
    return ProductGraph(factors=tuple(factors), kind=kind)


def _check_tuple(pg: ProductGraph, t) -> tuple[int, ...]:
    t = tuple(int(i) for i in t)
    if len(t) != pg.j_factors:
        raise OutOfRangeError(
            f"node tuple has {len(t)} components, product graph has {pg.j_factors}"
        )
    for j, (i, nj) in enumerate(zip(t, pg.shape)):
        if not 0 <= i < nj:
            raise OutOfRangeError(f"component {j + 1} is {i}, valid range is [0, {nj})")
    return t


def flat_index(pg: ProductGraph, t) -> int:
    """Encode a node tuple as a flat index (factor 1 most significant)."""
    t = _check_tuple(pg, t)
    flat = 0
    for i, nj in zip(t, pg.shape):
        flat = flat * nj + i
    return flat


def tuple_index(pg: ProductGraph, flat: int) -> tuple[int, ...]:
    """Decode a flat index back into a node tuple (inverse of flat_index)."""
    flat = int(flat)
    if not 0 <= flat < pg.n_total:
        raise OutOfRangeError(f"flat index {flat} outside [0, {pg.n_total})")
    out = []
    for nj in reversed(pg.shape):
        out.append(flat % nj)
        flat //= nj
    return tuple(reversed(out))


def _pairwise(kind: ProductKind, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if kind is ProductKind.KRONECKER:
        return np.kron(a, b)
    ia = np.eye(a.shape[0])
    ib = np.eye(b.shape[0])
    cart = np.kron(a, ib) + np.kron(ia, b)
    if kind is ProductKind.CARTESIAN:
        return cart
    return np.kron(a, b) + cart


def materialize(pg: ProductGraph, max_nodes: int | None = None) -> Graph:
    """Form the dense shift of the whole product graph.

    Intended for tests and oracles; the sampling pipeline never needs it.
    The Cartesian and strong compositions are folded pairwise left to
    right (both products are associative, so the fold order is immaterial).

    Raises
    ------
    TooLargeError
        If the product has more than ``max_nodes`` nodes
        (default: :data:`DEFAULT_DENSE_CAP`).
    """
    cap = DEFAULT_DENSE_CAP if max_nodes is None else max_nodes
    if pg.n_total > cap:
        raise TooLargeError(
            f"product graph has {pg.n_total} nodes, dense cap is {cap}"
        )
    shift = pg.factors[0].shift
    for g in pg.factors[1:]:
        shift = _pairwise(pg.kind, shift, g.shift)
    return make_graph(shift)
