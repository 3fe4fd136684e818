"""Bandlimited signal synthesis, error metrics and graph generators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParamError, DimensionMismatchError
from .graphs import Graph, make_graph
from .product_sampling import kron_apply, project_support, _normalize_support
from .sampling import SupportSet
from .spectral import ProductSpectrum, _check_freq


@dataclass(frozen=True, eq=False)
class BandlimitedSignal:
    """A signal together with the frequency support it was built on."""

    x: np.ndarray
    support: tuple
    coeffs: np.ndarray


def synthesize(spec, support, coeffs=None, seed=None) -> BandlimitedSignal:
    """Build a signal bandlimited to the given support.

    For a single-graph :class:`Spectrum` the support is a
    :class:`SupportSet` (or an index list); for a :class:`ProductSpectrum`
    it is a list of frequency tuples, and the signal is assembled
    factor-wise without materializing the product basis: the coefficients
    are scattered into a tensor over the projected per-factor supports and
    pushed through the Kronecker-factored basis.

    If ``coeffs`` is omitted, standard-normal coefficients are drawn from
    ``seed``.
    """
    if isinstance(spec, ProductSpectrum):
        tuples = _normalize_support(support)
        for t in tuples:
            _check_freq(spec, t)
        k = len(tuples)
        coeffs = _resolve_coeffs(coeffs, k, seed)
        r_sets, _ = project_support(tuples)
        positions = [{idx: pos for pos, idx in enumerate(r)} for r in r_sets]
        ctensor = np.zeros([len(r) for r in r_sets])
        for t, c in zip(tuples, coeffs):
            ctensor[tuple(positions[j][i] for j, i in enumerate(t))] = c
        mats = [s.v[:, list(r)] for s, r in zip(spec.factors, r_sets)]
        x = kron_apply(mats, ctensor.reshape(-1))
        return BandlimitedSignal(x=x, support=tuple(tuples), coeffs=coeffs)

    supp = support if isinstance(support, SupportSet) else SupportSet(tuple(support))
    if max(supp.indices) >= spec.graph_n:
        raise BadParamError(
            f"support index {max(supp.indices)} outside [0, {spec.graph_n})"
        )
    coeffs = _resolve_coeffs(coeffs, supp.k, seed)
    x = spec.v[:, list(supp.indices)] @ coeffs
    return BandlimitedSignal(x=x, support=supp.indices, coeffs=coeffs)


def _resolve_coeffs(coeffs, k, seed):
    if coeffs is None:
        coeffs = np.random.default_rng(seed).standard_normal(k)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape != (k,):
        raise DimensionMismatchError(
            f"need {k} coefficients for a support of size {k}, got {coeffs.shape}"
        )
    return coeffs


def relative_error(x, x_rec) -> float:
    """l2 recovery error ||x - x_rec|| / ||x|| (plain ||x_rec|| if x = 0)."""
    x = np.asarray(x, dtype=np.float64)
    x_rec = np.asarray(x_rec, dtype=np.float64)
    if x.shape != x_rec.shape:
        raise DimensionMismatchError(
            f"shapes {x.shape} and {x_rec.shape} do not match"
        )
    ref = np.linalg.norm(x)
    if ref == 0.0:
        return float(np.linalg.norm(x_rec))
    return float(np.linalg.norm(x - x_rec) / ref)


def random_graph(n: int, model: str, seed=None, p: float | None = None) -> Graph:
    """Deterministic test/bench graphs: path, cycle, or Erdos-Renyi.

    All outputs are symmetric 0/1 adjacencies without self loops.
    """
    n = int(n)
    if n < 1:
        raise BadParamError("graph needs at least one node")
    if model == "path":
        a = np.zeros((n, n))
        idx = np.arange(n - 1)
        a[idx, idx + 1] = 1.0
        a[idx + 1, idx] = 1.0
        return make_graph(a)
    if model == "cycle":
        if n < 3:
            raise BadParamError("cycle graphs need at least 3 nodes")
        a = np.zeros((n, n))
        idx = np.arange(n)
        a[idx, (idx + 1) % n] = 1.0
        a[(idx + 1) % n, idx] = 1.0
        return make_graph(a)
    if model == "erdos_renyi":
        if p is None or not 0.0 <= p <= 1.0:
            raise BadParamError("erdos_renyi needs an edge probability in [0, 1]")
        rng = np.random.default_rng(seed)
        upper = np.triu(rng.random((n, n)) < p, k=1).astype(np.float64)
        return make_graph(upper + upper.T)
    raise BadParamError(f"unknown graph model {model!r}")
