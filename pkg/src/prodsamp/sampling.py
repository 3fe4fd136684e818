"""Sampling and perfect recovery of bandlimited signals on one graph.

Given a spectrum and a frequency support of size K, a sampling plan picks
m >= K nodes whose rows of the supported eigenvector block are linearly
independent, and precomputes the interpolation operator that recovers any
signal bandlimited to that support from its samples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    BadParamError,
    DimensionMismatchError,
    InfeasibleError,
    NumericalFailureError,
    OutOfRangeError,
    OversampledPlanError,
    RankDeficientError,
    TooLargeError,
)
from .spectral import Spectrum

# Numerical stand-in for the exact rank condition.
RANK_TOL = 1e-10
# Singular values below PINV_RCOND * sigma_max are treated as zero.
PINV_RCOND = 1e-12
# Exhaustive subset search is only allowed up to this node count.
EXHAUSTIVE_MAX_N = 12
RANDOM_BUDGET = 1000

STRATEGIES = ("pivoted-qr", "exhaustive", "random-verified")


@dataclass(frozen=True)
class SupportSet:
    """Ordered set of frequency indices defining the bandlimited class."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(idx) < 1:
            raise BadParamError("support must contain at least one frequency")
        if len(set(idx)) != len(idx):
            raise BadParamError("support indices must be distinct")
        if any(i < 0 for i in idx):
            raise OutOfRangeError("support indices must be non-negative")
        object.__setattr__(self, "indices", idx)

    @property
    def k(self) -> int:
        return len(self.indices)


def _supported_columns(s: Spectrum, supp: SupportSet) -> np.ndarray:
    if max(supp.indices) >= s.graph_n:
        raise OutOfRangeError(
            f"support index {max(supp.indices)} outside [0, {s.graph_n})"
        )
    return s.v[:, list(supp.indices)]


def _sigma_min(rows: np.ndarray) -> float:
    return float(np.linalg.svd(rows, compute_uv=False)[-1])


@dataclass(frozen=True, eq=False)
class SamplingPlan:
    """Sample set plus the precomputed recovery operators.

    ``w`` is the pseudoinverse of the sampled eigenvector rows and ``phi``
    the interpolation operator; ``phi @ samples`` recovers any signal
    bandlimited to ``support`` exactly (up to floating point).
    """

    graph_n: int
    support: SupportSet
    sample_set: tuple[int, ...]
    v_k: np.ndarray
    w: np.ndarray
    phi: np.ndarray
    sigma_min: float

    @property
    def k(self) -> int:
        return self.support.k

    @property
    def m(self) -> int:
        return len(self.sample_set)

    def sampling_matrix(self) -> np.ndarray:
        """Materialize the 0/1 row-selection operator (export only)."""
        psi = np.zeros((self.m, self.graph_n))
        psi[np.arange(self.m), list(self.sample_set)] = 1.0
        return psi


def select_sample_set(
    s: Spectrum,
    supp: SupportSet,
    strategy: str = "pivoted-qr",
    m: int | None = None,
    seed=None,
) -> list[int]:
    """Choose m nodes satisfying the rank condition for the support.

    Strategies
    ----------
    pivoted-qr (default)
        Row selection by column-pivoted QR of the transposed eigenvector
        block; near-optimal smallest singular value at polynomial cost.
    exhaustive
        Maximize the smallest singular value over all (n choose m) sets;
        allowed only for n <= 12.
    random-verified
        Rejection-sample node sets until the rank condition holds,
        deterministic under ``seed``; gives up after 1000 attempts.

    Raises
    ------
    InfeasibleError
        If no set passing the rank check was found.
    TooLargeError
        For exhaustive search beyond n = 12.
    """
    k = supp.k
    m = k if m is None else int(m)
    if m < k:
        raise BadParamError(f"sample count {m} is below the bandwidth {k}")
    if m > s.graph_n:
        raise BadParamError(f"sample count {m} exceeds node count {s.graph_n}")
    v_k = _supported_columns(s, supp)

    if strategy == "pivoted-qr":
        _, _, piv = scipy.linalg.qr(v_k.T, pivoting=True, mode="economic")
        nodes = [int(i) for i in piv[:m]]
    elif strategy == "exhaustive":
        if s.graph_n > EXHAUSTIVE_MAX_N:
            raise TooLargeError(
                f"exhaustive selection is capped at n = {EXHAUSTIVE_MAX_N}"
            )
        best, best_sigma = None, -1.0
        for cand in itertools.combinations(range(s.graph_n), m):
            sigma = _sigma_min(v_k[list(cand)])
            if sigma > best_sigma:
                best, best_sigma = cand, sigma
        nodes = list(best)
    elif strategy == "random-verified":
        rng = np.random.default_rng(seed)
        nodes = None
        for _ in range(RANDOM_BUDGET):
            cand = rng.choice(s.graph_n, size=m, replace=False)
            if _sigma_min(v_k[cand]) > RANK_TOL:
                nodes = [int(i) for i in cand]
                break
        if nodes is None:
            raise InfeasibleError(
                f"no full-rank sample set found in {RANDOM_BUDGET} attempts"
            )
    else:
        raise BadParamError(f"unknown strategy {strategy!r}; use one of {STRATEGIES}")

    if _sigma_min(v_k[nodes]) <= RANK_TOL:
        raise InfeasibleError("selected sample set fails the rank condition")
    return nodes


def build_plan(s: Spectrum, supp: SupportSet, sample_set) -> SamplingPlan:
    """Assemble the recovery operators for a given sample set.

    Raises
    ------
    RankDeficientError
        If the sampled eigenvector rows are (numerically) rank deficient,
        i.e. the sample set cannot recover this support.
    """
    nodes = [int(i) for i in sample_set]
    if len(set(nodes)) != len(nodes):
        raise BadParamError("sample set contains duplicate nodes")
    if any(not 0 <= i < s.graph_n for i in nodes):
        raise OutOfRangeError(f"sample nodes must lie in [0, {s.graph_n})")
    v_k = _supported_columns(s, supp)
    if len(nodes) < supp.k:
        raise BadParamError(
            f"sample count {len(nodes)} is below the bandwidth {supp.k}"
        )
    sampled_rows = v_k[nodes]
    sigma = _sigma_min(sampled_rows)
    if sigma <= RANK_TOL:
        raise RankDeficientError(
            f"sigma_min = {sigma:.3e} <= {RANK_TOL}; sample set cannot "
            f"recover this support"
        )
    w = np.linalg.pinv(sampled_rows, rcond=PINV_RCOND)
    phi = v_k @ w
    if np.max(np.abs(phi @ sampled_rows - v_k)) > 1e-9:
        raise NumericalFailureError("interpolation operator failed its invariant")
    return SamplingPlan(
        graph_n=s.graph_n,
        support=supp,
        sample_set=tuple(nodes),
        v_k=v_k,
        w=w,
        phi=phi,
        sigma_min=sigma,
    )


def sample(x, plan: SamplingPlan) -> np.ndarray:
    """Gather the signal at the sample set (applies the sampling operator)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (plan.graph_n,):
        raise DimensionMismatchError(
            f"signal has shape {x.shape}, graph has {plan.graph_n} nodes"
        )
    return x[list(plan.sample_set)]


def reconstruct(x_m, plan: SamplingPlan) -> np.ndarray:
    """Interpolate samples back to a full signal (phi @ x_m)."""
    x_m = np.asarray(x_m, dtype=np.float64)
    if x_m.shape != (plan.m,):
        raise DimensionMismatchError(
            f"samples have shape {x_m.shape}, plan takes {plan.m} samples"
        )
    return plan.phi @ x_m


@dataclass(frozen=True, eq=False)
class SampledGraph:
    """The K x K shift the sampled signal lives on, with its GFT basis."""

    shift: np.ndarray
    gft_basis: np.ndarray


def sampled_graph(plan: SamplingPlan, s: Spectrum) -> SampledGraph:
    """Shift matrix of the sampled signal: W^-1 diag(lam_K) W.

    Requires critical sampling (m = K) so that W is invertible; the
    sampled signal's GFT basis is W itself.

    Raises
    ------
    OversampledPlanError
        If the plan oversamples (m > K).
    """
    if plan.m != plan.k:
        raise OversampledPlanError(
            f"sampled shift needs m = K, plan has m = {plan.m}, K = {plan.k}"
        )
    lam_k = s.eigenvalues[list(plan.support.indices)]
    try:
        shift = np.linalg.solve(plan.w, lam_k[:, None] * plan.w)
    except np.linalg.LinAlgError as exc:
        raise RankDeficientError(f"sampled basis is singular: {exc}") from exc
    return SampledGraph(shift=shift, gft_basis=plan.w)
