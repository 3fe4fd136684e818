"""Benchmark harness: factorized vs dense pipelines, kernel backends,
and the Cartesian smooth-signal sample-count study.

Benchmarks double as correctness checks: every run that performs a
recovery also records its relative error, and the error column is part of
the emitted table.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigError
from .graphs import DEFAULT_DENSE_CAP, ProductKind, materialize, product_graph
from .io import read_matrix_market
from .product_sampling import (
    build_product_plan,
    product_reconstruct,
    product_sample,
    project_support,
)
from .sampling import SupportSet, build_plan, reconstruct, sample, select_sample_set
from .signals import random_graph, relative_error, synthesize
from .spectral import eigendecompose, order_frequencies, product_spectrum


def dense_cap() -> int:
    """Size cap for the dense comparison pipeline.

    PRODSAMP_DENSE_CAP overrides both the built-in default and any value
    from a config file.
    """
    env = os.environ.get("PRODSAMP_DENSE_CAP")
    return int(env) if env else DEFAULT_DENSE_CAP


@dataclass(frozen=True)
class BenchRecord:
    """One timed pipeline run; timings in seconds, flops as raw counts."""

    scenario: str
    pipeline: str  # factorized | dense
    kind: str
    n_total: int
    j_factors: int
    factor_sizes: tuple[int, ...]
    k: int
    s: int
    timings: dict = field(default_factory=dict)
    recovery_error: float = float("nan")
    flops: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if any(t < 0 for t in self.timings.values()):
            raise ConfigError("negative timing recorded")


BENCH_COLUMNS = [
    "scenario",
    "pipeline",
    "kind",
    "N",
    "J",
    "factor_sizes",
    "K",
    "S",
    "t_spectral",
    "t_selection",
    "t_sampling",
    "t_recovery",
    "recovery_error",
    "flops_spectral",
    "flops_recovery",
    "seed",
]


def record_row(r: BenchRecord) -> list[str]:
    return [
        r.scenario,
        r.pipeline,
        r.kind,
        str(r.n_total),
        str(r.j_factors),
        "x".join(str(n) for n in r.factor_sizes),
        str(r.k),
        str(r.s),
        *(f"{r.timings.get(k, float('nan')):.9f}"
          for k in ("spectral", "selection", "sampling", "recovery")),
        f"{r.recovery_error:.17g}",
        str(r.flops.get("spectral", "")),
        str(r.flops.get("recovery", "")),
        str(r.seed),
    ]


def _build_factor(spec: dict, seed: int, base_dir: str | None = None):
    if "file" in spec:
        path = spec["file"]
        if base_dir is not None and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        return read_matrix_market(path)
    if "model" not in spec or "n" not in spec:
        raise ConfigError(f"factor spec needs 'model'+'n' or 'file': {spec}")
    return random_graph(
        int(spec["n"]), spec["model"], seed=seed, p=spec.get("p")
    )


def _validate_scenario(sc: dict):
    for key in ("id", "kind", "k", "factors"):
        if key not in sc:
            raise ConfigError(f"scenario missing {key!r}: {sc}")
    if sc["kind"] not in ("kron", "cart", "strong"):
        raise ConfigError(f"unknown product kind {sc['kind']!r}")
    if int(sc["k"]) < 1:
        raise ConfigError("bandwidth k must be >= 1")


def _sweep_flops(p_dims, q_dims) -> int:
    total = 0
    j_count = len(p_dims)
    for j in range(j_count):
        lead = math.prod(q_dims[:j])
        trail = math.prod(p_dims[j + 1:])
        total += p_dims[j] * q_dims[j] * lead * trail
    return total


def _run_factorized(scenario, factors, kind, k, strategy, seed) -> BenchRecord:
    pg = product_graph(factors, kind)

    t0 = time.perf_counter()
    ps = product_spectrum(pg)
    t_spectral = time.perf_counter() - t0

    t0 = time.perf_counter()
    support = list(itertools.islice(order_frequencies(ps), k))
    plan = build_product_plan(ps, support, strategy=strategy, seed=seed)
    t_selection = time.perf_counter() - t0

    sig = synthesize(ps, support, seed=seed)
    t0 = time.perf_counter()
    x_m = product_sample(sig.x, plan)
    t_sampling = time.perf_counter() - t0
    t0 = time.perf_counter()
    x_rec = product_reconstruct(x_m, plan)
    t_recovery = time.perf_counter() - t0

    shape = pg.shape
    return BenchRecord(
        scenario=scenario,
        pipeline="factorized",
        kind=kind.value,
        n_total=pg.n_total,
        j_factors=pg.j_factors,
        factor_sizes=shape,
        k=k,
        s=plan.s,
        timings={
            "spectral": t_spectral,
            "selection": t_selection,
            "sampling": t_sampling,
            "recovery": t_recovery,
        },
        recovery_error=relative_error(sig.x, x_rec),
        flops={
            "spectral": sum(n**3 for n in shape),
            "recovery": _sweep_flops(
                list(shape), [p.m for p in plan.factor_plans]
            ),
        },
        seed=seed,
    )


def _run_dense(scenario, factors, kind, k, strategy, seed, cap) -> BenchRecord:
    pg = product_graph(factors, kind)

    t0 = time.perf_counter()
    g = materialize(pg, max_nodes=cap)
    s_dense = eigendecompose(g)
    t_spectral = time.perf_counter() - t0

    supp = SupportSet(tuple(range(k)))
    t0 = time.perf_counter()
    nodes = select_sample_set(s_dense, supp, strategy=strategy, seed=seed)
    plan = build_plan(s_dense, supp, nodes)
    t_selection = time.perf_counter() - t0

    sig = synthesize(s_dense, supp, seed=seed)
    t0 = time.perf_counter()
    x_m = sample(sig.x, plan)
    t_sampling = time.perf_counter() - t0
    t0 = time.perf_counter()
    x_rec = reconstruct(x_m, plan)
    t_recovery = time.perf_counter() - t0

    return BenchRecord(
        scenario=scenario,
        pipeline="dense",
        kind=kind.value,
        n_total=pg.n_total,
        j_factors=pg.j_factors,
        factor_sizes=pg.shape,
        k=k,
        s=plan.m,
        timings={
            "spectral": t_spectral,
            "selection": t_selection,
            "sampling": t_sampling,
            "recovery": t_recovery,
        },
        recovery_error=relative_error(sig.x, x_rec),
        flops={
            "spectral": pg.n_total**3,
            "recovery": pg.n_total * plan.m,
        },
        seed=seed,
    )


def bench_pipeline(config: dict, base_dir: str | None = None) -> list[BenchRecord]:
    """Run every scenario in the config; one record per pipeline per rep.

    Scenario schema: {"id", "kind", "k", "factors": [factor specs],
    "strategy"?, "repetitions"?}.  The dense pipeline runs only when the
    product node count is within the dense cap; otherwise only factorized
    records are emitted.
    """
    if "scenarios" not in config or not config["scenarios"]:
        raise ConfigError("bench config needs a non-empty 'scenarios' list")
    base_seed = int(config.get("seed", 0))
    cap = int(config.get("dense_cap", DEFAULT_DENSE_CAP))
    if os.environ.get("PRODSAMP_DENSE_CAP"):
        cap = dense_cap()

    records = []
    for idx, sc in enumerate(config["scenarios"]):
        _validate_scenario(sc)
        kind = ProductKind(sc["kind"])
        k = int(sc["k"])
        strategy = sc.get("strategy", "pivoted-qr")
        reps = int(sc.get("repetitions", 1))
        for rep in range(reps):
            seed = base_seed + 1000 * idx + rep
            factors = [
                _build_factor(fs, seed + 17 * fj, base_dir)
                for fj, fs in enumerate(sc["factors"])
            ]
            records.append(
                _run_factorized(sc["id"], factors, kind, k, strategy, seed)
            )
            n_total = math.prod(g.n for g in factors)
            if n_total <= cap:
                records.append(
                    _run_dense(sc["id"], factors, kind, k, strategy, seed, cap)
                )
    return records


@dataclass(frozen=True)
class StudyRow:
    k: int
    s: int
    k_plus_j: int
    bound_holds: bool


def cartesian_smooth_study(n1: int, n2: int, k_max: int) -> list[StudyRow]:
    """Sample counts for top-K smooth supports on a Cartesian path product.

    Smoothness ordering is descending adjacency-eigenvalue sums.  Reports
    whether the factorized sample count stays within K + J for each K;
    violations are recorded, never raised.
    """
    if k_max < 1 or k_max > n1 * n2:
        raise ConfigError(f"k_max must be in [1, {n1 * n2}]")
    pg = product_graph(
        [random_graph(n1, "path"), random_graph(n2, "path")], ProductKind.CARTESIAN
    )
    ps = product_spectrum(pg)
    top = list(itertools.islice(order_frequencies(ps), k_max))
    rows = []
    for k in range(1, k_max + 1):
        _, s = project_support(top[:k])
        rows.append(StudyRow(k=k, s=s, k_plus_j=k + 2, bound_holds=s <= k + 2))
    return rows


@dataclass(frozen=True)
class KernelRecord:
    case: str
    backend: str
    factor_shapes: tuple
    best_seconds: float
    max_abs_diff: float  # vs the python backend on the same operands


def bench_kernels(cases=None, reps: int = 5, seed: int = 0) -> list[KernelRecord]:
    """Time kron_apply on every available backend over the given cases.

    Each case is a list of (p, q) factor shapes.  The python backend is
    the reference for the cross-backend difference column.
    """
    if cases is None:
        cases = [
            [(16, 16)] * 2,
            [(64, 64)] * 2,
            [(8, 8)] * 4,
            [(4, 4)] * 6,
            [(64, 8), (8, 64)],
        ]
    rng = np.random.default_rng(seed)
    records = []
    for shapes in cases:
        mats = [rng.standard_normal(s) for s in shapes]
        y = rng.standard_normal(math.prod(s[1] for s in shapes))
        reference = kernels.kron_apply(mats, y, backend=kernels.available_backends()["python"])
        label = "x".join(f"{p}by{q}" for p, q in shapes)
        for name, backend in kernels.available_backends().items():
            best = float("inf")
            out = None
            for _ in range(reps):
                t0 = time.perf_counter()
                out = kernels.kron_apply(mats, y, backend=backend)
                best = min(best, time.perf_counter() - t0)
            records.append(
                KernelRecord(
                    case=label,
                    backend=name,
                    factor_shapes=tuple(shapes),
                    best_seconds=best,
                    max_abs_diff=float(np.max(np.abs(out - reference))),
                )
            )
    return records
